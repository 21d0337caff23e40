#pragma once

#include "tantra/metamodel.hpp"

namespace tantra {

enum class GoalDimension { Customer, Financial, Process, Strategic, Ethical };

inline constexpr std::array<GoalDimension, 5> kGoalDimensions = {
    GoalDimension::Customer, GoalDimension::Financial, GoalDimension::Process,
    GoalDimension::Strategic, GoalDimension::Ethical};

const char* goal_dimension_name(GoalDimension d);
std::optional<GoalDimension> parse_goal_dimension(std::string_view name);
GoalDimension require_goal_dimension(std::string_view name);  // InvalidDimension

// ">=" target is a floor, "<=" a ceiling, "~=" a band of +-epsilon.
enum class Comparator { Gte, Lte, Approx };

const char* comparator_name(Comparator c);
std::optional<Comparator> parse_comparator(std::string_view name);
Comparator require_comparator(std::string_view name);  // InvalidComparator

struct GoalTarget {
  Comparator cmp = Comparator::Gte;
  Decimal value;
  Decimal epsilon;  // Approx only
  std::string unit;
};

struct Goal {
  std::string id;  // node id
  GoalDimension dimension = GoalDimension::Customer;
  std::string statement;
  std::string metric;  // Why-aspect element id
  GoalTarget target;
  std::int64_t review_period_days = 0;
};

enum class GoalStatus { Met, NotMet, NoData };
const char* goal_status_name(GoalStatus s);

struct GoalEvaluation {
  GoalStatus status = GoalStatus::NoData;
  std::optional<Decimal> latest;
  std::optional<Date> observed_on;
};

struct MarkerDef {
  std::string name;
  std::string metric;     // element reference (resolved before storage)
  std::string direction;  // "increase" | "decrease"
};

struct ChangeMarker {
  std::string id;  // node id
  std::string name;
  std::string metric;  // bound element id, empty when the binding is gone
  std::string direction;
};

// The 14 canonical intervention fields, in their fixed order.
inline constexpr std::array<const char*, 14> kInterventionFieldNames = {
    "summary_statement", "problem_statement", "overall_goal",   "change_process",
    "change_markers",    "meta_theory",       "inputs",         "actors",
    "domains_of_change", "internal_risks",    "assumptions",    "external_risks",
    "obstacles",         "knock_on_effects"};

struct InterventionFields {
  std::string summary_statement;
  std::string problem_statement;
  std::string overall_goal;
  std::string change_process;
  std::vector<MarkerDef> change_markers;
  std::string meta_theory;
  std::vector<std::string> inputs;
  std::vector<std::string> actors;
  std::vector<std::string> domains_of_change;
  std::vector<std::string> internal_risks;
  std::vector<std::string> assumptions;
  std::vector<std::string> external_risks;
  std::vector<std::string> obstacles;
  std::vector<std::string> knock_on_effects;
  std::vector<std::string> linked_goals;  // goal ids, may dangle until validation
};

struct Intervention {
  std::string id;  // node id
  std::string intervention_id;
  InterventionFields fields;
  std::vector<ChangeMarker> markers;
};

inline constexpr char kBindsMetricEdge[] = "binds_metric";
inline constexpr char kHasMarkerEdge[] = "has_marker";
inline constexpr char kObservationEdge[] = "observation";

// Scorecard goals, Theory-of-Change interventions, change-marker series
// and goal evaluation. Registration never blocks on completeness; the
// deficiencies are reported by validate_intervention.
class NormativeModel {
 public:
  NormativeModel(GraphStore& store, TantraModel& model) : store_(store), model_(model) {}

  // metric_element must exist with aspect Why (NotWhyAspect otherwise).
  Goal define_goal(GoalDimension dimension, const std::string& statement,
                   const std::string& metric_element, const GoalTarget& target,
                   std::int64_t review_period_days);
  Goal goal(const std::string& id) const;  // UnknownGoal
  std::vector<Goal> goals() const;         // id order

  // Marker metrics must exist (any aspect; non-Why is a validation flag).
  std::string register_intervention(const InterventionFields& fields,
                                    const std::string& intervention_id = "");
  Intervention intervention(const std::string& id) const;  // node id or intervention_id
  std::vector<Intervention> interventions() const;

  // Empty iff all 14 fields are populated, every marker binds a Why
  // element, and every linked goal exists. Kinds: MissingField,
  // MarkerNotMetric, DanglingGoal.
  std::vector<Violation> validate_intervention(const std::string& id) const;

  // JSON object with the 14 canonical field names plus intervention_id and
  // linked_goals; marker metrics may be given as node id, unique_id, or a
  // display name unique among elements.
  std::string import_intervention_json(const std::string& json_text);
  std::string export_intervention_json(const std::string& id) const;

  // Observations are append-only per marker with strictly increasing dates.
  std::string record_marker(const std::string& marker, const Date& date, const Decimal& value);
  std::vector<std::pair<Date, Decimal>> marker_series(const std::string& marker) const;
  // increasing | decreasing | flat | mixed | insufficient-data
  std::string marker_trend(const std::string& marker) const;
  // node id, or a name unique among ChangeMarker nodes
  std::string resolve_marker(const std::string& text) const;
  std::vector<ChangeMarker> markers() const;

  // Latest observation (date <= as_of; ties broken by observation node id)
  // across every marker bound to the goal's metric element.
  GoalEvaluation evaluate_goal(const std::string& goal_id, const Date& as_of) const;

  // node id, unique_id, or a display name unique among elements.
  std::string resolve_metric(const std::string& text) const;

 private:
  ChangeMarker marker_record(const std::string& id) const;

  GraphStore& store_;
  TantraModel& model_;
};

}  // namespace tantra
