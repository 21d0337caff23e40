#include "doctest.h"
#include "json.hpp"
#include "tantra/normative.hpp"

using namespace tantra;
using cjson = nlohmann::basic_json<std::map>;

namespace {

struct Rig {
  GraphStore store;
  TantraModel model{store};
  NormativeModel normative{store, model};

  std::string metric(const std::string& name) {
    return model.declare_element(Aspect::Why, Perspective::Conceptual, name).id;
  }
};

InterventionFields full_fields(const std::string& metric_id) {
  InterventionFields f;
  f.summary_statement = "s";
  f.problem_statement = "p";
  f.overall_goal = "g";
  f.change_process = "c";
  f.change_markers = {{"uptake", metric_id, "increase"}};
  f.meta_theory = "m";
  f.inputs = {"i1"};
  f.actors = {"a1"};
  f.domains_of_change = {"d1"};
  f.internal_risks = {"r1"};
  f.assumptions = {"as1"};
  f.external_risks = {"er1"};
  f.obstacles = {"o1"};
  f.knock_on_effects = {"k1"};
  return f;
}

// Intervention JSON with every field present; tests blank one at a time.
cjson full_json(const std::string& metric_ref) {
  cjson j;
  j["intervention_id"] = "iv-1";
  j["summary_statement"] = "s";
  j["problem_statement"] = "p";
  j["overall_goal"] = "g";
  j["change_process"] = "c";
  j["change_markers"] =
      cjson::array({cjson{{"name", "uptake"}, {"metric", metric_ref}, {"direction", "increase"}}});
  j["meta_theory"] = "m";
  j["inputs"] = cjson::array({"i1"});
  j["actors"] = cjson::array({"a1"});
  j["domains_of_change"] = cjson::array({"d1"});
  j["internal_risks"] = cjson::array({"r1"});
  j["assumptions"] = cjson::array({"as1"});
  j["external_risks"] = cjson::array({"er1"});
  j["obstacles"] = cjson::array({"o1"});
  j["knock_on_effects"] = cjson::array({"k1"});
  j["linked_goals"] = cjson::array();
  return j;
}

}  // namespace

TEST_SUITE("normative") {
  TEST_CASE("dimension and comparator vocabularies") {
    for (GoalDimension d : kGoalDimensions) {
      CHECK(parse_goal_dimension(goal_dimension_name(d)) == d);
      CHECK(require_goal_dimension(goal_dimension_name(d)) == d);
    }
    CHECK_THROWS_WITH_AS(require_goal_dimension("Spiritual"), doctest::Contains("InvalidDimension"),
                         TantraError);
    CHECK(comparator_name(Comparator::Gte) == std::string(">="));
    CHECK(comparator_name(Comparator::Lte) == std::string("<="));
    CHECK(comparator_name(Comparator::Approx) == std::string("~="));
    CHECK(require_comparator(">=") == Comparator::Gte);
    CHECK_THROWS_WITH_AS(require_comparator("=="), doctest::Contains("InvalidComparator"),
                         TantraError);
  }

  TEST_CASE("define_goal binds a Why element") {
    Rig r;
    std::string m = r.metric("Farm Income Multiple");
    GoalTarget t{Comparator::Gte, Decimal::parse("2"), Decimal(), "x baseline"};
    Goal g = r.normative.define_goal(GoalDimension::Financial, "Double income", m, t, 365);
    CHECK(r.normative.goal(g.id).statement == "Double income");
    CHECK(r.normative.goal(g.id).metric == m);
    CHECK(r.normative.goals().size() == 1);

    std::string who = r.model.declare_element(Aspect::Who, Perspective::Conceptual, "x").id;
    CHECK_THROWS_WITH_AS(r.normative.define_goal(GoalDimension::Financial, "s", who, t, 365),
                         doctest::Contains("NotWhyAspect"), TantraError);
    CHECK_THROWS_AS(r.normative.define_goal(GoalDimension::Financial, "", m, t, 365), TantraError);
    CHECK_THROWS_AS(r.normative.define_goal(GoalDimension::Financial, "s", m, t, 0), TantraError);
    CHECK_THROWS_AS(r.normative.define_goal(GoalDimension::Financial, "s", "n999", t, 365),
                    TantraError);
    GoalTarget neg = t;
    neg.epsilon = Decimal::parse("-1");
    CHECK_THROWS_AS(r.normative.define_goal(GoalDimension::Financial, "s", m, neg, 365),
                    TantraError);
    CHECK_THROWS_AS(r.normative.goal("n999"), TantraError);
  }

  TEST_CASE("canonical field order is fixed") {
    REQUIRE(kInterventionFieldNames.size() == 14);
    CHECK(kInterventionFieldNames[0] == std::string("summary_statement"));
    CHECK(kInterventionFieldNames[4] == std::string("change_markers"));
    CHECK(kInterventionFieldNames[13] == std::string("knock_on_effects"));
  }

  TEST_CASE("register and fetch by node id or intervention id") {
    Rig r;
    std::string m = r.metric("metric");
    std::string id = r.normative.register_intervention(full_fields(m), "iv-1");
    Intervention iv = r.normative.intervention("iv-1");
    CHECK(iv.id == id);
    CHECK(iv.intervention_id == "iv-1");
    CHECK(iv.fields.summary_statement == "s");
    CHECK(iv.fields.inputs == std::vector<std::string>{"i1"});
    REQUIRE(iv.markers.size() == 1);
    CHECK(iv.markers[0].name == "uptake");
    CHECK(iv.markers[0].metric == m);
    CHECK(iv.markers[0].direction == "increase");
    CHECK(r.normative.intervention(id).id == id);
    CHECK(r.normative.interventions().size() == 1);
    CHECK_THROWS_WITH_AS(r.normative.intervention("iv-9"), doctest::Contains("UnknownIntervention"),
                         TantraError);

    InterventionFields bad = full_fields(m);
    bad.change_markers[0].direction = "sideways";
    CHECK_THROWS_AS(r.normative.register_intervention(bad), TantraError);
    bad = full_fields(m);
    bad.change_markers[0].metric = "n999";
    CHECK_THROWS_AS(r.normative.register_intervention(bad), TantraError);
  }

  TEST_CASE("validation deficiencies cover all fourteen fields") {
    Rig r;
    std::string m = r.metric("metric");
    std::string complete = r.normative.register_intervention(full_fields(m), "iv-full");
    CHECK(r.normative.validate_intervention(complete).empty());

    // Single-deletion: blanking any one canonical field yields exactly one
    // MissingField deficiency naming that field.
    for (const char* field : kInterventionFieldNames) {
      cjson j = full_json(m);
      j["intervention_id"] = std::string("iv-del-") + field;
      if (j[field].is_array()) {
        j[field] = cjson::array();
      } else {
        j[field] = "";
      }
      std::string id = r.normative.import_intervention_json(j.dump());
      auto v = r.normative.validate_intervention(id);
      REQUIRE(v.size() == 1);
      CHECK(v[0].kind == "MissingField");
      CHECK(v[0].detail == field);
    }
  }

  TEST_CASE("validation flags non-Why markers and dangling goals") {
    Rig r;
    std::string m = r.metric("metric");
    std::string who = r.model.declare_element(Aspect::Who, Perspective::Conceptual, "actor").id;

    InterventionFields f = full_fields(m);
    f.change_markers.push_back({"head-count", who, "increase"});
    f.linked_goals = {"n999"};
    std::string id = r.normative.register_intervention(f);
    auto v = r.normative.validate_intervention(id);
    REQUIRE(v.size() == 2);
    CHECK(v[0].kind == "MarkerNotMetric");
    CHECK(v[1].kind == "DanglingGoal");

    GoalTarget t{Comparator::Gte, Decimal::parse("1"), Decimal(), ""};
    Goal g = r.normative.define_goal(GoalDimension::Process, "s", m, t, 30);
    InterventionFields ok = full_fields(m);
    ok.linked_goals = {g.id};
    CHECK(r.normative.validate_intervention(r.normative.register_intervention(ok)).empty());
  }

  TEST_CASE("import export round trip is canonical") {
    Rig r;
    std::string m = r.metric("metric");
    std::string id = r.normative.import_intervention_json(full_json("metric").dump());
    std::string exported = r.normative.export_intervention_json(id);
    // Exported form resolves marker metrics to element ids.
    CHECK(exported.find("\"metric\": \"" + m + "\"") != std::string::npos);
    std::string id2 = r.normative.import_intervention_json(exported);
    // Same canonical bytes module the generated intervention node.
    cjson a = cjson::parse(exported);
    cjson b = cjson::parse(r.normative.export_intervention_json(id2));
    CHECK(a == b);

    CHECK_THROWS_AS(r.normative.import_intervention_json("not json"), TantraError);
    CHECK_THROWS_AS(r.normative.import_intervention_json("[]"), TantraError);
    cjson bad = full_json("metric");
    bad["change_markers"][0].erase("direction");
    CHECK_THROWS_AS(r.normative.import_intervention_json(bad.dump()), TantraError);
  }

  TEST_CASE("marker series are append only with strictly increasing dates") {
    Rig r;
    std::string m = r.metric("metric");
    r.normative.register_intervention(full_fields(m), "iv-1");
    std::string marker = r.normative.resolve_marker("uptake");

    r.normative.record_marker(marker, Date::parse("2019-06-01"), Decimal::parse("0.05"));
    r.normative.record_marker(marker, Date::parse("2019-09-01"), Decimal::parse("0.12"));
    CHECK_THROWS_WITH_AS(
        r.normative.record_marker(marker, Date::parse("2019-09-01"), Decimal::parse("0.2")),
        doctest::Contains("NonMonotonicDate"), TantraError);
    CHECK_THROWS_AS(
        r.normative.record_marker(marker, Date::parse("2019-01-01"), Decimal::parse("0.2")),
        TantraError);

    auto series = r.normative.marker_series(marker);
    REQUIRE(series.size() == 2);
    CHECK(series[0].first.to_string() == "2019-06-01");
    CHECK(series[1].second.to_string() == "0.12");
    CHECK_THROWS_AS(r.normative.resolve_marker("nope"), TantraError);
  }

  TEST_CASE("marker trend classifies the series shape") {
    Rig r;
    std::string m = r.metric("metric");
    InterventionFields f = full_fields(m);
    f.change_markers = {{"up", m, "increase"},
                        {"down", m, "decrease"},
                        {"flat", m, "increase"},
                        {"mixed", m, "increase"},
                        {"short", m, "increase"}};
    r.normative.register_intervention(f, "iv-1");

    auto feed = [&](const std::string& name, std::vector<std::string> values) {
      std::string id = r.normative.resolve_marker(name);
      int day = 1;
      for (const auto& v : values) {
        r.normative.record_marker(id, Date{2020, 1, day++}, Decimal::parse(v));
      }
      return r.normative.marker_trend(id);
    };
    CHECK(feed("up", {"1", "2", "3"}) == "increasing");
    CHECK(feed("down", {"3", "2", "1"}) == "decreasing");
    CHECK(feed("flat", {"2", "2", "2"}) == "flat");
    CHECK(feed("mixed", {"1", "3", "2"}) == "mixed");
    CHECK(feed("short", {"1"}) == "insufficient-data");
  }

  TEST_CASE("goal evaluation picks the latest observation up to as_of") {
    Rig r;
    std::string m = r.metric("metric");
    GoalTarget t{Comparator::Gte, Decimal::parse("0.6"), Decimal(), ""};
    Goal g = r.normative.define_goal(GoalDimension::Customer, "uptake", m, t, 180);

    CHECK(r.normative.evaluate_goal(g.id, Date::parse("9999-12-31")).status == GoalStatus::NoData);

    r.normative.register_intervention(full_fields(m), "iv-1");
    std::string marker = r.normative.resolve_marker("uptake");
    r.normative.record_marker(marker, Date::parse("2019-06-01"), Decimal::parse("0.3"));
    r.normative.record_marker(marker, Date::parse("2019-12-01"), Decimal::parse("0.7"));

    GoalEvaluation late = r.normative.evaluate_goal(g.id, Date::parse("9999-12-31"));
    CHECK(late.status == GoalStatus::Met);
    CHECK(late.latest == Decimal::parse("0.7"));
    CHECK(late.observed_on == Date::parse("2019-12-01"));

    GoalEvaluation early = r.normative.evaluate_goal(g.id, Date::parse("2019-06-30"));
    CHECK(early.status == GoalStatus::NotMet);
    CHECK(early.latest == Decimal::parse("0.3"));

    CHECK(r.normative.evaluate_goal(g.id, Date::parse("2019-01-01")).status == GoalStatus::NoData);
  }

  TEST_CASE("comparators gate met against not met") {
    Rig r;
    std::string m = r.metric("metric");
    r.normative.register_intervention(full_fields(m), "iv-1");
    std::string marker = r.normative.resolve_marker("uptake");
    r.normative.record_marker(marker, Date::parse("2020-01-01"), Decimal::parse("0.52"));

    auto eval = [&](Comparator c, const char* value, const char* eps) {
      GoalTarget t{c, Decimal::parse(value), Decimal::parse(eps), ""};
      Goal g = r.normative.define_goal(GoalDimension::Process, "s", m, t, 30);
      return r.normative.evaluate_goal(g.id, Date::parse("9999-12-31")).status;
    };
    CHECK(eval(Comparator::Gte, "0.5", "0") == GoalStatus::Met);
    CHECK(eval(Comparator::Gte, "0.52", "0") == GoalStatus::Met);  // boundary holds
    CHECK(eval(Comparator::Gte, "0.53", "0") == GoalStatus::NotMet);
    CHECK(eval(Comparator::Lte, "0.52", "0") == GoalStatus::Met);
    CHECK(eval(Comparator::Lte, "0.51", "0") == GoalStatus::NotMet);
    CHECK(eval(Comparator::Approx, "0.5", "0.02") == GoalStatus::Met);
    CHECK(eval(Comparator::Approx, "0.5", "0.01") == GoalStatus::NotMet);
  }
}
