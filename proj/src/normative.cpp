#include "tantra/normative.hpp"

#include <algorithm>

#include "json.hpp"

namespace tantra {

namespace {

using cjson = nlohmann::basic_json<std::map>;

std::string string_attr(const AttrMap& attrs, const std::string& name) {
  auto it = attrs.find(name);
  if (it == attrs.end()) return "";
  if (const auto* s = std::get_if<std::string>(&it->second)) return *s;
  return "";
}

Decimal decimal_attr(const AttrMap& attrs, const std::string& name) {
  auto it = attrs.find(name);
  if (it == attrs.end()) return Decimal();
  if (const auto* d = std::get_if<Decimal>(&it->second)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&it->second)) return Decimal(*i, 0);
  return Decimal();
}

std::int64_t int_attr(const AttrMap& attrs, const std::string& name) {
  auto it = attrs.find(name);
  if (it == attrs.end()) return 0;
  if (const auto* i = std::get_if<std::int64_t>(&it->second)) return *i;
  return 0;
}

// List fields are stored as compact JSON array strings so the node stays a
// flat attribute map.
std::string pack_list(const std::vector<std::string>& items) {
  cjson a = cjson::array();
  for (const auto& s : items) a.push_back(s);
  return a.dump();
}

std::vector<std::string> unpack_list(const std::string& text) {
  std::vector<std::string> out;
  if (text.empty()) return out;
  cjson a = cjson::parse(text, nullptr, false);
  if (!a.is_array()) return out;
  for (const auto& v : a) {
    if (v.is_string()) out.push_back(v.get<std::string>());
  }
  return out;
}

bool is_list_field(const std::string& name) {
  return name != "summary_statement" && name != "problem_statement" && name != "overall_goal" &&
         name != "change_process" && name != "meta_theory" && name != "change_markers";
}

const std::vector<std::string>& list_field(const InterventionFields& f, const std::string& name) {
  if (name == "inputs") return f.inputs;
  if (name == "actors") return f.actors;
  if (name == "domains_of_change") return f.domains_of_change;
  if (name == "internal_risks") return f.internal_risks;
  if (name == "assumptions") return f.assumptions;
  if (name == "external_risks") return f.external_risks;
  if (name == "obstacles") return f.obstacles;
  return f.knock_on_effects;
}

std::vector<std::string>& list_field(InterventionFields& f, const std::string& name) {
  return const_cast<std::vector<std::string>&>(
      list_field(static_cast<const InterventionFields&>(f), name));
}

const std::string& string_field(const InterventionFields& f, const std::string& name) {
  if (name == "summary_statement") return f.summary_statement;
  if (name == "problem_statement") return f.problem_statement;
  if (name == "overall_goal") return f.overall_goal;
  if (name == "change_process") return f.change_process;
  return f.meta_theory;
}

std::string& string_field(InterventionFields& f, const std::string& name) {
  return const_cast<std::string&>(string_field(static_cast<const InterventionFields&>(f), name));
}

}  // namespace

const char* goal_dimension_name(GoalDimension d) {
  switch (d) {
    case GoalDimension::Customer: return "Customer";
    case GoalDimension::Financial: return "Financial";
    case GoalDimension::Process: return "Process";
    case GoalDimension::Strategic: return "Strategic";
    case GoalDimension::Ethical: return "Ethical";
  }
  return "";
}

std::optional<GoalDimension> parse_goal_dimension(std::string_view name) {
  for (GoalDimension d : kGoalDimensions) {
    if (name == goal_dimension_name(d)) return d;
  }
  return std::nullopt;
}

GoalDimension require_goal_dimension(std::string_view name) {
  if (auto d = parse_goal_dimension(name)) return *d;
  std::string valid;
  for (GoalDimension d : kGoalDimensions) {
    if (!valid.empty()) valid += ", ";
    valid += goal_dimension_name(d);
  }
  fail(Err::InvalidDimension, "unknown dimension '" + std::string(name) + "' (valid: " + valid + ")");
}

const char* comparator_name(Comparator c) {
  switch (c) {
    case Comparator::Gte: return ">=";
    case Comparator::Lte: return "<=";
    case Comparator::Approx: return "~=";
  }
  return "";
}

std::optional<Comparator> parse_comparator(std::string_view name) {
  if (name == ">=") return Comparator::Gte;
  if (name == "<=") return Comparator::Lte;
  if (name == "~=") return Comparator::Approx;
  return std::nullopt;
}

Comparator require_comparator(std::string_view name) {
  if (auto c = parse_comparator(name)) return *c;
  fail(Err::InvalidComparator,
       "unknown comparator '" + std::string(name) + "' (valid: >=, <=, ~=)");
}

const char* goal_status_name(GoalStatus s) {
  switch (s) {
    case GoalStatus::Met: return "Met";
    case GoalStatus::NotMet: return "NotMet";
    case GoalStatus::NoData: return "NoData";
  }
  return "";
}

Goal NormativeModel::define_goal(GoalDimension dimension, const std::string& statement,
                                 const std::string& metric_element, const GoalTarget& target,
                                 std::int64_t review_period_days) {
  if (statement.empty()) fail(Err::InvalidArgument, "goal statement must be non-empty");
  auto el = model_.find_element(metric_element);
  if (!el) fail(Err::UnknownElement, "metric element '" + metric_element + "' not found");
  if (el->aspect != Aspect::Why) {
    fail(Err::NotWhyAspect, "metric element '" + metric_element + "' has aspect " +
                                aspect_name(el->aspect) + ", goals bind Why elements");
  }
  if (review_period_days <= 0) fail(Err::InvalidArgument, "review_period_days must be positive");
  if (target.epsilon < Decimal()) fail(Err::InvalidArgument, "epsilon must be non-negative");

  AttrMap attrs;
  attrs["dimension"] = std::string(goal_dimension_name(dimension));
  attrs["statement"] = statement;
  attrs["comparator"] = std::string(comparator_name(target.cmp));
  attrs["target_value"] = target.value;
  attrs["epsilon"] = target.epsilon;
  attrs["unit"] = target.unit;
  attrs["review_period_days"] = review_period_days;
  std::string id = store_.add_node({"Goal"}, std::move(attrs));
  store_.add_edge(id, metric_element, kBindsMetricEdge);

  Goal g;
  g.id = id;
  g.dimension = dimension;
  g.statement = statement;
  g.metric = metric_element;
  g.target = target;
  g.review_period_days = review_period_days;
  return g;
}

Goal NormativeModel::goal(const std::string& id) const {
  const NodeRecord* n = store_.find_node(id);
  if (!n || !n->labels.count("Goal")) fail(Err::UnknownGoal, "no goal with id '" + id + "'");
  Goal g;
  g.id = n->id;
  g.dimension = require_goal_dimension(string_attr(n->attrs, "dimension"));
  g.statement = string_attr(n->attrs, "statement");
  g.target.cmp = require_comparator(string_attr(n->attrs, "comparator"));
  g.target.value = decimal_attr(n->attrs, "target_value");
  g.target.epsilon = decimal_attr(n->attrs, "epsilon");
  g.target.unit = string_attr(n->attrs, "unit");
  g.review_period_days = int_attr(n->attrs, "review_period_days");
  for (const auto& e : store_.edges_from(n->id)) {
    if (e.kind == kBindsMetricEdge) {
      g.metric = e.dst;
      break;
    }
  }
  return g;
}

std::vector<Goal> NormativeModel::goals() const {
  std::vector<Goal> out;
  for (const auto& n : store_.query(std::string("Goal"))) out.push_back(goal(n.id));
  return out;
}

std::string NormativeModel::register_intervention(const InterventionFields& fields,
                                                  const std::string& intervention_id) {
  // Marker metrics must resolve before anything is written.
  std::vector<std::string> marker_metrics;
  for (const auto& m : fields.change_markers) {
    if (m.name.empty()) fail(Err::InvalidArgument, "change marker name must be non-empty");
    if (m.direction != "increase" && m.direction != "decrease") {
      fail(Err::InvalidArgument,
           "marker '" + m.name + "' direction must be 'increase' or 'decrease'");
    }
    marker_metrics.push_back(resolve_metric(m.metric));
  }

  AttrMap attrs;
  for (const char* name : kInterventionFieldNames) {
    std::string key(name);
    if (key == "change_markers") continue;
    if (is_list_field(key)) {
      attrs[key] = pack_list(list_field(fields, key));
    } else {
      attrs[key] = string_field(fields, key);
    }
  }
  attrs["linked_goals"] = pack_list(fields.linked_goals);
  if (!intervention_id.empty()) attrs["intervention_id"] = intervention_id;

  int filled = 0;
  for (const char* name : kInterventionFieldNames) {
    std::string key(name);
    bool present;
    if (key == "change_markers") {
      present = !fields.change_markers.empty();
    } else if (is_list_field(key)) {
      present = !list_field(fields, key).empty();
    } else {
      present = !string_field(fields, key).empty();
    }
    if (present) ++filled;
  }
  attrs["completeness"] = ratio_to_decimal(filled, 14, 4);

  std::string id = store_.add_node({"Intervention"}, std::move(attrs));
  for (std::size_t i = 0; i < fields.change_markers.size(); ++i) {
    const MarkerDef& m = fields.change_markers[i];
    AttrMap mattrs;
    mattrs["name"] = m.name;
    mattrs["direction"] = m.direction;
    std::string mid = store_.add_node({"ChangeMarker"}, std::move(mattrs));
    store_.add_edge(id, mid, kHasMarkerEdge);
    store_.add_edge(mid, marker_metrics[i], kBindsMetricEdge);
  }
  return id;
}

ChangeMarker NormativeModel::marker_record(const std::string& id) const {
  const NodeRecord& n = store_.node(id);
  ChangeMarker m;
  m.id = n.id;
  m.name = string_attr(n.attrs, "name");
  m.direction = string_attr(n.attrs, "direction");
  for (const auto& e : store_.edges_from(n.id)) {
    if (e.kind == kBindsMetricEdge) {
      m.metric = e.dst;
      break;
    }
  }
  return m;
}

Intervention NormativeModel::intervention(const std::string& id) const {
  const NodeRecord* n = store_.find_node(id);
  if (n && !n->labels.count("Intervention")) n = nullptr;
  if (!n) {
    auto hits = store_.query(std::string("Intervention"),
                             {AttrPredicate::eq("intervention_id", id)});
    if (hits.size() > 1) fail(Err::AmbiguousName, "intervention_id '" + id + "' is not unique");
    if (hits.size() == 1) n = store_.find_node(hits[0].id);
  }
  if (!n) fail(Err::UnknownIntervention, "no intervention '" + id + "'");

  Intervention iv;
  iv.id = n->id;
  iv.intervention_id = string_attr(n->attrs, "intervention_id");
  for (const char* name : kInterventionFieldNames) {
    std::string key(name);
    if (key == "change_markers") continue;
    if (is_list_field(key)) {
      list_field(iv.fields, key) = unpack_list(string_attr(n->attrs, key));
    } else {
      string_field(iv.fields, key) = string_attr(n->attrs, key);
    }
  }
  iv.fields.linked_goals = unpack_list(string_attr(n->attrs, "linked_goals"));
  for (const auto& e : store_.edges_from(n->id)) {
    if (e.kind != kHasMarkerEdge) continue;
    ChangeMarker m = marker_record(e.dst);
    iv.markers.push_back(m);
    iv.fields.change_markers.push_back({m.name, m.metric, m.direction});
  }
  return iv;
}

std::vector<Intervention> NormativeModel::interventions() const {
  std::vector<Intervention> out;
  for (const auto& n : store_.query(std::string("Intervention"))) out.push_back(intervention(n.id));
  return out;
}

std::vector<Violation> NormativeModel::validate_intervention(const std::string& id) const {
  Intervention iv = intervention(id);
  std::vector<Violation> out;
  for (const char* name : kInterventionFieldNames) {
    std::string key(name);
    bool missing;
    if (key == "change_markers") {
      missing = iv.markers.empty();
    } else if (is_list_field(key)) {
      missing = list_field(iv.fields, key).empty();
    } else {
      missing = string_field(iv.fields, key).empty();
    }
    if (missing) out.push_back({"MissingField", iv.id, key});
  }
  for (const auto& m : iv.markers) {
    auto el = m.metric.empty() ? std::nullopt : model_.find_element(m.metric);
    if (!el) {
      out.push_back({"MarkerNotMetric", m.id, "marker '" + m.name + "' binds no metric element"});
    } else if (el->aspect != Aspect::Why) {
      out.push_back({"MarkerNotMetric", m.id, "marker '" + m.name + "' binds a " +
                                                  std::string(aspect_name(el->aspect)) +
                                                  " element, expected Why"});
    }
  }
  for (const auto& gid : iv.fields.linked_goals) {
    const NodeRecord* g = store_.find_node(gid);
    if (!g || !g->labels.count("Goal")) {
      out.push_back({"DanglingGoal", iv.id, "linked goal '" + gid + "' does not exist"});
    }
  }
  return out;
}

std::string NormativeModel::import_intervention_json(const std::string& json_text) {
  cjson j = cjson::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    fail(Err::ParseError, "intervention JSON must be an object");
  }
  InterventionFields f;
  for (const char* name : kInterventionFieldNames) {
    std::string key(name);
    if (!j.contains(key)) continue;
    const cjson& v = j.at(key);
    if (key == "change_markers") {
      if (!v.is_array()) fail(Err::ParseError, "change_markers must be an array");
      for (const auto& mj : v) {
        if (!mj.is_object()) fail(Err::ParseError, "change_markers entries must be objects");
        MarkerDef m;
        for (const char* req : {"name", "metric", "direction"}) {
          if (!mj.contains(req) || !mj.at(req).is_string()) {
            fail(Err::ParseError, std::string("change_markers entries need a string '") + req + "'");
          }
        }
        m.name = mj.at("name").get<std::string>();
        m.metric = mj.at("metric").get<std::string>();
        m.direction = mj.at("direction").get<std::string>();
        f.change_markers.push_back(std::move(m));
      }
    } else if (is_list_field(key)) {
      if (!v.is_array()) fail(Err::ParseError, key + " must be an array of strings");
      for (const auto& s : v) {
        if (!s.is_string()) fail(Err::ParseError, key + " must be an array of strings");
        list_field(f, key).push_back(s.get<std::string>());
      }
    } else {
      if (!v.is_string()) fail(Err::ParseError, key + " must be a string");
      string_field(f, key) = v.get<std::string>();
    }
  }
  if (j.contains("linked_goals")) {
    const cjson& v = j.at("linked_goals");
    if (!v.is_array()) fail(Err::ParseError, "linked_goals must be an array of strings");
    for (const auto& s : v) {
      if (!s.is_string()) fail(Err::ParseError, "linked_goals must be an array of strings");
      f.linked_goals.push_back(s.get<std::string>());
    }
  }
  std::string intervention_id;
  if (j.contains("intervention_id")) {
    if (!j.at("intervention_id").is_string()) {
      fail(Err::ParseError, "intervention_id must be a string");
    }
    intervention_id = j.at("intervention_id").get<std::string>();
  }
  return register_intervention(f, intervention_id);
}

std::string NormativeModel::export_intervention_json(const std::string& id) const {
  Intervention iv = intervention(id);
  cjson j = cjson::object();
  for (const char* name : kInterventionFieldNames) {
    std::string key(name);
    if (key == "change_markers") {
      cjson a = cjson::array();
      for (const auto& m : iv.fields.change_markers) {
        a.push_back(cjson{{"direction", m.direction}, {"metric", m.metric}, {"name", m.name}});
      }
      j[key] = std::move(a);
    } else if (is_list_field(key)) {
      j[key] = list_field(iv.fields, key);
    } else {
      j[key] = string_field(iv.fields, key);
    }
  }
  j["intervention_id"] = iv.intervention_id;
  j["linked_goals"] = iv.fields.linked_goals;
  return j.dump(2) + "\n";
}

std::string NormativeModel::resolve_marker(const std::string& text) const {
  const NodeRecord* n = store_.find_node(text);
  if (n && n->labels.count("ChangeMarker")) return n->id;
  auto hits = store_.query(std::string("ChangeMarker"), {AttrPredicate::eq("name", text)});
  if (hits.size() > 1) {
    fail(Err::AmbiguousName, "marker name '" + text + "' matches " +
                                 std::to_string(hits.size()) + " markers");
  }
  if (hits.size() == 1) return hits[0].id;
  fail(Err::UnknownMarker, "no change marker '" + text + "'");
}

std::vector<ChangeMarker> NormativeModel::markers() const {
  std::vector<ChangeMarker> out;
  for (const auto& n : store_.query(std::string("ChangeMarker"))) out.push_back(marker_record(n.id));
  return out;
}

std::string NormativeModel::record_marker(const std::string& marker, const Date& date,
                                          const Decimal& value) {
  std::string mid = resolve_marker(marker);
  Date last{};
  bool have_last = false;
  for (const auto& e : store_.edges_from(mid)) {
    if (e.kind != kObservationEdge) continue;
    const NodeRecord& obs = store_.node(e.dst);
    auto it = obs.attrs.find("date");
    if (it == obs.attrs.end()) continue;
    if (const auto* d = std::get_if<Date>(&it->second)) {
      if (!have_last || last < *d) last = *d;
      have_last = true;
    }
  }
  if (have_last && !(last < date)) {
    fail(Err::NonMonotonicDate, "observation date " + date.to_string() +
                                    " does not follow last recorded date " + last.to_string());
  }
  AttrMap attrs;
  attrs["date"] = date;
  attrs["value"] = value;
  std::string oid = store_.add_node({"MarkerObservation"}, std::move(attrs));
  store_.add_edge(mid, oid, kObservationEdge);
  return oid;
}

std::vector<std::pair<Date, Decimal>> NormativeModel::marker_series(
    const std::string& marker) const {
  std::string mid = resolve_marker(marker);
  std::vector<std::pair<Date, Decimal>> out;
  for (const auto& e : store_.edges_from(mid)) {
    if (e.kind != kObservationEdge) continue;
    const NodeRecord& obs = store_.node(e.dst);
    auto dit = obs.attrs.find("date");
    if (dit == obs.attrs.end()) continue;
    const auto* d = std::get_if<Date>(&dit->second);
    if (!d) continue;
    out.emplace_back(*d, decimal_attr(obs.attrs, "value"));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::string NormativeModel::marker_trend(const std::string& marker) const {
  auto series = marker_series(marker);
  if (series.size() < 2) return "insufficient-data";
  bool any_up = false, any_down = false;
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (series[i - 1].second < series[i].second) any_up = true;
    if (series[i].second < series[i - 1].second) any_down = true;
  }
  if (any_up && any_down) return "mixed";
  if (any_up) return "increasing";
  if (any_down) return "decreasing";
  return "flat";
}

GoalEvaluation NormativeModel::evaluate_goal(const std::string& goal_id, const Date& as_of) const {
  Goal g = goal(goal_id);
  GoalEvaluation ev;
  // Latest observation by (date, observation node id) across every marker
  // bound to the goal's metric element.
  std::string best_obs;
  for (const auto& m : markers()) {
    if (m.metric != g.metric) continue;
    for (const auto& e : store_.edges_from(m.id)) {
      if (e.kind != kObservationEdge) continue;
      const NodeRecord& obs = store_.node(e.dst);
      auto dit = obs.attrs.find("date");
      if (dit == obs.attrs.end()) continue;
      const auto* d = std::get_if<Date>(&dit->second);
      if (!d || as_of < *d) continue;
      if (!ev.observed_on || *ev.observed_on < *d ||
          (!(*d < *ev.observed_on) && best_obs < obs.id)) {
        ev.observed_on = *d;
        ev.latest = decimal_attr(obs.attrs, "value");
        best_obs = obs.id;
      }
    }
  }
  if (!ev.latest) {
    ev.status = GoalStatus::NoData;
    return ev;
  }
  const Decimal& v = *ev.latest;
  bool met = false;
  switch (g.target.cmp) {
    case Comparator::Gte: met = !(v < g.target.value); break;
    case Comparator::Lte: met = !(g.target.value < v); break;
    case Comparator::Approx: {
      Decimal diff = v - g.target.value;
      met = !(g.target.epsilon < diff.abs());
      break;
    }
  }
  ev.status = met ? GoalStatus::Met : GoalStatus::NotMet;
  return ev;
}

std::string NormativeModel::resolve_metric(const std::string& text) const {
  if (text.empty()) fail(Err::UnknownElement, "empty metric reference");
  if (model_.is_element(text)) return text;
  auto by_uid = store_.query(std::nullopt, {AttrPredicate::eq("unique_id", text)});
  std::vector<std::string> hits;
  for (const auto& n : by_uid) {
    if (model_.is_element(n.id)) hits.push_back(n.id);
  }
  if (hits.empty()) {
    auto by_name = store_.query(std::nullopt, {AttrPredicate::eq("display_name", text)});
    for (const auto& n : by_name) {
      if (model_.is_element(n.id)) hits.push_back(n.id);
    }
  }
  if (hits.size() > 1) {
    fail(Err::AmbiguousName,
         "metric '" + text + "' matches " + std::to_string(hits.size()) + " elements");
  }
  if (hits.size() == 1) return hits[0];
  fail(Err::UnknownElement, "no element matches metric '" + text + "'");
}

}  // namespace tantra
