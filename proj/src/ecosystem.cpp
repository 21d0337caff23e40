#include "tantra/ecosystem.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace tantra {

namespace {

using cjson = nlohmann::basic_json<std::map>;

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

std::string string_attr(const AttrMap& attrs, const std::string& name) {
  auto it = attrs.find(name);
  if (it == attrs.end()) return "";
  if (const auto* s = std::get_if<std::string>(&it->second)) return *s;
  return "";
}

}  // namespace

const char* eco_property_name(EcoProperty p) {
  switch (p) {
    case EcoProperty::CoevolutionCompetitive: return "Coevolution-Competitive";
    case EcoProperty::CoevolutionMutualistic: return "Coevolution-Mutualistic";
    case EcoProperty::CoevolutionExploitative: return "Coevolution-Exploitative";
    case EcoProperty::SelfOrganization: return "SelfOrganization";
    case EcoProperty::Emergence: return "Emergence";
    case EcoProperty::Adaptation: return "Adaptation";
  }
  return "";
}

std::optional<EcoProperty> parse_eco_property(std::string_view name) {
  for (EcoProperty p : kEcoProperties) {
    if (name == eco_property_name(p)) return p;
  }
  return std::nullopt;
}

EcoProperty require_eco_property(std::string_view name) {
  if (auto p = parse_eco_property(name)) return *p;
  std::string valid;
  for (EcoProperty p : kEcoProperties) {
    if (!valid.empty()) valid += ", ";
    valid += eco_property_name(p);
  }
  fail(Err::InvalidArgument,
       "unknown ecosystem property '" + std::string(name) + "' (valid: " + valid + ")");
}

EcosystemAnnotation EcosystemModel::annotate(const std::string& subject, EcoProperty property,
                                             const std::string& note) {
  if (!store_.has_node(subject)) fail(Err::UnknownSubject, "no node '" + subject + "'");
  AttrMap attrs;
  attrs["property"] = std::string(eco_property_name(property));
  attrs["note"] = note;
  std::string id = store_.add_node({"EcosystemAnnotation"}, std::move(attrs));
  store_.add_edge(id, subject, kAnnotatesEdge);
  return {id, subject, property, note};
}

std::vector<EcosystemAnnotation> EcosystemModel::annotations(
    std::optional<EcoProperty> property) const {
  std::vector<EcosystemAnnotation> out;
  std::vector<AttrPredicate> filters;
  if (property) {
    filters.push_back(AttrPredicate::eq("property", std::string(eco_property_name(*property))));
  }
  for (const auto& n : store_.query(std::string("EcosystemAnnotation"), filters)) {
    EcosystemAnnotation a;
    a.id = n.id;
    a.property = require_eco_property(string_attr(n.attrs, "property"));
    a.note = string_attr(n.attrs, "note");
    for (const auto& e : store_.edges_from(n.id)) {
      if (e.kind == kAnnotatesEdge) {
        a.subject = e.dst;
        break;
      }
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

double unit_draw(std::uint64_t seed, std::uint64_t step, std::uint64_t idx) {
  std::uint64_t h = mix64(mix64(seed + kGamma * (step + 1)) + kGamma * (idx + 1));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

DiffusionScenario parse_scenario(const std::string& json_text) {
  cjson j = cjson::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    fail(Err::ParseError, "scenario must be a JSON object");
  }
  DiffusionScenario s;
  if (!j.contains("actors") || !j.at("actors").is_array()) {
    fail(Err::ParseError, "scenario needs an 'actors' array");
  }
  for (const auto& a : j.at("actors")) {
    if (!a.is_string()) fail(Err::ParseError, "actor ids must be strings");
    s.actors.push_back(a.get<std::string>());
  }
  if (j.contains("edges")) {
    if (!j.at("edges").is_array()) fail(Err::ParseError, "'edges' must be an array of pairs");
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
        fail(Err::ParseError, "each edge must be a pair of actor ids");
      }
      s.edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
  }
  if (j.contains("adjacency")) {
    const cjson& adj = j.at("adjacency");
    if (!adj.is_object()) fail(Err::ParseError, "'adjacency' must be an object of neighbour lists");
    std::set<std::pair<std::string, std::string>> listed;
    for (const auto& [actor, nbrs] : adj.items()) {
      if (!nbrs.is_array()) fail(Err::ParseError, "adjacency lists must be arrays");
      for (const auto& n : nbrs) {
        if (!n.is_string()) fail(Err::ParseError, "adjacency entries must be actor ids");
        listed.emplace(actor, n.get<std::string>());
      }
    }
    for (const auto& [a, b] : listed) {
      if (!listed.count({b, a})) {
        fail(Err::AsymmetricAdjacency,
             "adjacency lists " + a + " -> " + b + " but not " + b + " -> " + a);
      }
      if (a < b) s.edges.emplace_back(a, b);
      if (a == b) s.edges.emplace_back(a, b);  // surfaced as SelfEdge by validation
    }
  }
  if (j.contains("initial")) {
    if (!j.at("initial").is_array()) fail(Err::ParseError, "'initial' must be an array");
    for (const auto& a : j.at("initial")) {
      if (!a.is_string()) fail(Err::ParseError, "initial adopters must be actor ids");
      s.initial.insert(a.get<std::string>());
    }
  }
  if (!j.contains("p0") || !j.at("p0").is_number()) fail(Err::ParseError, "scenario needs 'p0'");
  if (!j.contains("beta") || !j.at("beta").is_number()) fail(Err::ParseError, "scenario needs 'beta'");
  if (!j.contains("steps") || !j.at("steps").is_number_integer()) {
    fail(Err::ParseError, "scenario needs integer 'steps'");
  }
  s.p0 = j.at("p0").get<double>();
  s.beta = j.at("beta").get<double>();
  s.steps = j.at("steps").get<int>();
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer()) fail(Err::ParseError, "'seed' must be an integer");
    s.seed = j.at("seed").get<std::uint64_t>();
  }
  return s;
}

void validate_scenario(const DiffusionScenario& scenario) {
  if (scenario.actors.empty()) fail(Err::InvalidArgument, "scenario needs at least one actor");
  std::set<std::string> actors;
  for (const auto& a : scenario.actors) {
    if (a.empty()) fail(Err::InvalidArgument, "actor ids must be non-empty");
    if (!actors.insert(a).second) fail(Err::InvalidArgument, "duplicate actor '" + a + "'");
  }
  if (!(scenario.p0 >= 0.0 && scenario.p0 <= 1.0)) {
    fail(Err::InvalidProbability, "p0 must lie in [0, 1]");
  }
  if (!(scenario.beta >= 0.0)) fail(Err::InvalidProbability, "beta must be >= 0");
  if (scenario.steps < 0) fail(Err::InvalidArgument, "steps must be >= 0");
  for (const auto& [a, b] : scenario.edges) {
    if (a == b) fail(Err::SelfEdge, "self-edge on actor '" + a + "'");
    if (!actors.count(a)) fail(Err::UnknownActor, "edge endpoint '" + a + "' is not an actor");
    if (!actors.count(b)) fail(Err::UnknownActor, "edge endpoint '" + b + "' is not an actor");
  }
  for (const auto& a : scenario.initial) {
    if (!actors.count(a)) fail(Err::UnknownActor, "initial adopter '" + a + "' is not an actor");
  }
}

DiffusionResult run_diffusion(const DiffusionScenario& scenario) {
  validate_scenario(scenario);

  std::vector<std::string> actors = scenario.actors;
  std::sort(actors.begin(), actors.end());
  const std::size_t n = actors.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[actors[i]] = i;

  std::vector<std::set<std::size_t>> nbrs(n);
  for (const auto& [a, b] : scenario.edges) {
    std::size_t ia = index[a], ib = index[b];
    nbrs[ia].insert(ib);
    nbrs[ib].insert(ia);
  }

  std::vector<bool> adopted(n, false);
  DiffusionResult result;
  for (const auto& a : scenario.initial) adopted[index[a]] = true;
  for (std::size_t i = 0; i < n; ++i) {
    result.adoption_step[actors[i]] = adopted[i] ? std::optional<int>(0) : std::nullopt;
  }

  auto fraction = [&]() {
    std::size_t count = 0;
    for (bool b : adopted) count += b ? 1 : 0;
    return static_cast<double>(count) / static_cast<double>(n);
  };
  result.adoption_series.push_back(fraction());

  for (int step = 1; step <= scenario.steps; ++step) {
    std::vector<std::size_t> newly;
    for (std::size_t i = 0; i < n; ++i) {
      if (adopted[i]) continue;
      double f = 0.0;
      if (!nbrs[i].empty()) {
        std::size_t hot = 0;
        for (std::size_t nb : nbrs[i]) hot += adopted[nb] ? 1 : 0;
        f = static_cast<double>(hot) / static_cast<double>(nbrs[i].size());
      }
      double p = std::min(1.0, scenario.p0 + scenario.beta * f);
      if (unit_draw(scenario.seed, static_cast<std::uint64_t>(step), i) < p) newly.push_back(i);
    }
    for (std::size_t i : newly) {
      adopted[i] = true;
      result.adoption_step[actors[i]] = step;
    }
    result.adoption_series.push_back(fraction());
  }

  result.final_fraction = result.adoption_series.back();
  return result;
}

MonteCarlo expected_adoption(const DiffusionScenario& scenario, int runs) {
  if (runs < 1) fail(Err::InvalidArgument, "runs must be >= 1");
  validate_scenario(scenario);

  // Shared setup hoisted out of the run loop; draws are addressed by
  // (seed, step, sorted index), so this replays run_diffusion exactly.
  std::vector<std::string> actors = scenario.actors;
  std::sort(actors.begin(), actors.end());
  const std::size_t n = actors.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[actors[i]] = i;
  std::vector<std::vector<std::size_t>> nbrs(n);
  {
    std::vector<std::set<std::size_t>> sets(n);
    for (const auto& [a, b] : scenario.edges) {
      std::size_t ia = index[a], ib = index[b];
      sets[ia].insert(ib);
      sets[ib].insert(ia);
    }
    for (std::size_t i = 0; i < n; ++i) nbrs[i].assign(sets[i].begin(), sets[i].end());
  }
  std::vector<bool> start(n, false);
  for (const auto& a : scenario.initial) start[index[a]] = true;

  std::vector<double> finals;
  finals.reserve(static_cast<std::size_t>(runs));
  std::vector<bool> adopted(n);
  std::vector<std::size_t> newly;
  for (int r = 0; r < runs; ++r) {
    std::uint64_t seed = scenario.seed + static_cast<std::uint64_t>(r);
    adopted = start;
    for (int step = 1; step <= scenario.steps; ++step) {
      newly.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (adopted[i]) continue;
        double f = 0.0;
        if (!nbrs[i].empty()) {
          std::size_t hot = 0;
          for (std::size_t nb : nbrs[i]) hot += adopted[nb] ? 1 : 0;
          f = static_cast<double>(hot) / static_cast<double>(nbrs[i].size());
        }
        double p = std::min(1.0, scenario.p0 + scenario.beta * f);
        if (unit_draw(seed, static_cast<std::uint64_t>(step), i) < p) newly.push_back(i);
      }
      for (std::size_t i : newly) adopted[i] = true;
    }
    std::size_t count = 0;
    for (bool b : adopted) count += b ? 1 : 0;
    finals.push_back(static_cast<double>(count) / static_cast<double>(n));
  }

  MonteCarlo mc;
  mc.runs = runs;
  double sum = 0.0;
  for (double v : finals) sum += v;
  mc.mean = sum / static_cast<double>(runs);
  if (runs > 1) {
    double ss = 0.0;
    for (double v : finals) ss += (v - mc.mean) * (v - mc.mean);
    double sd = std::sqrt(ss / static_cast<double>(runs - 1));
    mc.std_error = sd / std::sqrt(static_cast<double>(runs));
  }
  return mc;
}

EmergenceMarkers emergence_report(const DiffusionResult& result) {
  EmergenceMarkers m;
  for (std::size_t i = 0; i < result.adoption_series.size(); ++i) {
    if (result.adoption_series[i] >= 0.5) {
      m.takeoff_step = static_cast<int>(i);
      break;
    }
  }
  if (!result.adoption_series.empty()) m.saturation = result.adoption_series.back();
  for (std::size_t i = 1; i < result.adoption_series.size(); ++i) {
    m.wavefront.push_back(result.adoption_series[i] - result.adoption_series[i - 1]);
  }
  return m;
}

}  // namespace tantra
