#pragma once

#include <cstdint>

#include "tantra/graph_store.hpp"

namespace tantra {

enum class EcoProperty {
  CoevolutionCompetitive,
  CoevolutionMutualistic,
  CoevolutionExploitative,
  SelfOrganization,
  Emergence,
  Adaptation,
};

inline constexpr std::array<EcoProperty, 6> kEcoProperties = {
    EcoProperty::CoevolutionCompetitive, EcoProperty::CoevolutionMutualistic,
    EcoProperty::CoevolutionExploitative, EcoProperty::SelfOrganization,
    EcoProperty::Emergence, EcoProperty::Adaptation};

const char* eco_property_name(EcoProperty p);
std::optional<EcoProperty> parse_eco_property(std::string_view name);
EcoProperty require_eco_property(std::string_view name);  // InvalidArgument, lists all

struct EcosystemAnnotation {
  std::string id;  // annotation node id
  std::string subject;
  EcoProperty property = EcoProperty::Emergence;
  std::string note;
};

inline constexpr char kAnnotatesEdge[] = "annotates";

class EcosystemModel {
 public:
  explicit EcosystemModel(GraphStore& store) : store_(store) {}

  // subject must be an existing node (UnknownSubject).
  EcosystemAnnotation annotate(const std::string& subject, EcoProperty property,
                               const std::string& note);
  std::vector<EcosystemAnnotation> annotations(
      std::optional<EcoProperty> property = std::nullopt) const;  // id order

 private:
  GraphStore& store_;
};

// Absorbing practice-adoption contagion on an undirected actor network.
// Per step, each susceptible actor adopts with p = min(1, p0 + beta * f)
// where f is its adopted-neighbor fraction (0 when isolated); updates are
// synchronous.
struct DiffusionScenario {
  std::vector<std::string> actors;
  std::vector<std::pair<std::string, std::string>> edges;  // undirected
  std::set<std::string> initial;
  double p0 = 0.0;
  double beta = 0.0;
  int steps = 0;
  std::uint64_t seed = 0;
};

struct DiffusionResult {
  std::vector<double> adoption_series;  // length steps + 1, non-decreasing
  std::map<std::string, std::optional<int>> adoption_step;  // nullopt = never
  double final_fraction = 0.0;
};

struct MonteCarlo {
  double mean = 0.0;
  double std_error = 0.0;
  int runs = 0;
};

struct EmergenceMarkers {
  std::optional<int> takeoff_step;  // first index with fraction >= 0.5
  double saturation = 0.0;          // final fraction
  std::vector<double> wavefront;    // per-step fraction deltas
};

// Counter-based generator: one unit draw per (seed, step, actor index),
// actor index taken in the ascending-sorted full actor list. splitmix64
// finalizer; 53-bit mantissa draws in [0, 1).
std::uint64_t mix64(std::uint64_t z);
double unit_draw(std::uint64_t seed, std::uint64_t step, std::uint64_t idx);

// {actors, edges?, adjacency?, initial?, p0, beta, steps, seed?}; adjacency
// is an object of neighbour lists and must be symmetric.
DiffusionScenario parse_scenario(const std::string& json_text);

// InvalidProbability, SelfEdge, UnknownActor, AsymmetricAdjacency (from
// parse), InvalidArgument.
void validate_scenario(const DiffusionScenario& scenario);

DiffusionResult run_diffusion(const DiffusionScenario& scenario);

// Averages run_diffusion over seeds seed .. seed + runs - 1.
MonteCarlo expected_adoption(const DiffusionScenario& scenario, int runs);

EmergenceMarkers emergence_report(const DiffusionResult& result);

}  // namespace tantra
