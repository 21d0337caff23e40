#pragma once

#include "tantra/csv.hpp"
#include "tantra/metamodel.hpp"

namespace tantra {

enum class SeparationKind { Informational, Spatial, Temporal, Financial, Capability };

inline constexpr std::array<SeparationKind, 5> kSeparationKinds = {
    SeparationKind::Informational, SeparationKind::Spatial, SeparationKind::Temporal,
    SeparationKind::Financial, SeparationKind::Capability};

const char* separation_kind_name(SeparationKind k);
std::optional<SeparationKind> parse_separation_kind(std::string_view name);
SeparationKind require_separation_kind(std::string_view name);  // UnknownSeparationKind

struct Relator {
  std::string id;  // element node id, aspect Relators, perspective Instantiated
  std::string kind;
  std::set<std::string> mediated;
};

struct MaterialRelationship {
  std::string id;  // element node id, aspect Relationships, perspective Instantiated
  std::string kind;
  std::string relator;
  std::string a;
  std::string b;
};

inline constexpr char kMediatesEdge[] = "mediates";
inline constexpr char kEndpointEdge[] = "endpoint";
inline constexpr char kFoundedByEdge[] = "founded_by";

// Relators mediate two or more elements; a material relationship exists
// only through exactly one founding relator whose mediated set contains
// both endpoints.
class RelatorModel {
 public:
  RelatorModel(GraphStore& store, TantraModel& model) : store_(store), model_(model) {}

  // Creates an Instantiated Relators element (unique_id derived from the
  // node id) with a "mediates" edge per mediated element.
  // Throws TooFewMediated (< 2 distinct), UnknownElement.
  Relator create_relator(const std::string& kind, const std::set<std::string>& mediated);

  // Creates an Instantiated Relationships element with two role-tagged
  // "endpoint" edges and one "founded_by" edge.
  // Throws SelfRelationship, EndpointNotMediated, UnknownElement.
  MaterialRelationship found_relationship(const std::string& relator_id, const std::string& a,
                                          const std::string& b, const std::string& kind);

  Relator relator(const std::string& id) const;
  MaterialRelationship relationship(const std::string& id) const;
  std::vector<Relator> relators() const;                      // id order
  std::vector<MaterialRelationship> relationships() const;    // id order

  // Graph-wide cardinality check over every (Relationships, Instantiated)
  // element: exactly one founding relator, exactly two role-tagged
  // endpoints, endpoints distinct and inside the relator's mediated set.
  std::vector<Violation> scan() const;

 private:
  GraphStore& store_;
  TantraModel& model_;
};

// Separation scoring -------------------------------------------------------

// Scores and weights of a subject node. A kind absent from scores counts
// as 0; a kind absent from weights counts as 1 (equal weighting).
struct SeparationProfile {
  std::string subject;
  std::map<SeparationKind, Decimal> scores;
  std::map<SeparationKind, Decimal> weights;
};

// Exact value of the normalized weighted mean as num/den.
struct SepIndex {
  __int128 num = 0;
  __int128 den = 1;
};

// Compares a/b with c/d (all non-negative, b and d positive) by continued
// fractions; never overflows. Returns -1, 0, or 1.
int cmp_frac(__int128 a, __int128 b, __int128 c, __int128 d);

SepIndex separation_index_exact(const SeparationProfile& profile);  // AllWeightsZero
Decimal separation_index(const SeparationProfile& profile);  // half-even at scale 12

struct RankedSubject {
  std::string subject;
  Decimal value;
};

class SeparationModel {
 public:
  explicit SeparationModel(GraphStore& store) : store_(store) {}

  // Accepts a node id, a unique_id, or an "a|b" pair whose sides resolve
  // the same way; pair subjects get a backing node on first use.
  // Throws UnknownSubject, AmbiguousName.
  std::string resolve_subject(const std::string& text);

  // score in [0,1] with at most 9 fractional digits. Re-setting overwrites.
  void set_separation(const std::string& subject_id, SeparationKind kind, const Decimal& score);
  // weight in [0, 1e6] with at most 6 fractional digits.
  void set_weight(const std::string& subject_id, SeparationKind kind, const Decimal& weight);

  SeparationProfile profile(const std::string& subject_id) const;
  std::vector<std::string> scored_subjects() const;  // nodes with any score set, id order

  // Descending by index (or by the single kind's score), ties by subject
  // id ascending. Ordering uses the exact fractions, not rounded values.
  std::vector<RankedSubject> rank(const std::vector<std::string>& subjects,
                                  std::optional<SeparationKind> kind = std::nullopt) const;

  // Columns: subject_id, kind, score, weight (weight optional/blank).
  int ingest_csv(const csv::Table& table);

 private:
  GraphStore& store_;
};

}  // namespace tantra
