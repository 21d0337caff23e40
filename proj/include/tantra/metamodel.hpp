#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "tantra/graph_store.hpp"

namespace tantra {

enum class Aspect { Who, Where, What, When, How, Why, Relationships, Relators, Separations };

// Reification levels, totally ordered from Contextual (0) to Instantiated (4).
enum class Perspective { Contextual, Conceptual, Logical, Physical, Instantiated };

inline constexpr std::array<Aspect, 9> kAspects = {
    Aspect::Who,  Aspect::Where,         Aspect::What,     Aspect::When,       Aspect::How,
    Aspect::Why,  Aspect::Relationships, Aspect::Relators, Aspect::Separations};

inline constexpr std::array<Perspective, 5> kPerspectives = {
    Perspective::Contextual, Perspective::Conceptual, Perspective::Logical, Perspective::Physical,
    Perspective::Instantiated};

const char* aspect_name(Aspect a);
const char* perspective_name(Perspective p);
std::optional<Aspect> parse_aspect(std::string_view name);
std::optional<Perspective> parse_perspective(std::string_view name);

// Interface-boundary parsers: throw InvalidAspect / InvalidPerspective with
// a message listing every valid value.
Aspect require_aspect(std::string_view name);
Perspective require_perspective(std::string_view name);

inline int level(Perspective p) { return static_cast<int>(p); }

struct TantraElement {
  std::string id;  // backing node id
  Aspect aspect;
  Perspective perspective;
  std::string display_name;
};

// A structural finding from validate(). Violations are data, not errors.
// kind is one of: CellAmbiguity, MissingDisplayName, MissingUniqueId,
// DuplicateUniqueId, BadReifyEndpoint, AspectMismatch, LevelSkip,
// LevelReversal, OrphanInstance.
struct Violation {
  std::string kind;
  std::string subject;  // node or edge id
  std::string detail;
};

inline constexpr char kReifiesEdge[] = "reifies";

// The 9x5 matrix over a GraphStore. An element is a node carrying exactly
// one aspect label and one perspective label; reification links are
// "reifies" edges from parent (level k) to child (level k+1).
class TantraModel {
 public:
  explicit TantraModel(GraphStore& store) : store_(store) {}

  // Throws MissingUniqueId when perspective is Instantiated and attrs lacks
  // a non-empty unique_id string; InvalidArgument on empty display_name.
  TantraElement declare_element(Aspect aspect, Perspective perspective,
                                const std::string& display_name, AttrMap attrs = {});

  // parent -> child, same aspect, child exactly one level deeper.
  // Returns the edge id; an existing identical link is returned as-is.
  // Throws UnknownElement, AspectMismatch, LevelSkip, LevelReversal.
  std::string reify(const std::string& parent_id, const std::string& child_id);

  std::vector<TantraElement> cell(Aspect aspect, Perspective perspective) const;
  std::vector<TantraElement> all_elements() const;

  TantraElement element(const std::string& id) const;  // throws UnknownElement
  std::optional<TantraElement> find_element(const std::string& id) const;
  bool is_element(const std::string& id) const { return find_element(id).has_value(); }

  std::vector<std::string> parents(const std::string& id) const;   // reifies sources
  std::vector<std::string> children(const std::string& id) const;  // reifies targets

  // Every structural violation in deterministic order: per-node findings
  // (id order), then per-edge findings (id order), then orphan-instance
  // findings (id order). Empty result iff the model is well-formed.
  std::vector<Violation> validate() const;

  // (aspect, perspective) when the label set holds exactly one of each;
  // nullopt for non-element nodes.
  static std::optional<std::pair<Aspect, Perspective>> classify_labels(
      const std::set<std::string>& labels);

  GraphStore& store() { return store_; }
  const GraphStore& store() const { return store_; }

 private:
  std::optional<TantraElement> to_element(const NodeRecord& node) const;

  GraphStore& store_;
};

}  // namespace tantra
