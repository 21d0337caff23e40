#pragma once

#include "tantra/metamodel.hpp"

namespace tantra {

// Decile histogram of per-element attribute completeness plus its Shannon
// entropy in bits. 0 <= entropy <= log2(11); empty scope reports 0.
struct CompletenessDistribution {
  std::array<std::uint64_t, 11> counts{};  // bins 0%, 1-10%, ..., 91-100%
  std::uint64_t total = 0;
  double entropy = 0.0;
};

inline constexpr std::array<const char*, 11> kBinLabels = {
    "0%",     "1-10%",  "11-20%", "21-30%", "31-40%",  "41-50%",
    "51-60%", "61-70%", "71-80%", "81-90%", "91-100%"};

// Bin index for filled-of-required: 0 only for zero filled, 10 for full
// (and for an empty requirement list), else ceil(10 * filled / required).
int completeness_bin(std::size_t filled, std::size_t required);

// An attribute is filled when present and not an empty string.
bool attr_filled(const AttrMap& attrs, const std::string& name);

// Filled fraction of required_attrs; 1.0 when the list is empty.
// Throws UnknownElement when element_id is not an element node.
double completeness(const GraphStore& store, const std::string& element_id,
                    const std::vector<std::string>& required_attrs);

// Per-cell required-attribute policy, stored as "EntropyPolicy" nodes.
// Without a policy a cell requires every attribute name seen on any of
// its elements.
void set_entropy_policy(GraphStore& store, Aspect aspect, Perspective perspective,
                        const std::vector<std::string>& required);
std::optional<std::vector<std::string>> entropy_policy(const GraphStore& store, Aspect aspect,
                                                       Perspective perspective);

// Distribution over every element in scope (one aspect, or the whole
// model), binned by completeness against the cell's required attributes.
CompletenessDistribution entropy_report(const GraphStore& store,
                                        std::optional<Aspect> scope = std::nullopt);

// Entropy of an arbitrary bin-count vector; the report's own formula.
double bin_entropy(const std::array<std::uint64_t, 11>& counts);

}  // namespace tantra
