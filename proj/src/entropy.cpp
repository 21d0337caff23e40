#include "tantra/entropy.hpp"

#include <cmath>

#include "json.hpp"

namespace tantra {

namespace {

using cjson = nlohmann::basic_json<std::map>;

std::vector<std::string> unpack_strings(const std::string& text) {
  std::vector<std::string> out;
  cjson a = cjson::parse(text, nullptr, false);
  if (!a.is_array()) return out;
  for (const auto& v : a) {
    if (v.is_string()) out.push_back(v.get<std::string>());
  }
  return out;
}

const NodeRecord* policy_node(const GraphStore& store, Aspect aspect, Perspective perspective) {
  auto hits = store.query(std::string("EntropyPolicy"),
                          {AttrPredicate::eq("aspect", std::string(aspect_name(aspect))),
                           AttrPredicate::eq("perspective", std::string(perspective_name(perspective)))});
  if (hits.empty()) return nullptr;
  return store.find_node(hits.front().id);
}

}  // namespace

int completeness_bin(std::size_t filled, std::size_t required) {
  if (required == 0) return 10;
  if (filled == 0) return 0;
  if (filled >= required) return 10;
  return static_cast<int>((10 * filled + required - 1) / required);
}

bool attr_filled(const AttrMap& attrs, const std::string& name) {
  auto it = attrs.find(name);
  if (it == attrs.end()) return false;
  if (const auto* s = std::get_if<std::string>(&it->second)) return !s->empty();
  return true;
}

double completeness(const GraphStore& store, const std::string& element_id,
                    const std::vector<std::string>& required_attrs) {
  const NodeRecord* n = store.find_node(element_id);
  if (!n || !TantraModel::classify_labels(n->labels)) {
    fail(Err::UnknownElement, "'" + element_id + "' is not an element");
  }
  if (required_attrs.empty()) return 1.0;
  std::size_t filled = 0;
  for (const auto& a : required_attrs) filled += attr_filled(n->attrs, a) ? 1 : 0;
  return static_cast<double>(filled) / static_cast<double>(required_attrs.size());
}

void set_entropy_policy(GraphStore& store, Aspect aspect, Perspective perspective,
                        const std::vector<std::string>& required) {
  cjson a = cjson::array();
  for (const auto& s : required) a.push_back(s);
  if (const NodeRecord* n = policy_node(store, aspect, perspective)) {
    store.set_attr(n->id, "required", a.dump());
    return;
  }
  AttrMap attrs;
  attrs["aspect"] = std::string(aspect_name(aspect));
  attrs["perspective"] = std::string(perspective_name(perspective));
  attrs["required"] = a.dump();
  store.add_node({"EntropyPolicy"}, std::move(attrs));
}

std::optional<std::vector<std::string>> entropy_policy(const GraphStore& store, Aspect aspect,
                                                       Perspective perspective) {
  const NodeRecord* n = policy_node(store, aspect, perspective);
  if (!n) return std::nullopt;
  auto it = n->attrs.find("required");
  if (it == n->attrs.end()) return std::vector<std::string>{};
  if (const auto* s = std::get_if<std::string>(&it->second)) return unpack_strings(*s);
  return std::vector<std::string>{};
}

double bin_entropy(const std::array<std::uint64_t, 11>& counts) {
  std::uint64_t total = 0;
  for (std::uint64_t c : counts) total += c;
  if (total == 0) return 0.0;
  double h = 0.0;
  for (std::uint64_t c : counts) {
    if (c == 0) continue;
    double f = static_cast<double>(c) / static_cast<double>(total);
    h -= f * std::log2(f);
  }
  return h;
}

CompletenessDistribution entropy_report(const GraphStore& store, std::optional<Aspect> scope) {
  // Cell members in id order, then the cell's required-attribute set.
  std::map<std::pair<Aspect, Perspective>, std::vector<const NodeRecord*>> cells;
  auto snapshot = store.snapshot();
  for (const auto& n : snapshot.nodes) {
    auto cell = TantraModel::classify_labels(n.labels);
    if (!cell) continue;
    if (scope && cell->first != *scope) continue;
    cells[*cell].push_back(&n);
  }

  CompletenessDistribution dist;
  for (const auto& [cell, members] : cells) {
    std::vector<std::string> required;
    if (auto policy = entropy_policy(store, cell.first, cell.second)) {
      required = *policy;
    } else {
      std::set<std::string> seen;
      for (const NodeRecord* n : members) {
        for (const auto& [name, value] : n->attrs) seen.insert(name);
      }
      required.assign(seen.begin(), seen.end());
    }
    for (const NodeRecord* n : members) {
      std::size_t filled = 0;
      for (const auto& a : required) filled += attr_filled(n->attrs, a) ? 1 : 0;
      ++dist.counts[static_cast<std::size_t>(completeness_bin(filled, required.size()))];
      ++dist.total;
    }
  }
  dist.entropy = bin_entropy(dist.counts);
  return dist;
}

}  // namespace tantra
