#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tantra/value.hpp"

namespace tantra {

struct NodeRecord {
  std::string id;
  std::set<std::string> labels;
  AttrMap attrs;
};

struct EdgeRecord {
  std::string id;
  std::string src;
  std::string dst;
  std::string kind;
  AttrMap attrs;
};

struct GraphSnapshot {
  int format_version = 1;
  std::vector<NodeRecord> nodes;  // id-sorted
  std::vector<EdgeRecord> edges;  // id-sorted
};

// Attribute predicate for query(). Exists ignores the value.
struct AttrPredicate {
  enum class Op { Eq, Ne, Lt, Le, Gt, Ge, Exists };
  std::string name;
  Op op = Op::Eq;
  AttrValue value{};

  static AttrPredicate eq(std::string name, AttrValue v) {
    return {std::move(name), Op::Eq, std::move(v)};
  }
  static AttrPredicate exists(std::string name) { return {std::move(name), Op::Exists, {}}; }
};

// Typed property graph with engine-assigned monotonic ids ("n00000001",
// "e00000001") and canonical JSON persistence. Ids are never reused within
// a store's lifetime; deleting a node cascades to its incident edges.
//
// Concurrency contract: single writer, multiple readers. All const member
// functions are pure reads; mutation requires exclusive access.
class GraphStore {
 public:
  // Throws EmptyLabels when labels is empty, InvalidArgument on empty
  // label strings or attribute names.
  std::string add_node(const std::set<std::string>& labels, AttrMap attrs = {});

  // Throws DanglingEndpoint naming the missing node. Self-loops and
  // parallel edges are permitted.
  std::string add_edge(const std::string& src, const std::string& dst, const std::string& kind,
                       AttrMap attrs = {});

  void delete_node(const std::string& id);  // cascades to incident edges
  void delete_edge(const std::string& id);

  bool has_node(const std::string& id) const { return nodes_.count(id) != 0; }
  bool has_edge(const std::string& id) const { return edges_.count(id) != 0; }
  const NodeRecord& node(const std::string& id) const;  // throws UnknownNode
  const EdgeRecord& edge(const std::string& id) const;  // throws UnknownEdge
  const NodeRecord* find_node(const std::string& id) const;
  const EdgeRecord* find_edge(const std::string& id) const;

  void set_attr(const std::string& node_id, const std::string& name, AttrValue value);
  void erase_attr(const std::string& node_id, const std::string& name);
  void add_label(const std::string& node_id, const std::string& label);

  // Nodes satisfying every filter, sorted by id. A label filter matches
  // nodes whose label set contains it.
  std::vector<NodeRecord> query(const std::optional<std::string>& label_filter = std::nullopt,
                                const std::vector<AttrPredicate>& attr_filters = {}) const;

  std::vector<std::string> neighbors(const std::string& id) const;  // out-edge targets, sorted
  std::vector<std::string> incoming(const std::string& id) const;   // in-edge sources, sorted
  std::vector<EdgeRecord> edges_from(const std::string& id) const;
  std::vector<EdgeRecord> edges_to(const std::string& id) const;
  std::vector<EdgeRecord> all_edges() const;

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  GraphSnapshot snapshot() const;

  // Canonical serialization: sorted object keys, arrays sorted by id,
  // two-space indent, trailing newline. Equal stores produce identical
  // bytes, and save(load(save(S))) is byte-identical to save(S).
  std::string to_json() const;
  static GraphStore from_json(const std::string& text);

  void save(const std::filesystem::path& path) const;
  static GraphStore load(const std::filesystem::path& path);

 private:
  friend bool matches(const NodeRecord&, const std::vector<AttrPredicate>&);

  std::map<std::string, NodeRecord> nodes_;
  std::map<std::string, EdgeRecord> edges_;
  std::map<std::string, std::set<std::string>> out_edges_;  // node id -> edge ids
  std::map<std::string, std::set<std::string>> in_edges_;
  std::uint64_t next_node_ = 1;
  std::uint64_t next_edge_ = 1;
};

}  // namespace tantra
