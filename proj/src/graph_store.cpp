#include "tantra/graph_store.hpp"

#include <fstream>

#include "json.hpp"

namespace tantra {

namespace {

using nlohmann::json;
// std::map keys give sorted-object output, the canonical form.
using cjson = nlohmann::basic_json<std::map>;

std::string format_id(char prefix, std::uint64_t n) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%c%08llu", prefix, static_cast<unsigned long long>(n));
  return buf;
}

// Engine-assigned id -> running counter, 0 for foreign ids.
std::uint64_t id_counter(const std::string& id, char prefix) {
  if (id.size() < 2 || id[0] != prefix) return 0;
  std::uint64_t v = 0;
  for (std::size_t i = 1; i < id.size(); ++i) {
    if (id[i] < '0' || id[i] > '9') return 0;
    v = v * 10 + static_cast<std::uint64_t>(id[i] - '0');
  }
  return v;
}

cjson attr_to_json(const AttrValue& v) {
  return std::visit(
      [](const auto& x) -> cjson {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Decimal>) {
          return cjson{{"$dec", x.to_string()}};
        } else if constexpr (std::is_same_v<T, Date>) {
          return cjson{{"$date", x.to_string()}};
        } else {
          return cjson(x);
        }
      },
      v);
}

AttrValue attr_from_json(const cjson& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_unsigned()) {
    auto u = j.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(INT64_MAX)) {
      fail(Err::ParseError, "integer out of range at " + where);
    }
    return static_cast<std::int64_t>(u);
  }
  if (j.is_number_float()) return Decimal::from_double(j.get<double>());
  if (j.is_object() && j.size() == 1) {
    if (j.contains("$dec") && j["$dec"].is_string()) {
      return Decimal::parse(j["$dec"].get<std::string>());
    }
    if (j.contains("$date") && j["$date"].is_string()) {
      return Date::parse(j["$date"].get<std::string>());
    }
  }
  fail(Err::ParseError, "unsupported attribute value at " + where);
}

cjson attrs_to_json(const AttrMap& attrs) {
  cjson j = cjson::object();
  for (const auto& [name, value] : attrs) j[name] = attr_to_json(value);
  return j;
}

AttrMap attrs_from_json(const cjson& j, const std::string& where) {
  if (!j.is_object()) fail(Err::ParseError, "attrs is not an object at " + where);
  AttrMap attrs;
  for (const auto& [name, value] : j.items()) {
    if (name.empty()) fail(Err::ParseError, "empty attribute name at " + where);
    attrs.emplace(name, attr_from_json(value, where + "." + name));
  }
  return attrs;
}

void check_attr_names(const AttrMap& attrs) {
  for (const auto& [name, _] : attrs) {
    if (name.empty()) fail(Err::InvalidArgument, "attribute names must be non-empty");
  }
}

}  // namespace

bool matches(const NodeRecord& node, const std::vector<AttrPredicate>& filters) {
  for (const auto& f : filters) {
    auto it = node.attrs.find(f.name);
    if (f.op == AttrPredicate::Op::Exists) {
      if (it == node.attrs.end()) return false;
      continue;
    }
    if (it == node.attrs.end()) return false;
    auto cmp = attr_compare(it->second, f.value);
    if (cmp == std::partial_ordering::unordered) return false;
    bool ok = false;
    switch (f.op) {
      case AttrPredicate::Op::Eq: ok = cmp == std::partial_ordering::equivalent; break;
      case AttrPredicate::Op::Ne: ok = cmp != std::partial_ordering::equivalent; break;
      case AttrPredicate::Op::Lt: ok = cmp == std::partial_ordering::less; break;
      case AttrPredicate::Op::Le: ok = cmp != std::partial_ordering::greater; break;
      case AttrPredicate::Op::Gt: ok = cmp == std::partial_ordering::greater; break;
      case AttrPredicate::Op::Ge: ok = cmp != std::partial_ordering::less; break;
      case AttrPredicate::Op::Exists: ok = true; break;
    }
    if (!ok) return false;
  }
  return true;
}

std::string GraphStore::add_node(const std::set<std::string>& labels, AttrMap attrs) {
  if (labels.empty()) fail(Err::EmptyLabels, "a node needs at least one label");
  for (const auto& l : labels) {
    if (l.empty()) fail(Err::InvalidArgument, "labels must be non-empty strings");
  }
  check_attr_names(attrs);
  std::string id = format_id('n', next_node_++);
  nodes_.emplace(id, NodeRecord{id, labels, std::move(attrs)});
  out_edges_[id];
  in_edges_[id];
  return id;
}

std::string GraphStore::add_edge(const std::string& src, const std::string& dst,
                                 const std::string& kind, AttrMap attrs) {
  if (!has_node(src)) fail(Err::DanglingEndpoint, "no such node: " + src);
  if (!has_node(dst)) fail(Err::DanglingEndpoint, "no such node: " + dst);
  if (kind.empty()) fail(Err::InvalidArgument, "edge kind must be non-empty");
  check_attr_names(attrs);
  std::string id = format_id('e', next_edge_++);
  edges_.emplace(id, EdgeRecord{id, src, dst, kind, std::move(attrs)});
  out_edges_[src].insert(id);
  in_edges_[dst].insert(id);
  return id;
}

void GraphStore::delete_node(const std::string& id) {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) fail(Err::UnknownNode, id);
  std::set<std::string> incident = out_edges_[id];
  incident.insert(in_edges_[id].begin(), in_edges_[id].end());
  for (const auto& eid : incident) delete_edge(eid);
  out_edges_.erase(id);
  in_edges_.erase(id);
  nodes_.erase(it);
}

void GraphStore::delete_edge(const std::string& id) {
  auto it = edges_.find(id);
  if (it == edges_.end()) fail(Err::UnknownEdge, id);
  out_edges_[it->second.src].erase(id);
  in_edges_[it->second.dst].erase(id);
  edges_.erase(it);
}

const NodeRecord& GraphStore::node(const std::string& id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) fail(Err::UnknownNode, id);
  return it->second;
}

const EdgeRecord& GraphStore::edge(const std::string& id) const {
  auto it = edges_.find(id);
  if (it == edges_.end()) fail(Err::UnknownEdge, id);
  return it->second;
}

const NodeRecord* GraphStore::find_node(const std::string& id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

const EdgeRecord* GraphStore::find_edge(const std::string& id) const {
  auto it = edges_.find(id);
  return it == edges_.end() ? nullptr : &it->second;
}

void GraphStore::set_attr(const std::string& node_id, const std::string& name, AttrValue value) {
  auto it = nodes_.find(node_id);
  if (it == nodes_.end()) fail(Err::UnknownNode, node_id);
  if (name.empty()) fail(Err::InvalidArgument, "attribute names must be non-empty");
  it->second.attrs[name] = std::move(value);
}

void GraphStore::erase_attr(const std::string& node_id, const std::string& name) {
  auto it = nodes_.find(node_id);
  if (it == nodes_.end()) fail(Err::UnknownNode, node_id);
  it->second.attrs.erase(name);
}

void GraphStore::add_label(const std::string& node_id, const std::string& label) {
  auto it = nodes_.find(node_id);
  if (it == nodes_.end()) fail(Err::UnknownNode, node_id);
  if (label.empty()) fail(Err::InvalidArgument, "labels must be non-empty strings");
  it->second.labels.insert(label);
}

std::vector<NodeRecord> GraphStore::query(const std::optional<std::string>& label_filter,
                                          const std::vector<AttrPredicate>& attr_filters) const {
  std::vector<NodeRecord> out;
  for (const auto& [id, node] : nodes_) {
    if (label_filter && node.labels.count(*label_filter) == 0) continue;
    if (!matches(node, attr_filters)) continue;
    out.push_back(node);
  }
  return out;  // nodes_ iterates in id order
}

std::vector<std::string> GraphStore::neighbors(const std::string& id) const {
  auto it = out_edges_.find(id);
  if (it == out_edges_.end()) fail(Err::UnknownNode, id);
  std::set<std::string> targets;
  for (const auto& eid : it->second) targets.insert(edges_.at(eid).dst);
  return {targets.begin(), targets.end()};
}

std::vector<std::string> GraphStore::incoming(const std::string& id) const {
  auto it = in_edges_.find(id);
  if (it == in_edges_.end()) fail(Err::UnknownNode, id);
  std::set<std::string> sources;
  for (const auto& eid : it->second) sources.insert(edges_.at(eid).src);
  return {sources.begin(), sources.end()};
}

std::vector<EdgeRecord> GraphStore::edges_from(const std::string& id) const {
  auto it = out_edges_.find(id);
  if (it == out_edges_.end()) fail(Err::UnknownNode, id);
  std::vector<EdgeRecord> out;
  for (const auto& eid : it->second) out.push_back(edges_.at(eid));
  return out;
}

std::vector<EdgeRecord> GraphStore::edges_to(const std::string& id) const {
  auto it = in_edges_.find(id);
  if (it == in_edges_.end()) fail(Err::UnknownNode, id);
  std::vector<EdgeRecord> out;
  for (const auto& eid : it->second) out.push_back(edges_.at(eid));
  return out;
}

std::vector<EdgeRecord> GraphStore::all_edges() const {
  std::vector<EdgeRecord> out;
  out.reserve(edges_.size());
  for (const auto& [_, e] : edges_) out.push_back(e);
  return out;
}

GraphSnapshot GraphStore::snapshot() const {
  GraphSnapshot snap;
  snap.nodes.reserve(nodes_.size());
  snap.edges.reserve(edges_.size());
  for (const auto& [_, n] : nodes_) snap.nodes.push_back(n);
  for (const auto& [_, e] : edges_) snap.edges.push_back(e);
  return snap;
}

std::string GraphStore::to_json() const {
  cjson doc;
  doc["format_version"] = 1;
  auto nodes = cjson::array();
  for (const auto& [id, n] : nodes_) {
    cjson jn;
    jn["id"] = id;
    jn["labels"] = cjson(std::vector<std::string>(n.labels.begin(), n.labels.end()));
    jn["attrs"] = attrs_to_json(n.attrs);
    nodes.push_back(std::move(jn));
  }
  auto edges = cjson::array();
  for (const auto& [id, e] : edges_) {
    cjson je;
    je["id"] = id;
    je["src"] = e.src;
    je["dst"] = e.dst;
    je["kind"] = e.kind;
    je["attrs"] = attrs_to_json(e.attrs);
    edges.push_back(std::move(je));
  }
  doc["nodes"] = std::move(nodes);
  doc["edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

GraphStore GraphStore::from_json(const std::string& text) {
  cjson doc;
  try {
    doc = cjson::parse(text);
  } catch (const cjson::parse_error& e) {
    fail(Err::ParseError, std::string(e.what()) + " (byte offset " + std::to_string(e.byte) + ")");
  }
  if (!doc.is_object() || !doc.contains("format_version")) {
    fail(Err::ParseError, "missing format_version");
  }
  if (!doc["format_version"].is_number_integer() || doc["format_version"].get<int>() != 1) {
    fail(Err::VersionMismatch,
         "unsupported format_version " + doc["format_version"].dump() + ", expected 1");
  }

  GraphStore store;
  for (const auto& jn : doc.value("nodes", cjson::array())) {
    if (!jn.is_object() || !jn.contains("id") || !jn["id"].is_string()) {
      fail(Err::ParseError, "node without string id");
    }
    NodeRecord n;
    n.id = jn["id"].get<std::string>();
    if (store.nodes_.count(n.id)) fail(Err::ParseError, "duplicate node id " + n.id);
    if (!jn.contains("labels") || !jn["labels"].is_array() || jn["labels"].empty()) {
      fail(Err::ParseError, "node " + n.id + " needs a non-empty labels array");
    }
    for (const auto& l : jn["labels"]) {
      if (!l.is_string() || l.get<std::string>().empty()) {
        fail(Err::ParseError, "bad label on node " + n.id);
      }
      n.labels.insert(l.get<std::string>());
    }
    n.attrs = attrs_from_json(jn.value("attrs", cjson::object()), "node " + n.id);
    store.next_node_ = std::max(store.next_node_, id_counter(n.id, 'n') + 1);
    store.out_edges_[n.id];
    store.in_edges_[n.id];
    store.nodes_.emplace(n.id, std::move(n));
  }
  for (const auto& je : doc.value("edges", cjson::array())) {
    if (!je.is_object() || !je.contains("id") || !je["id"].is_string()) {
      fail(Err::ParseError, "edge without string id");
    }
    EdgeRecord e;
    e.id = je["id"].get<std::string>();
    if (store.edges_.count(e.id)) fail(Err::ParseError, "duplicate edge id " + e.id);
    for (const char* key : {"src", "dst", "kind"}) {
      if (!je.contains(key) || !je[key].is_string()) {
        fail(Err::ParseError, "edge " + e.id + " missing " + key);
      }
    }
    e.src = je["src"].get<std::string>();
    e.dst = je["dst"].get<std::string>();
    e.kind = je["kind"].get<std::string>();
    if (e.kind.empty()) fail(Err::ParseError, "edge " + e.id + " has empty kind");
    if (!store.has_node(e.src) || !store.has_node(e.dst)) {
      fail(Err::ParseError, "edge " + e.id + " references a missing node");
    }
    e.attrs = attrs_from_json(je.value("attrs", cjson::object()), "edge " + e.id);
    store.next_edge_ = std::max(store.next_edge_, id_counter(e.id, 'e') + 1);
    store.out_edges_[e.src].insert(e.id);
    store.in_edges_[e.dst].insert(e.id);
    store.edges_.emplace(e.id, std::move(e));
  }
  return store;
}

void GraphStore::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Err::IoError, "cannot open " + path.string() + " for writing");
  out << to_json();
  if (!out) fail(Err::IoError, "write failed: " + path.string());
}

GraphStore GraphStore::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Err::IoError, "cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json(text);
}

}  // namespace tantra
