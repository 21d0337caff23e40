#include "tantra/metamodel.hpp"

#include <algorithm>

namespace tantra {

namespace {

std::string list_aspects() {
  std::string out;
  for (Aspect a : kAspects) {
    if (!out.empty()) out += ", ";
    out += aspect_name(a);
  }
  return out;
}

std::string list_perspectives() {
  std::string out;
  for (Perspective p : kPerspectives) {
    if (!out.empty()) out += ", ";
    out += perspective_name(p);
  }
  return out;
}

const std::string* string_attr(const NodeRecord& node, const char* name) {
  auto it = node.attrs.find(name);
  if (it == node.attrs.end()) return nullptr;
  return std::get_if<std::string>(&it->second);
}

}  // namespace

const char* aspect_name(Aspect a) {
  switch (a) {
    case Aspect::Who: return "Who";
    case Aspect::Where: return "Where";
    case Aspect::What: return "What";
    case Aspect::When: return "When";
    case Aspect::How: return "How";
    case Aspect::Why: return "Why";
    case Aspect::Relationships: return "Relationships";
    case Aspect::Relators: return "Relators";
    case Aspect::Separations: return "Separations";
  }
  return "?";
}

const char* perspective_name(Perspective p) {
  switch (p) {
    case Perspective::Contextual: return "Contextual";
    case Perspective::Conceptual: return "Conceptual";
    case Perspective::Logical: return "Logical";
    case Perspective::Physical: return "Physical";
    case Perspective::Instantiated: return "Instantiated";
  }
  return "?";
}

std::optional<Aspect> parse_aspect(std::string_view name) {
  for (Aspect a : kAspects) {
    if (name == aspect_name(a)) return a;
  }
  return std::nullopt;
}

std::optional<Perspective> parse_perspective(std::string_view name) {
  for (Perspective p : kPerspectives) {
    if (name == perspective_name(p)) return p;
  }
  return std::nullopt;
}

Aspect require_aspect(std::string_view name) {
  if (auto a = parse_aspect(name)) return *a;
  fail(Err::InvalidAspect,
       "\"" + std::string(name) + "\" is not an aspect; valid aspects: " + list_aspects());
}

Perspective require_perspective(std::string_view name) {
  if (auto p = parse_perspective(name)) return *p;
  fail(Err::InvalidPerspective, "\"" + std::string(name) +
                                    "\" is not a perspective; valid perspectives: " +
                                    list_perspectives());
}

std::optional<std::pair<Aspect, Perspective>> TantraModel::classify_labels(
    const std::set<std::string>& labels) {
  std::optional<Aspect> aspect;
  std::optional<Perspective> perspective;
  int aspects = 0, perspectives = 0;
  for (const auto& label : labels) {
    if (auto a = parse_aspect(label)) {
      ++aspects;
      aspect = a;
    } else if (auto p = parse_perspective(label)) {
      ++perspectives;
      perspective = p;
    }
  }
  if (aspects == 1 && perspectives == 1) return std::make_pair(*aspect, *perspective);
  return std::nullopt;
}

std::optional<TantraElement> TantraModel::to_element(const NodeRecord& node) const {
  auto cellpos = classify_labels(node.labels);
  if (!cellpos) return std::nullopt;
  TantraElement e;
  e.id = node.id;
  e.aspect = cellpos->first;
  e.perspective = cellpos->second;
  if (const std::string* name = string_attr(node, "display_name")) e.display_name = *name;
  return e;
}

TantraElement TantraModel::declare_element(Aspect aspect, Perspective perspective,
                                           const std::string& display_name, AttrMap attrs) {
  if (display_name.empty()) fail(Err::InvalidArgument, "display_name must be non-empty");
  if (perspective == Perspective::Instantiated) {
    auto it = attrs.find("unique_id");
    const std::string* uid =
        it == attrs.end() ? nullptr : std::get_if<std::string>(&it->second);
    if (!uid || uid->empty()) {
      fail(Err::MissingUniqueId,
           "Instantiated element \"" + display_name + "\" needs a unique_id attribute");
    }
  }
  attrs["display_name"] = display_name;
  std::string id =
      store_.add_node({aspect_name(aspect), perspective_name(perspective)}, std::move(attrs));
  return {id, aspect, perspective, display_name};
}

std::string TantraModel::reify(const std::string& parent_id, const std::string& child_id) {
  auto parent = find_element(parent_id);
  if (!parent) fail(Err::UnknownElement, parent_id);
  auto child = find_element(child_id);
  if (!child) fail(Err::UnknownElement, child_id);
  if (parent->aspect != child->aspect) {
    fail(Err::AspectMismatch, std::string(aspect_name(parent->aspect)) + " -> " +
                                  aspect_name(child->aspect));
  }
  int delta = level(child->perspective) - level(parent->perspective);
  if (delta <= 0) {
    fail(Err::LevelReversal, std::string(perspective_name(parent->perspective)) + " -> " +
                                 perspective_name(child->perspective));
  }
  if (delta > 1) {
    fail(Err::LevelSkip, std::string(perspective_name(parent->perspective)) + " -> " +
                             perspective_name(child->perspective));
  }
  for (const auto& edge : store_.edges_from(parent_id)) {
    if (edge.kind == kReifiesEdge && edge.dst == child_id) return edge.id;
  }
  return store_.add_edge(parent_id, child_id, kReifiesEdge);
}

std::vector<TantraElement> TantraModel::cell(Aspect aspect, Perspective perspective) const {
  std::vector<TantraElement> out;
  for (const auto& node : store_.query(aspect_name(aspect))) {
    auto e = to_element(node);
    if (e && e->perspective == perspective) out.push_back(std::move(*e));
  }
  return out;
}

std::vector<TantraElement> TantraModel::all_elements() const {
  std::vector<TantraElement> out;
  for (const auto& node : store_.query()) {
    if (auto e = to_element(node)) out.push_back(std::move(*e));
  }
  return out;
}

TantraElement TantraModel::element(const std::string& id) const {
  auto e = find_element(id);
  if (!e) fail(Err::UnknownElement, id);
  return *e;
}

std::optional<TantraElement> TantraModel::find_element(const std::string& id) const {
  const NodeRecord* node = store_.find_node(id);
  if (!node) return std::nullopt;
  return to_element(*node);
}

std::vector<std::string> TantraModel::parents(const std::string& id) const {
  std::vector<std::string> out;
  for (const auto& edge : store_.edges_to(id)) {
    if (edge.kind == kReifiesEdge) out.push_back(edge.src);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> TantraModel::children(const std::string& id) const {
  std::vector<std::string> out;
  for (const auto& edge : store_.edges_from(id)) {
    if (edge.kind == kReifiesEdge) out.push_back(edge.dst);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Violation> TantraModel::validate() const {
  std::vector<Violation> out;
  std::map<std::string, std::string> uid_owner;  // unique_id -> first node

  auto nodes = store_.query();
  for (const auto& node : nodes) {
    int aspects = 0, perspectives = 0;
    for (const auto& label : node.labels) {
      if (parse_aspect(label)) ++aspects;
      if (parse_perspective(label)) ++perspectives;
    }
    if (aspects == 0 && perspectives == 0) continue;  // not an element
    if (aspects != 1 || perspectives != 1) {
      out.push_back({"CellAmbiguity", node.id,
                     std::to_string(aspects) + " aspect and " + std::to_string(perspectives) +
                         " perspective labels"});
      continue;
    }
    auto e = to_element(node);
    if (e->display_name.empty()) {
      out.push_back({"MissingDisplayName", node.id, ""});
    }
    if (e->perspective == Perspective::Instantiated) {
      const std::string* uid = string_attr(node, "unique_id");
      if (!uid || uid->empty()) {
        out.push_back({"MissingUniqueId", node.id, e->display_name});
      } else {
        auto [it, fresh] = uid_owner.emplace(*uid, node.id);
        if (!fresh) {
          out.push_back({"DuplicateUniqueId", node.id,
                         "unique_id \"" + *uid + "\" already used by " + it->second});
        }
      }
    }
  }

  for (const auto& edge : store_.all_edges()) {
    if (edge.kind != kReifiesEdge) continue;
    auto parent = find_element(edge.src);
    auto child = find_element(edge.dst);
    if (!parent || !child) {
      out.push_back({"BadReifyEndpoint", edge.id, "reifies link endpoint is not an element"});
      continue;
    }
    if (parent->aspect != child->aspect) {
      out.push_back({"AspectMismatch", edge.id,
                     std::string(aspect_name(parent->aspect)) + " -> " +
                         aspect_name(child->aspect)});
      continue;
    }
    int delta = level(child->perspective) - level(parent->perspective);
    if (delta <= 0) {
      out.push_back({"LevelReversal", edge.id,
                     std::string(perspective_name(parent->perspective)) + " -> " +
                         perspective_name(child->perspective)});
    } else if (delta > 1) {
      out.push_back({"LevelSkip", edge.id,
                     std::string(perspective_name(parent->perspective)) + " -> " +
                         perspective_name(child->perspective)});
    }
  }

  // An Instantiated element must reach Contextual through valid links.
  for (const auto& node : nodes) {
    auto e = to_element(node);
    if (!e || e->perspective != Perspective::Instantiated) continue;
    std::set<std::string> seen;
    std::vector<std::string> frontier{e->id};
    bool grounded = false;
    while (!frontier.empty() && !grounded) {
      std::string cur = frontier.back();
      frontier.pop_back();
      if (!seen.insert(cur).second) continue;
      auto cur_el = find_element(cur);
      if (!cur_el) continue;
      if (cur_el->perspective == Perspective::Contextual) {
        grounded = true;
        break;
      }
      for (const auto& edge : store_.edges_to(cur)) {
        if (edge.kind != kReifiesEdge) continue;
        auto parent = find_element(edge.src);
        if (!parent || parent->aspect != cur_el->aspect) continue;
        if (level(parent->perspective) != level(cur_el->perspective) - 1) continue;
        frontier.push_back(edge.src);
      }
    }
    if (!grounded) {
      out.push_back({"OrphanInstance", e->id,
                     "no reification chain up to Contextual for \"" + e->display_name + "\""});
    }
  }

  return out;
}

}  // namespace tantra
