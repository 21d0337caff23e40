#include "tantra/relators.hpp"

#include <algorithm>

namespace tantra {

namespace {

using int128 = __int128;

int128 pow10_128(int n) {
  int128 v = 1;
  for (int i = 0; i < n; ++i) v *= 10;
  return v;
}

std::string score_attr(SeparationKind k) {
  return std::string("sep.") + separation_kind_name(k);
}

std::string weight_attr(SeparationKind k) {
  return std::string("sepw.") + separation_kind_name(k);
}

std::optional<Decimal> decimal_attr(const NodeRecord& node, const std::string& name) {
  auto it = node.attrs.find(name);
  if (it == node.attrs.end()) return std::nullopt;
  if (const Decimal* d = std::get_if<Decimal>(&it->second)) return *d;
  if (const std::int64_t* i = std::get_if<std::int64_t>(&it->second)) return Decimal(*i);
  return std::nullopt;
}

const Decimal kOne{1};

}  // namespace

const char* separation_kind_name(SeparationKind k) {
  switch (k) {
    case SeparationKind::Informational: return "Informational";
    case SeparationKind::Spatial: return "Spatial";
    case SeparationKind::Temporal: return "Temporal";
    case SeparationKind::Financial: return "Financial";
    case SeparationKind::Capability: return "Capability";
  }
  return "?";
}

std::optional<SeparationKind> parse_separation_kind(std::string_view name) {
  for (SeparationKind k : kSeparationKinds) {
    if (name == separation_kind_name(k)) return k;
  }
  return std::nullopt;
}

SeparationKind require_separation_kind(std::string_view name) {
  if (auto k = parse_separation_kind(name)) return *k;
  std::string valid;
  for (SeparationKind k : kSeparationKinds) {
    if (!valid.empty()) valid += ", ";
    valid += separation_kind_name(k);
  }
  fail(Err::UnknownSeparationKind,
       "\"" + std::string(name) + "\" is not a separation kind; valid kinds: " + valid);
}

Relator RelatorModel::create_relator(const std::string& kind,
                                     const std::set<std::string>& mediated) {
  if (kind.empty()) fail(Err::InvalidArgument, "relator kind must be non-empty");
  if (mediated.size() < 2) {
    fail(Err::TooFewMediated,
         "a relator mediates at least 2 elements, got " + std::to_string(mediated.size()));
  }
  for (const auto& id : mediated) {
    if (!model_.is_element(id)) fail(Err::UnknownElement, id);
  }
  std::string id = store_.add_node(
      {aspect_name(Aspect::Relators), perspective_name(Perspective::Instantiated)},
      {{"display_name", kind}});
  store_.set_attr(id, "unique_id", "relator:" + id);
  for (const auto& target : mediated) store_.add_edge(id, target, kMediatesEdge);
  return {id, kind, mediated};
}

MaterialRelationship RelatorModel::found_relationship(const std::string& relator_id,
                                                      const std::string& a, const std::string& b,
                                                      const std::string& kind) {
  if (kind.empty()) fail(Err::InvalidArgument, "relationship kind must be non-empty");
  if (a == b) fail(Err::SelfRelationship, a);
  Relator rel = relator(relator_id);
  for (const std::string& endpoint : {a, b}) {
    if (!rel.mediated.count(endpoint)) {
      fail(Err::EndpointNotMediated,
           endpoint + " is not mediated by relator " + relator_id);
    }
  }
  std::string id = store_.add_node(
      {aspect_name(Aspect::Relationships), perspective_name(Perspective::Instantiated)},
      {{"display_name", kind}});
  store_.set_attr(id, "unique_id", "relationship:" + id);
  store_.add_edge(id, a, kEndpointEdge, {{"role", std::string("a")}});
  store_.add_edge(id, b, kEndpointEdge, {{"role", std::string("b")}});
  store_.add_edge(id, relator_id, kFoundedByEdge);
  return {id, kind, relator_id, a, b};
}

Relator RelatorModel::relator(const std::string& id) const {
  auto e = model_.find_element(id);
  if (!e || e->aspect != Aspect::Relators) {
    fail(Err::UnknownElement, id + " is not a relator element");
  }
  Relator out{id, e->display_name, {}};
  for (const auto& edge : store_.edges_from(id)) {
    if (edge.kind == kMediatesEdge) out.mediated.insert(edge.dst);
  }
  return out;
}

MaterialRelationship RelatorModel::relationship(const std::string& id) const {
  auto e = model_.find_element(id);
  if (!e || e->aspect != Aspect::Relationships) {
    fail(Err::UnknownElement, id + " is not a relationship element");
  }
  MaterialRelationship out{id, e->display_name, "", "", ""};
  for (const auto& edge : store_.edges_from(id)) {
    if (edge.kind == kFoundedByEdge) {
      out.relator = edge.dst;
    } else if (edge.kind == kEndpointEdge) {
      auto role = edge.attrs.find("role");
      const std::string* r =
          role == edge.attrs.end() ? nullptr : std::get_if<std::string>(&role->second);
      if (r && *r == "a") out.a = edge.dst;
      if (r && *r == "b") out.b = edge.dst;
    }
  }
  return out;
}

std::vector<Relator> RelatorModel::relators() const {
  std::vector<Relator> out;
  for (const auto& e : model_.cell(Aspect::Relators, Perspective::Instantiated)) {
    out.push_back(relator(e.id));
  }
  return out;
}

std::vector<MaterialRelationship> RelatorModel::relationships() const {
  std::vector<MaterialRelationship> out;
  for (const auto& e : model_.cell(Aspect::Relationships, Perspective::Instantiated)) {
    out.push_back(relationship(e.id));
  }
  return out;
}

std::vector<Violation> RelatorModel::scan() const {
  std::vector<Violation> out;
  for (const auto& e : model_.cell(Aspect::Relationships, Perspective::Instantiated)) {
    int founders = 0;
    std::string relator_id;
    std::vector<std::string> endpoints_a, endpoints_b;
    for (const auto& edge : store_.edges_from(e.id)) {
      if (edge.kind == kFoundedByEdge) {
        ++founders;
        relator_id = edge.dst;
      } else if (edge.kind == kEndpointEdge) {
        auto role = edge.attrs.find("role");
        const std::string* r =
            role == edge.attrs.end() ? nullptr : std::get_if<std::string>(&role->second);
        if (r && *r == "a") endpoints_a.push_back(edge.dst);
        else if (r && *r == "b") endpoints_b.push_back(edge.dst);
        else out.push_back({"BadEndpoints", e.id, "endpoint edge " + edge.id + " has no role"});
      }
    }
    if (founders != 1) {
      out.push_back({founders == 0 ? "MissingFoundingRelator" : "MultipleFoundingRelators",
                     e.id, std::to_string(founders) + " founded_by edges"});
      continue;
    }
    if (endpoints_a.size() != 1 || endpoints_b.size() != 1) {
      out.push_back({"BadEndpoints", e.id,
                     std::to_string(endpoints_a.size() + endpoints_b.size()) +
                         " endpoint edges"});
      continue;
    }
    if (endpoints_a[0] == endpoints_b[0]) {
      out.push_back({"SelfRelationship", e.id, endpoints_a[0]});
      continue;
    }
    auto rel_el = model_.find_element(relator_id);
    if (!rel_el || rel_el->aspect != Aspect::Relators) {
      out.push_back({"MissingFoundingRelator", e.id,
                     "founded_by target " + relator_id + " is not a relator"});
      continue;
    }
    Relator rel = relator(relator_id);
    for (const auto& endpoint : {endpoints_a[0], endpoints_b[0]}) {
      if (!rel.mediated.count(endpoint)) {
        out.push_back({"EndpointNotMediated", e.id,
                       endpoint + " not mediated by " + relator_id});
      }
    }
  }
  return out;
}

int cmp_frac(int128 a, int128 b, int128 c, int128 d) {
  int flip = 1;
  for (;;) {
    int128 qa = a / b, qc = c / d;
    if (qa != qc) return (qa < qc ? -1 : 1) * flip;
    a %= b;
    c %= d;
    if (a == 0 || c == 0) {
      if (a == 0 && c == 0) return 0;
      return (a == 0 ? -1 : 1) * flip;
    }
    // both fractional parts in (0,1): compare reciprocals, reversed
    std::swap(a, b);
    std::swap(c, d);
    flip = -flip;
  }
}

SepIndex separation_index_exact(const SeparationProfile& profile) {
  int score_scale = 0, weight_scale = 0;
  for (SeparationKind k : kSeparationKinds) {
    auto s = profile.scores.find(k);
    if (s != profile.scores.end()) score_scale = std::max(score_scale, s->second.scale());
    auto w = profile.weights.find(k);
    if (w != profile.weights.end()) weight_scale = std::max(weight_scale, w->second.scale());
  }
  int128 num = 0, den = 0;
  for (SeparationKind k : kSeparationKinds) {
    auto si = profile.scores.find(k);
    Decimal s = si == profile.scores.end() ? Decimal() : si->second;
    auto wi = profile.weights.find(k);
    Decimal w = wi == profile.weights.end() ? kOne : wi->second;
    if (s.is_negative() || Decimal(1) < s) {
      fail(Err::ScoreOutOfRange,
           std::string(separation_kind_name(k)) + " score " + s.to_string());
    }
    if (w.is_negative()) {
      fail(Err::NegativeWeight,
           std::string(separation_kind_name(k)) + " weight " + w.to_string());
    }
    int128 sm = int128(s.mantissa()) * pow10_128(score_scale - s.scale());
    int128 wm = int128(w.mantissa()) * pow10_128(weight_scale - w.scale());
    num += wm * sm;
    den += wm;
  }
  if (den == 0) fail(Err::AllWeightsZero, "subject " + profile.subject);
  den *= pow10_128(score_scale);
  return {num, den};
}

Decimal separation_index(const SeparationProfile& profile) {
  SepIndex ix = separation_index_exact(profile);
  return ratio_to_decimal(ix.num, ix.den, Decimal::kMaxScale);
}

std::string SeparationModel::resolve_subject(const std::string& text) {
  if (text.empty()) fail(Err::UnknownSubject, "empty subject");
  if (store_.has_node(text)) return text;
  auto hits = store_.query(std::nullopt, {AttrPredicate::eq("unique_id", text)});
  if (hits.size() == 1) return hits[0].id;
  if (hits.size() > 1) {
    fail(Err::AmbiguousName, "unique_id \"" + text + "\" matches " +
                                 std::to_string(hits.size()) + " nodes");
  }
  auto bar = text.find('|');
  if (bar != std::string::npos && bar > 0 && bar + 1 < text.size()) {
    std::string left = text.substr(0, bar);
    std::string right = text.substr(bar + 1);
    if (left.find('|') != std::string::npos || right.find('|') != std::string::npos) {
      fail(Err::UnknownSubject, "pair subject \"" + text + "\" must have exactly one '|'");
    }
    std::string a = resolve_subject(left);
    std::string b = resolve_subject(right);
    auto pairs = store_.query("SeparationSubject",
                              {AttrPredicate::eq("pair_a", a), AttrPredicate::eq("pair_b", b)});
    if (!pairs.empty()) return pairs[0].id;
    return store_.add_node({"SeparationSubject"},
                           {{"display_name", text}, {"pair_a", a}, {"pair_b", b}});
  }
  fail(Err::UnknownSubject, text);
}

void SeparationModel::set_separation(const std::string& subject_id, SeparationKind kind,
                                     const Decimal& score) {
  if (!store_.has_node(subject_id)) fail(Err::UnknownSubject, subject_id);
  if (score.is_negative() || Decimal(1) < score) {
    fail(Err::ScoreOutOfRange, score.to_string() + " outside [0,1]");
  }
  if (score.scale() > 9) {
    fail(Err::InvalidArgument, "scores carry at most 9 fractional digits");
  }
  store_.set_attr(subject_id, score_attr(kind), score);
}

void SeparationModel::set_weight(const std::string& subject_id, SeparationKind kind,
                                 const Decimal& weight) {
  if (!store_.has_node(subject_id)) fail(Err::UnknownSubject, subject_id);
  if (weight.is_negative()) fail(Err::NegativeWeight, weight.to_string());
  if (Decimal(1000000) < weight || weight.scale() > 6) {
    fail(Err::InvalidArgument, "weights stay within [0, 1e6] with at most 6 fractional digits");
  }
  store_.set_attr(subject_id, weight_attr(kind), weight);
}

SeparationProfile SeparationModel::profile(const std::string& subject_id) const {
  const NodeRecord* node = store_.find_node(subject_id);
  if (!node) fail(Err::UnknownSubject, subject_id);
  SeparationProfile out;
  out.subject = subject_id;
  for (SeparationKind k : kSeparationKinds) {
    if (auto s = decimal_attr(*node, score_attr(k))) out.scores.emplace(k, *s);
    if (auto w = decimal_attr(*node, weight_attr(k))) out.weights.emplace(k, *w);
  }
  return out;
}

std::vector<std::string> SeparationModel::scored_subjects() const {
  std::set<std::string> ids;
  for (SeparationKind k : kSeparationKinds) {
    for (const auto& node : store_.query(std::nullopt, {AttrPredicate::exists(score_attr(k))})) {
      ids.insert(node.id);
    }
  }
  return {ids.begin(), ids.end()};
}

std::vector<RankedSubject> SeparationModel::rank(const std::vector<std::string>& subjects,
                                                 std::optional<SeparationKind> kind) const {
  struct Entry {
    std::string id;
    SepIndex ix;
    Decimal value;
  };
  std::vector<Entry> entries;
  entries.reserve(subjects.size());
  for (const auto& id : subjects) {
    SeparationProfile p = profile(id);
    if (kind) {
      auto it = p.scores.find(*kind);
      Decimal s = it == p.scores.end() ? Decimal() : it->second;
      entries.push_back({id, {s.mantissa(), pow10_128(s.scale())}, s});
    } else {
      SepIndex ix = separation_index_exact(p);
      entries.push_back({id, ix, ratio_to_decimal(ix.num, ix.den, Decimal::kMaxScale)});
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
    int c = cmp_frac(x.ix.num, x.ix.den, y.ix.num, y.ix.den);
    if (c != 0) return c > 0;
    return x.id < y.id;
  });
  std::vector<RankedSubject> out;
  out.reserve(entries.size());
  for (auto& e : entries) out.push_back({std::move(e.id), e.value});
  return out;
}

int SeparationModel::ingest_csv(const csv::Table& table) {
  int subject_col = table.column("subject_id");
  int kind_col = table.column("kind");
  int score_col = table.column("score");
  int weight_col = table.column("weight");
  for (const char* required : {"subject_id", "kind", "score"}) {
    if (table.column(required) < 0) {
      fail(Err::SchemaMismatch, std::string("missing column ") + required);
    }
  }
  int applied = 0;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    auto at = [&](int col) -> std::string {
      return col >= 0 && col < static_cast<int>(row.size()) ? row[col] : "";
    };
    std::string where = "line " + std::to_string(table.line_numbers[i]);
    try {
      std::string subject = resolve_subject(at(subject_col));
      SeparationKind kind = require_separation_kind(at(kind_col));
      set_separation(subject, kind, Decimal::parse(at(score_col)));
      std::string weight = at(weight_col);
      if (!weight.empty()) set_weight(subject, kind, Decimal::parse(weight));
    } catch (const TantraError& e) {
      fail(e.code(), where + ": " + e.message());
    }
    ++applied;
  }
  return applied;
}

}  // namespace tantra
