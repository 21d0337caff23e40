#include "tantra/sector_data.hpp"

#include <algorithm>
#include <fstream>
#include <queue>

#include "json.hpp"

namespace tantra {

namespace {

using cjson = nlohmann::basic_json<std::map>;

constexpr std::array<const char*, 5> kAllocationColumns = {"scheme_id", "name", "support_nature",
                                                           "fiscal_year", "amount_inr_crore"};

std::string string_attr(const AttrMap& attrs, const std::string& name) {
  auto it = attrs.find(name);
  if (it == attrs.end()) return "";
  if (const auto* s = std::get_if<std::string>(&it->second)) return *s;
  return "";
}

Decimal decimal_attr(const AttrMap& attrs, const std::string& name) {
  auto it = attrs.find(name);
  if (it == attrs.end()) return Decimal();
  if (const auto* d = std::get_if<Decimal>(&it->second)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&it->second)) return Decimal(*i, 0);
  return Decimal();
}

__int128 pow10_128(int n) {
  __int128 v = 1;
  while (n-- > 0) v *= 10;
  return v;
}

std::string pack_strings(const std::vector<std::string>& items) {
  cjson a = cjson::array();
  for (const auto& s : items) a.push_back(s);
  return a.dump();
}

cjson load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Err::IoError, "cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  cjson j = cjson::parse(text, nullptr, false);
  if (j.is_discarded()) fail(Err::ParseError, path.filename().string() + ": invalid JSON");
  if (!j.is_object()) fail(Err::ParseError, path.filename().string() + ": expected a JSON object");
  return j;
}

std::string need_string(const cjson& obj, const std::string& field, const std::string& where) {
  if (!obj.contains(field) || !obj.at(field).is_string()) {
    fail(Err::ParseError, where + ": missing string field '" + field + "'");
  }
  return obj.at(field).get<std::string>();
}

AttrValue fixture_attr(const cjson& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_array()) {
    std::vector<std::string> items;
    for (const auto& s : v) {
      if (!s.is_string()) fail(Err::ParseError, where + ": attribute arrays must hold strings");
      items.push_back(s.get<std::string>());
    }
    return pack_strings(items);
  }
  fail(Err::ParseError, where + ": unsupported attribute value type");
}

}  // namespace

bool is_support_category(std::string_view name) {
  for (const char* c : kSupportCategories) {
    if (name == c) return true;
  }
  return false;
}

IngestResult SectorData::ingest_allocations(const csv::Table& table) {
  // Header: the exact declared column set, any order.
  std::map<std::string, int> seen;
  for (const auto& h : table.header) ++seen[h];
  for (const char* col : kAllocationColumns) {
    auto it = seen.find(col);
    if (it == seen.end()) fail(Err::SchemaMismatch, "missing column '" + std::string(col) + "'");
    if (it->second > 1) fail(Err::SchemaMismatch, "duplicate column '" + std::string(col) + "'");
    seen.erase(it);
  }
  if (!seen.empty()) fail(Err::SchemaMismatch, "unexpected column '" + seen.begin()->first + "'");

  int c_scheme = table.column("scheme_id");
  int c_name = table.column("name");
  int c_nature = table.column("support_nature");
  int c_year = table.column("fiscal_year");
  int c_amount = table.column("amount_inr_crore");

  struct Staged {
    std::string scheme_id, name, nature, year;
    Decimal amount;
    bool total = false;
  };
  std::vector<Staged> staged;
  std::vector<std::string> duplicates;
  std::set<std::string> file_keys;

  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    std::string where = "line " + std::to_string(table.line_numbers[r]);
    if (row.size() != table.header.size()) {
      fail(Err::SchemaMismatch, where + ": expected " + std::to_string(table.header.size()) +
                                    " fields, got " + std::to_string(row.size()));
    }
    Staged s;
    s.scheme_id = row[c_scheme];
    s.name = row[c_name];
    s.nature = row[c_nature];
    s.year = row[c_year];
    s.total = s.scheme_id == "TOTAL";
    if (s.scheme_id.empty()) fail(Err::SchemaMismatch, where + ": empty scheme_id");
    if (s.year.empty()) fail(Err::SchemaMismatch, where + ": empty fiscal_year");
    if (!s.total && s.name.empty()) fail(Err::SchemaMismatch, where + ": empty name");
    try {
      s.amount = Decimal::parse(row[c_amount]);
    } catch (const TantraError& e) {
      fail(Err::SchemaMismatch, where + ", column amount_inr_crore: " + e.message());
    }
    if (s.amount.is_negative()) {
      fail(Err::NegativeAmount, where + ": amount " + s.amount.to_string() + " for " + s.scheme_id);
    }

    std::string key = s.scheme_id + ":" + s.year;
    bool dup = !file_keys.insert(key).second;
    if (!dup) {
      if (s.total) {
        dup = !store_.query(std::string("DeclaredTotal"),
                            {AttrPredicate::eq("fiscal_year", s.year)})
                   .empty();
      } else {
        dup = !store_.query(std::nullopt, {AttrPredicate::eq("unique_id", key)}).empty();
      }
    }
    if (dup) duplicates.push_back(key);
    staged.push_back(std::move(s));
  }
  if (!duplicates.empty()) {
    std::string list;
    for (const auto& k : duplicates) {
      if (!list.empty()) list += ", ";
      list += k;
    }
    fail(Err::DuplicateKey, "duplicate allocation keys: " + list);
  }

  // Commit. Rows become What-Instantiated elements, reified under the
  // allocations anchor when the fixture has installed one.
  std::string anchor;
  {
    auto anchors = store_.query(std::string(aspect_name(Aspect::What)),
                                {AttrPredicate::eq("anchor", std::string("allocations"))});
    std::vector<std::string> physical;
    for (const auto& n : anchors) {
      if (n.labels.count(perspective_name(Perspective::Physical))) physical.push_back(n.id);
    }
    if (physical.size() == 1) anchor = physical[0];
  }

  IngestResult result;
  for (const auto& s : staged) {
    if (s.total) {
      AttrMap attrs;
      attrs["fiscal_year"] = s.year;
      attrs["amount"] = s.amount;
      store_.add_node({"DeclaredTotal"}, std::move(attrs));
      continue;
    }
    AttrMap attrs;
    attrs["unique_id"] = s.scheme_id + ":" + s.year;
    attrs["scheme_id"] = s.scheme_id;
    attrs["support_nature"] = s.nature;
    attrs["fiscal_year"] = s.year;
    attrs["amount"] = s.amount;
    TantraElement el =
        model_.declare_element(Aspect::What, Perspective::Instantiated, s.name, std::move(attrs));
    store_.add_label(el.id, "SchemeAllocation");
    if (!anchor.empty()) model_.reify(anchor, el.id);
    ++result.rows;
  }
  result.report = consistency_report();
  return result;
}

ConsistencyReport SectorData::consistency_report() const {
  std::map<std::string, Decimal> computed;
  std::set<std::string> schemes;
  for (const auto& n : store_.query(std::string("SchemeAllocation"))) {
    computed[string_attr(n.attrs, "fiscal_year")] =
        computed[string_attr(n.attrs, "fiscal_year")] + decimal_attr(n.attrs, "amount");
    schemes.insert(string_attr(n.attrs, "scheme_id"));
  }
  std::map<std::string, Decimal> declared;
  for (const auto& n : store_.query(std::string("DeclaredTotal"))) {
    declared[string_attr(n.attrs, "fiscal_year")] = decimal_attr(n.attrs, "amount");
  }

  ConsistencyReport report;
  std::set<std::string> years;
  for (const auto& [y, v] : computed) years.insert(y);
  for (const auto& [y, v] : declared) years.insert(y);
  for (const auto& y : years) {
    YearTotals t;
    t.fiscal_year = y;
    auto cit = computed.find(y);
    if (cit != computed.end()) t.computed = cit->second;
    auto dit = declared.find(y);
    if (dit != declared.end()) {
      t.declared = dit->second;
      t.delta = *t.declared - t.computed;
      if (!t.delta->is_zero()) {
        report.anomalies.push_back("fiscal year " + y + ": declared total " +
                                   t.declared->to_string() + " != computed total " +
                                   t.computed.to_string() + " (delta " + t.delta->to_string() +
                                   ")");
      }
    }
    report.years.push_back(std::move(t));
  }

  // Category coverage is checked only once a mapping is installed.
  auto maps = store_.query(std::string("SchemeCategoryMap"));
  if (!maps.empty()) {
    std::set<std::string> mapped;
    for (const auto& n : maps) mapped.insert(string_attr(n.attrs, "scheme_id"));
    for (const auto& s : schemes) {
      if (!mapped.count(s)) {
        report.anomalies.push_back("scheme " + s + " has no support-category mapping");
      }
    }
  }
  return report;
}

std::vector<SummaryRow> SectorData::allocation_summary(const std::string& fiscal_year,
                                                       GroupBy group_by) const {
  auto rows = store_.query(std::string("SchemeAllocation"),
                           {AttrPredicate::eq("fiscal_year", fiscal_year)});
  if (rows.empty()) fail(Err::UnknownYear, "no allocations for fiscal year '" + fiscal_year + "'");

  Decimal total;
  for (const auto& n : rows) total = total + decimal_attr(n.attrs, "amount");

  std::vector<SummaryRow> out;
  if (group_by == GroupBy::Scheme) {
    for (const auto& n : rows) {
      SummaryRow r;
      r.key = string_attr(n.attrs, "scheme_id");
      r.name = string_attr(n.attrs, "display_name");
      r.amount = decimal_attr(n.attrs, "amount");
      out.push_back(std::move(r));
    }
  } else {
    std::map<std::string, std::string> primary;  // scheme_id -> category
    for (const auto& n : store_.query(std::string("SchemeCategoryMap"))) {
      primary[string_attr(n.attrs, "scheme_id")] = string_attr(n.attrs, "primary");
    }
    std::map<std::string, Decimal> buckets;
    for (const auto& n : rows) {
      auto it = primary.find(string_attr(n.attrs, "scheme_id"));
      std::string cat = it == primary.end() || it->second.empty() ? "Uncategorized" : it->second;
      buckets[cat] = buckets[cat] + decimal_attr(n.attrs, "amount");
    }
    for (const auto& [cat, amount] : buckets) {
      SummaryRow r;
      r.key = cat;
      r.name = cat;
      r.amount = amount;
      out.push_back(std::move(r));
    }
  }

  for (auto& r : out) {
    if (total.is_zero()) {
      r.share_pct = Decimal();
      continue;
    }
    // share = amount * 100 / total, exact until the final scale-2 rounding.
    __int128 num = static_cast<__int128>(r.amount.mantissa()) * 100 * pow10_128(total.scale());
    __int128 den = static_cast<__int128>(total.mantissa()) * pow10_128(r.amount.scale());
    r.share_pct = ratio_to_decimal(num, den, 2);
  }

  std::sort(out.begin(), out.end(), [](const SummaryRow& a, const SummaryRow& b) {
    if (a.amount != b.amount) return b.amount < a.amount;
    return a.name < b.name;
  });
  return out;
}

FixtureReport SectorData::load_fixture(const std::filesystem::path& data_dir) {
  if (!store_.query(std::nullopt, {AttrPredicate::exists("fixture_key")}).empty()) {
    fail(Err::ConflictingFixture, "store already holds fixture nodes (fixture_key present)");
  }

  FixtureReport rep;
  std::map<std::string, std::string> keys;  // fixture key -> node id

  auto claim_key = [&](const std::string& key, const std::string& id, const std::string& where) {
    if (key.empty()) fail(Err::ParseError, where + ": empty fixture key");
    if (!keys.emplace(key, id).second) {
      fail(Err::ConflictingFixture, where + ": duplicate fixture key '" + key + "'");
    }
  };
  auto resolve_key = [&](const std::string& key, const std::string& where) -> std::string {
    auto it = keys.find(key);
    if (it == keys.end()) fail(Err::ParseError, where + ": unknown fixture key '" + key + "'");
    return it->second;
  };

  auto load_elements = [&](const cjson& doc, const std::string& file) {
    if (!doc.contains("elements")) return;
    const cjson& elements = doc.at("elements");
    if (!elements.is_array()) fail(Err::ParseError, file + ": 'elements' must be an array");
    // Create first, then reify, so parents may appear in any order.
    for (const auto& e : elements) {
      std::string where = file + " element";
      std::string key = need_string(e, "key", where);
      where += " '" + key + "'";
      Aspect aspect = require_aspect(need_string(e, "aspect", where));
      Perspective perspective = require_perspective(need_string(e, "perspective", where));
      std::string display_name = need_string(e, "display_name", where);
      AttrMap attrs;
      if (e.contains("attrs")) {
        const cjson& a = e.at("attrs");
        if (!a.is_object()) fail(Err::ParseError, where + ": 'attrs' must be an object");
        for (const auto& [name, value] : a.items()) {
          attrs[name] = fixture_attr(value, where + " attr '" + name + "'");
        }
      }
      attrs["fixture_key"] = key;
      TantraElement el = model_.declare_element(aspect, perspective, display_name, std::move(attrs));
      claim_key(key, el.id, where);
      ++rep.elements;
    }
    for (const auto& e : elements) {
      if (!e.contains("parents")) continue;
      std::string key = e.at("key").get<std::string>();
      std::string where = file + " element '" + key + "'";
      const cjson& parents = e.at("parents");
      if (!parents.is_array()) fail(Err::ParseError, where + ": 'parents' must be an array");
      for (const auto& p : parents) {
        if (!p.is_string()) fail(Err::ParseError, where + ": parent keys must be strings");
        model_.reify(resolve_key(p.get<std::string>(), where), keys.at(key));
        ++rep.reifications;
      }
    }
  };

  cjson participants = load_json_file(data_dir / "participants.json");
  load_elements(participants, "participants.json");

  cjson aspects = load_json_file(data_dir / "aspects_map.json");
  load_elements(aspects, "aspects_map.json");

  if (aspects.contains("relators")) {
    const cjson& relators = aspects.at("relators");
    if (!relators.is_array()) fail(Err::ParseError, "aspects_map.json: 'relators' must be an array");
    for (const auto& r : relators) {
      std::string where = "aspects_map.json relator";
      std::string key = need_string(r, "key", where);
      where += " '" + key + "'";
      std::string kind = need_string(r, "kind", where);
      if (!r.contains("mediated") || !r.at("mediated").is_array()) {
        fail(Err::ParseError, where + ": 'mediated' must be an array of fixture keys");
      }
      std::set<std::string> mediated;
      for (const auto& m : r.at("mediated")) {
        if (!m.is_string()) fail(Err::ParseError, where + ": mediated keys must be strings");
        mediated.insert(resolve_key(m.get<std::string>(), where));
      }
      Relator relator = relators_.create_relator(kind, mediated);
      store_.set_attr(relator.id, "fixture_key", key);
      claim_key(key, relator.id, where);
      model_.reify(resolve_key(need_string(r, "parent", where), where), relator.id);
      ++rep.relators;
      ++rep.reifications;

      if (!r.contains("relationships")) continue;
      const cjson& rels = r.at("relationships");
      if (!rels.is_array()) fail(Err::ParseError, where + ": 'relationships' must be an array");
      for (const auto& rel : rels) {
        std::string rwhere = where + " relationship";
        std::string rkey = need_string(rel, "key", rwhere);
        rwhere += " '" + rkey + "'";
        MaterialRelationship mr = relators_.found_relationship(
            relator.id, resolve_key(need_string(rel, "a", rwhere), rwhere),
            resolve_key(need_string(rel, "b", rwhere), rwhere), need_string(rel, "kind", rwhere));
        store_.set_attr(mr.id, "fixture_key", rkey);
        claim_key(rkey, mr.id, rwhere);
        model_.reify(resolve_key(need_string(rel, "parent", rwhere), rwhere), mr.id);
        ++rep.relationships;
        ++rep.reifications;
      }
    }
  }

  if (aspects.contains("categories")) {
    for (const auto& c : aspects.at("categories")) {
      std::string name = need_string(c, "name", "aspects_map.json category");
      std::string where = "aspects_map.json category '" + name + "'";
      if (!is_support_category(name)) {
        fail(Err::InvalidArgument, where + ": not a support category");
      }
      AttrMap attrs;
      attrs["name"] = name;
      attrs["description"] = need_string(c, "description", where);
      attrs["fixture_key"] = "category:" + name;
      std::string id = store_.add_node({"SupportCategory"}, std::move(attrs));
      claim_key("category:" + name, id, where);
      ++rep.categories;
    }
  }

  if (aspects.contains("scheme_categories")) {
    for (const auto& m : aspects.at("scheme_categories")) {
      std::string scheme = need_string(m, "scheme_id", "aspects_map.json scheme_categories");
      std::string where = "aspects_map.json scheme_categories '" + scheme + "'";
      if (!m.contains("categories") || !m.at("categories").is_array()) {
        fail(Err::ParseError, where + ": 'categories' must be an array");
      }
      std::vector<std::string> cats;
      for (const auto& c : m.at("categories")) {
        if (!c.is_string() || !is_support_category(c.get<std::string>())) {
          fail(Err::InvalidArgument, where + ": unknown support category");
        }
        cats.push_back(c.get<std::string>());
      }
      if (cats.empty()) fail(Err::InvalidArgument, where + ": needs at least one category");
      std::string primary = m.contains("primary")
                                ? need_string(m, "primary", where)
                                : cats.front();
      if (std::find(cats.begin(), cats.end(), primary) == cats.end()) {
        fail(Err::InvalidArgument, where + ": primary category not in the category list");
      }
      AttrMap attrs;
      attrs["scheme_id"] = scheme;
      attrs["categories"] = pack_strings(cats);
      attrs["primary"] = primary;
      attrs["fixture_key"] = "schememap:" + scheme;
      std::string id = store_.add_node({"SchemeCategoryMap"}, std::move(attrs));
      claim_key("schememap:" + scheme, id, where);
    }
  }

  if (aspects.contains("goals")) {
    for (const auto& g : aspects.at("goals")) {
      std::string key = need_string(g, "key", "aspects_map.json goal");
      std::string where = "aspects_map.json goal '" + key + "'";
      std::string metric_ref = need_string(g, "metric", where);
      auto kit = keys.find(metric_ref);
      std::string metric =
          kit != keys.end() ? kit->second : normative_.resolve_metric(metric_ref);
      GoalTarget target;
      target.cmp = require_comparator(need_string(g, "comparator", where));
      target.value = Decimal::parse(need_string(g, "target", where));
      if (g.contains("epsilon")) target.epsilon = Decimal::parse(need_string(g, "epsilon", where));
      if (g.contains("unit")) target.unit = need_string(g, "unit", where);
      std::int64_t review = 365;
      if (g.contains("review_period_days")) {
        if (!g.at("review_period_days").is_number_integer()) {
          fail(Err::ParseError, where + ": review_period_days must be an integer");
        }
        review = g.at("review_period_days").get<std::int64_t>();
      }
      Goal goal = normative_.define_goal(require_goal_dimension(need_string(g, "dimension", where)),
                                         need_string(g, "statement", where), metric, target, review);
      store_.set_attr(goal.id, "fixture_key", key);
      claim_key(key, goal.id, where);
      ++rep.goals;
    }
  }

  if (aspects.contains("entropy_policy")) {
    for (const auto& p : aspects.at("entropy_policy")) {
      std::string where = "aspects_map.json entropy_policy";
      std::string aspect = need_string(p, "aspect", where);
      std::string perspective = need_string(p, "perspective", where);
      require_aspect(aspect);
      require_perspective(perspective);
      if (!p.contains("required") || !p.at("required").is_array()) {
        fail(Err::ParseError, where + ": 'required' must be an array");
      }
      std::vector<std::string> required;
      for (const auto& a : p.at("required")) {
        if (!a.is_string()) fail(Err::ParseError, where + ": required attrs must be strings");
        required.push_back(a.get<std::string>());
      }
      std::string key = "entropy:" + aspect + ":" + perspective;
      AttrMap attrs;
      attrs["aspect"] = aspect;
      attrs["perspective"] = perspective;
      attrs["required"] = pack_strings(required);
      attrs["fixture_key"] = key;
      std::string id = store_.add_node({"EntropyPolicy"}, std::move(attrs));
      claim_key(key, id, where + " '" + key + "'");
    }
  }

  cjson reforms = load_json_file(data_dir / "reforms.json");
  load_elements(reforms, "reforms.json");

  // The Theory-of-Change file is one intervention record, imported as-is.
  {
    std::filesystem::path toc_path = data_dir / "toc_price_deficiency.json";
    std::ifstream in(toc_path, std::ios::binary);
    if (!in) fail(Err::IoError, "cannot open " + toc_path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::string id = normative_.import_intervention_json(text);
    store_.set_attr(id, "fixture_key", "toc:price-deficiency");
    claim_key("toc:price-deficiency", id, "toc_price_deficiency.json");
    ++rep.interventions;
  }

  return rep;
}

std::vector<std::string> SectorData::scheme_reach(const std::string& scheme_id) const {
  auto rows = store_.query(std::string("SchemeAllocation"),
                           {AttrPredicate::eq("scheme_id", scheme_id)});
  if (rows.empty()) fail(Err::UnknownScheme, "no ingested allocation for scheme '" + scheme_id + "'");

  // Undirected adjacency over well-formed relator-founded relationships.
  std::map<std::string, std::set<std::string>> adj;
  for (const auto& rel : model_.cell(Aspect::Relationships, Perspective::Instantiated)) {
    std::string a, b;
    int na = 0, nb = 0;
    for (const auto& e : store_.edges_from(rel.id)) {
      if (e.kind != kEndpointEdge) continue;
      auto it = e.attrs.find("role");
      const auto* role = it == e.attrs.end() ? nullptr : std::get_if<std::string>(&it->second);
      if (!role) continue;
      if (*role == "a") {
        a = e.dst;
        ++na;
      } else if (*role == "b") {
        b = e.dst;
        ++nb;
      }
    }
    if (na == 1 && nb == 1 && a != b) {
      adj[a].insert(b);
      adj[b].insert(a);
    }
  }

  std::set<std::string> visited;
  std::queue<std::string> frontier;
  for (const auto& n : rows) {
    if (visited.insert(n.id).second) frontier.push(n.id);
  }
  while (!frontier.empty()) {
    std::string id = frontier.front();
    frontier.pop();
    auto it = adj.find(id);
    if (it == adj.end()) continue;
    for (const auto& next : it->second) {
      if (visited.insert(next).second) frontier.push(next);
    }
  }

  std::vector<std::string> out;
  for (const auto& id : visited) {
    auto el = model_.find_element(id);
    if (el && el->aspect == Aspect::Who) out.push_back(id);
  }
  return out;
}

}  // namespace tantra
