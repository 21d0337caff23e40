#include <random>

#include "doctest.h"
#include "tantra/metamodel.hpp"

using namespace tantra;

namespace {

AttrMap uid(const std::string& u) { return {{"unique_id", AttrValue(u)}}; }

}  // namespace

TEST_SUITE("metamodel") {
  TEST_CASE("aspect and perspective names round trip") {
    for (Aspect a : kAspects) {
      CHECK(parse_aspect(aspect_name(a)) == a);
      CHECK(require_aspect(aspect_name(a)) == a);
    }
    for (Perspective p : kPerspectives) {
      CHECK(parse_perspective(perspective_name(p)) == p);
      CHECK(require_perspective(perspective_name(p)) == p);
    }
    CHECK_FALSE(parse_aspect("Bogus").has_value());
    CHECK_THROWS_AS(require_aspect("Bogus"), TantraError);
    CHECK_THROWS_AS(require_perspective("bogus"), TantraError);
    CHECK(level(Perspective::Contextual) == 0);
    CHECK(level(Perspective::Instantiated) == 4);
  }

  TEST_CASE("declare_element stamps one aspect and one perspective") {
    GraphStore g;
    TantraModel m(g);
    TantraElement e = m.declare_element(Aspect::Who, Perspective::Contextual, "Everyone");
    CHECK(e.aspect == Aspect::Who);
    CHECK(e.perspective == Perspective::Contextual);
    CHECK(e.display_name == "Everyone");
    const NodeRecord& n = g.node(e.id);
    CHECK(n.labels.count("Who") == 1);
    CHECK(n.labels.count("Contextual") == 1);
    CHECK(std::get<std::string>(n.attrs.at("display_name")) == "Everyone");
    CHECK(m.is_element(e.id));
    CHECK(m.element(e.id).display_name == "Everyone");
    CHECK_THROWS_AS(m.declare_element(Aspect::Who, Perspective::Contextual, ""), TantraError);
    CHECK_THROWS_AS(m.element("n99999999"), TantraError);
  }

  TEST_CASE("instantiated elements need a non-empty unique_id") {
    GraphStore g;
    TantraModel m(g);
    CHECK_THROWS_AS(m.declare_element(Aspect::Who, Perspective::Instantiated, "X"), TantraError);
    CHECK_THROWS_AS(m.declare_element(Aspect::Who, Perspective::Instantiated, "X", uid("")),
                    TantraError);
    TantraElement e = m.declare_element(Aspect::Who, Perspective::Instantiated, "X", uid("w:1"));
    CHECK(std::get<std::string>(g.node(e.id).attrs.at("unique_id")) == "w:1");
  }

  TEST_CASE("reify enforces aspect, adjacency and direction") {
    GraphStore g;
    TantraModel m(g);
    auto ctx = m.declare_element(Aspect::What, Perspective::Contextual, "ctx");
    auto con = m.declare_element(Aspect::What, Perspective::Conceptual, "con");
    auto log = m.declare_element(Aspect::What, Perspective::Logical, "log");
    auto who = m.declare_element(Aspect::Who, Perspective::Conceptual, "who");

    std::string edge = m.reify(ctx.id, con.id);
    CHECK(g.edge(edge).kind == kReifiesEdge);
    // Identical link is idempotent.
    CHECK(m.reify(ctx.id, con.id) == edge);
    CHECK(g.edge_count() == 1);

    CHECK_THROWS_WITH_AS(m.reify(ctx.id, log.id), doctest::Contains("LevelSkip"), TantraError);
    CHECK_THROWS_WITH_AS(m.reify(con.id, ctx.id), doctest::Contains("LevelReversal"), TantraError);
    CHECK_THROWS_WITH_AS(m.reify(ctx.id, who.id), doctest::Contains("AspectMismatch"), TantraError);
    CHECK_THROWS_AS(m.reify(ctx.id, "n999"), TantraError);

    CHECK(m.children(ctx.id) == std::vector<std::string>{con.id});
    CHECK(m.parents(con.id) == std::vector<std::string>{ctx.id});
  }

  TEST_CASE("cell and all_elements ignore non-element nodes") {
    GraphStore g;
    TantraModel m(g);
    m.declare_element(Aspect::Why, Perspective::Conceptual, "a");
    m.declare_element(Aspect::Why, Perspective::Conceptual, "b");
    g.add_node({"Plain"});
    CHECK(m.cell(Aspect::Why, Perspective::Conceptual).size() == 2);
    CHECK(m.cell(Aspect::Why, Perspective::Contextual).empty());
    CHECK(m.all_elements().size() == 2);
  }

  TEST_CASE("classify_labels needs exactly one aspect and one perspective") {
    CHECK(TantraModel::classify_labels({"Who", "Contextual"}) ==
          std::pair(Aspect::Who, Perspective::Contextual));
    CHECK(TantraModel::classify_labels({"Who", "Contextual", "Extra"}) ==
          std::pair(Aspect::Who, Perspective::Contextual));
    CHECK_FALSE(TantraModel::classify_labels({"Who"}).has_value());
    CHECK_FALSE(TantraModel::classify_labels({"Contextual"}).has_value());
    CHECK_FALSE(TantraModel::classify_labels({"Who", "Where", "Contextual"}).has_value());
    CHECK_FALSE(TantraModel::classify_labels({"Who", "Contextual", "Conceptual"}).has_value());
    CHECK_FALSE(TantraModel::classify_labels({"Plain"}).has_value());
  }

  TEST_CASE("validate reports each malformation with its kind") {
    GraphStore g;
    TantraModel m(g);

    SUBCASE("cell ambiguity") {
      g.add_node({"Who", "Where", "Contextual"}, {{"display_name", AttrValue(std::string("x"))}});
      auto v = m.validate();
      REQUIRE(v.size() == 1);
      CHECK(v[0].kind == "CellAmbiguity");
    }
    SUBCASE("missing display name") {
      g.add_node({"Who", "Contextual"});
      auto v = m.validate();
      REQUIRE(v.size() == 1);
      CHECK(v[0].kind == "MissingDisplayName");
    }
    SUBCASE("duplicate unique ids") {
      m.declare_element(Aspect::Who, Perspective::Instantiated, "a", uid("same"));
      m.declare_element(Aspect::Who, Perspective::Instantiated, "b", uid("same"));
      auto v = m.validate();
      // Two orphan findings (no chain) plus one duplicate pair finding.
      int dups = 0;
      for (const auto& x : v) dups += x.kind == "DuplicateUniqueId";
      CHECK(dups == 1);
    }
    SUBCASE("hand-built reifies edge between wrong levels") {
      auto ctx = m.declare_element(Aspect::Who, Perspective::Contextual, "ctx");
      auto log = m.declare_element(Aspect::Who, Perspective::Logical, "log");
      g.add_edge(ctx.id, log.id, kReifiesEdge);
      auto v = m.validate();
      REQUIRE(v.size() == 1);
      CHECK(v[0].kind == "LevelSkip");
    }
    SUBCASE("reifies edge touching a non-element") {
      auto ctx = m.declare_element(Aspect::Who, Perspective::Contextual, "ctx");
      std::string plain = g.add_node({"Plain"});
      g.add_edge(ctx.id, plain, kReifiesEdge);
      auto v = m.validate();
      REQUIRE(v.size() == 1);
      CHECK(v[0].kind == "BadReifyEndpoint");
    }
    SUBCASE("orphan instance lacks a chain to contextual") {
      auto ctx = m.declare_element(Aspect::How, Perspective::Contextual, "ctx");
      auto con = m.declare_element(Aspect::How, Perspective::Conceptual, "con");
      auto log = m.declare_element(Aspect::How, Perspective::Logical, "log");
      auto phy = m.declare_element(Aspect::How, Perspective::Physical, "phy");
      auto ins = m.declare_element(Aspect::How, Perspective::Instantiated, "ins", uid("h:1"));
      m.reify(con.id, log.id);
      m.reify(log.id, phy.id);
      m.reify(phy.id, ins.id);
      // Chain stops at Conceptual: orphan.
      auto v = m.validate();
      REQUIRE(v.size() == 1);
      CHECK(v[0].kind == "OrphanInstance");
      CHECK(v[0].subject == ins.id);
      // Completing the chain clears it.
      m.reify(ctx.id, con.id);
      CHECK(m.validate().empty());
    }
  }

  TEST_CASE("random valid construction never yields violations") {
    // Property: a model built only through declare_element/reify with a
    // full chain per instance is always well-formed.
    std::mt19937_64 rng(2024);
    GraphStore g;
    TantraModel m(g);
    std::map<std::pair<int, int>, std::vector<std::string>> by_cell;
    for (Aspect a : kAspects) {
      auto root = m.declare_element(a, Perspective::Contextual, std::string(aspect_name(a)) + " root");
      by_cell[{static_cast<int>(a), 0}].push_back(root.id);
    }
    int uid_counter = 0;
    for (int i = 0; i < 400; ++i) {
      Aspect a = kAspects[rng() % kAspects.size()];
      int lvl = 1 + static_cast<int>(rng() % 4);
      // Parents must exist one level up; walk down creating as needed.
      for (int k = 1; k <= lvl; ++k) {
        auto& ups = by_cell[{static_cast<int>(a), k - 1}];
        auto& here = by_cell[{static_cast<int>(a), k}];
        if (!here.empty() && rng() % 3 != 0) continue;
        Perspective p = kPerspectives[static_cast<std::size_t>(k)];
        AttrMap attrs;
        if (p == Perspective::Instantiated) {
          attrs["unique_id"] = "u:" + std::to_string(++uid_counter);
        }
        auto el = m.declare_element(a, p, "el" + std::to_string(i) + "." + std::to_string(k), attrs);
        m.reify(ups[rng() % ups.size()], el.id);
        here.push_back(el.id);
      }
    }
    CHECK(m.validate().empty());
    CHECK(m.all_elements().size() == g.node_count());
  }
}
