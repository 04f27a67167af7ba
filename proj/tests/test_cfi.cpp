#include <algorithm>
#include <random>
#include <set>

#include "cfi/bijection.hpp"
#include "cfi/cfi.hpp"
#include "csp/csp.hpp"
#include "doctest.h"
#include "linalg/linalg.hpp"
#include "structures/iso.hpp"
#include "templates/templates.hpp"

using namespace ppw;

namespace {

BaseGraph k4() {
  return make_graph({"0", "1", "2", "3"}, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
}

BaseGraph k33() {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < 3; ++i)
    for (int j = 3; j < 6; ++j) e.emplace_back(i, j);
  BaseGraph g = make_graph({"a0", "a1", "a2", "b0", "b1", "b2"}, e);
  g.side = {0, 0, 0, 1, 1, 1};
  return g;
}

int mod(int x, int m) { return ((x % m) + m) % m; }

// Shift vector that is zero except on the edges of v, taken from `local`.
std::vector<int> local_shifts(const CFIStructure& s, int v, const std::vector<int>& local) {
  std::vector<int> out(s.graph.m(), 0);
  for (std::size_t i = 0; i < local.size(); ++i) out[s.graph.incident[v][i]] = local[i];
  return out;
}

// Does f map the gadget at v with charge s onto the gadget with charge s2,
// relation by relation? Uses the generated tuple lists only.
bool maps_gadget(const CFIStructure& S, const EdgeBijection& f, int v, int s, int s2) {
  std::set<std::pair<int, Tuple>> target;
  for (auto& rt : S.gadget_tuples(v, s2)) target.insert(rt);
  for (auto& [rel, t] : S.gadget_tuples(v, s)) {
    Tuple img;
    for (Element x : t) img.push_back(f(x));
    if (!target.count({rel, img})) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("variant parsing") {
  CHECK(parse_variant("nu:3").degree() == 3);
  CHECK(parse_variant("nu-star:3,3").degree() == 7);
  CHECK(parse_variant("maltsev:4").modulus() == 4);
  CHECK(parse_variant("nu-star:4,3").name() == "nu-star:4,3");
  CHECK_THROWS(parse_variant("nu:2"));
  CHECK_THROWS(parse_variant("nu-star:3,4"));
  CHECK_THROWS(parse_variant("maltsev"));
  CHECK_THROWS(parse_variant("foo:3"));
}

TEST_CASE("atom counts and gadget tuples") {
  auto s = untwisted(composite_graph(3, 4), parse_variant("nu:3"));
  CHECK(s.atom_count() == 300);
  CHECK(s.structure.tuple_count() == 40 * 27);
  CHECK(s.structure.vocab[0].arity == 4);
  CHECK_THROWS(untwisted(composite_graph(3, 4), parse_variant("nu:4")));

  // zero tuple at a charge-0 gadget lies in R0
  int v = 5;
  const auto& inc = s.graph.incident[v];
  Tuple zero{s.edge_atom(inc[0], 0), s.edge_atom(inc[1], 0), s.edge_atom(inc[2], 0), s.vertex_atom(v, 0, 0)};
  CHECK(contains_tuple(s.structure.rel("R0"), zero));
  CHECK(s.gadget_relation(v, 0, zero) == 0);
  CHECK(s.gadget_relation(v, 1, zero) == 1);
  // wrong vertex atom value
  Tuple bad = zero;
  bad[3] = s.vertex_atom(v, 0, 1);
  CHECK(s.gadget_relation(v, 0, bad) == -1);

  // every relation tuple belongs to exactly one gadget
  for (std::size_t r = 0; r < 3; ++r)
    for (const auto& t : s.structure.relations[r]) {
      int owner = s.roles[t[3]].vertex;
      CHECK(s.gadget_relation(owner, 0, t) == static_cast<int>(r));
    }

  auto m = twisted(biclique_minus_matching(3), parse_variant("maltsev:3"));
  CHECK(m.atom_count() == 48);
  const auto& i0 = m.graph.incident[0];
  Tuple mz{m.edge_atom(i0[0], 0), m.edge_atom(i0[1], 0), m.edge_atom(i0[2], 0)};
  CHECK(contains_tuple(m.structure.rel("R1"), mz));
  CHECK(!contains_tuple(m.structure.rel("R0"), mz));
  CHECK(m.structure.rel("prec").size() > 0);
  CHECK(contains_tuple(m.structure.rel("prec"), {m.edge_atom(0, 3), m.edge_atom(1, 0)}));
  CHECK(!contains_tuple(m.structure.rel("prec"), {m.edge_atom(1, 0), m.edge_atom(0, 3)}));

  auto star = untwisted(composite_graph(7, 7, CopyShape::BicliqueMinusMatching), parse_variant("nu-star:3,3"));
  CHECK(star.structure.vocab[0].arity == 7 + 18);
  CHECK(star.atom_count() == static_cast<std::size_t>(star.graph.m() * 3 + star.graph.n() * 18 * 3));
}

TEST_CASE("twisting changes only the smallest gadget") {
  auto g = composite_graph(3, 4);
  auto a = untwisted(g, parse_variant("nu:3"));
  auto b = twisted(g, parse_variant("nu:3"));
  auto atoms0 = a.gadget_atoms(0);
  std::set<Element> in0(atoms0.begin(), atoms0.end());
  for (std::size_t r = 0; r < 3; ++r) {
    std::vector<Tuple> da, db;
    std::set_difference(a.structure.relations[r].begin(), a.structure.relations[r].end(),
                        b.structure.relations[r].begin(), b.structure.relations[r].end(), std::back_inserter(da));
    std::set_difference(b.structure.relations[r].begin(), b.structure.relations[r].end(),
                        a.structure.relations[r].begin(), a.structure.relations[r].end(), std::back_inserter(db));
    CHECK(da.size() == 9);
    CHECK(db.size() == 9);
    for (const auto& t : da) CHECK(in0.count(t[3]));
  }
}

TEST_CASE("projection homomorphism into the NU template") {
  auto g = composite_graph(3, 4);
  auto b3 = template_nu(3);
  auto a = untwisted(g, parse_variant("nu:3"));
  CHECK(is_homomorphism(a.structure, b3, projection_map(a)));
  auto t = twisted(g, parse_variant("nu:3"));
  CHECK(!is_homomorphism(t.structure, b3, projection_map(t)));

  auto s = untwisted(composite_graph(7, 7, CopyShape::BicliqueMinusMatching), parse_variant("nu-star:3,3"));
  CHECK(is_homomorphism(s.structure, template_nu_star(3, 3), projection_map(s)));
}

TEST_CASE("small base graphs") {
  auto b3 = template_nu(3);
  for (const auto& g : {k4(), k33()}) {
    auto h = find_homomorphism(untwisted(g, parse_variant("nu:3")).structure, b3);
    REQUIRE(h);
    CHECK(is_homomorphism(untwisted(g, parse_variant("nu:3")).structure, b3, *h));
  }
  CHECK(!find_homomorphism(twisted(k33(), parse_variant("nu:3")).structure, b3).has_value());
  // K4 has odd cycles, so the single charge can be absorbed over Z3
  auto t = twisted(k4(), parse_variant("nu:3"));
  auto h = find_homomorphism(t.structure, b3);
  REQUIRE(h);
  CHECK(is_homomorphism(t.structure, b3, *h));
  CHECK(solve(tseitin_system(k4(), {1, 0, 0, 0}, 3)).has_value());
  CHECK(!solve(tseitin_system(k33(), {1, 0, 0, 0, 0, 0}, 3)).has_value());
}

TEST_CASE("json round trip") {
  auto s = twisted(composite_graph(3, 4), parse_variant("nu:3"));
  auto j = cfi_to_json(s);
  CHECK(j["roles"].size() == 300);
  CHECK(j["roles"][0]["atom"] == s.atom_name(0));
  auto back = cfi_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.structure == s.structure);
  CHECK(back.charged == s.charged);
  j["charged"] = nlohmann::json::array();
  CHECK_THROWS(cfi_from_json(j));
  CHECK(s.atom_name(s.vertex_atom(1, 0, 2)) == "v:" + s.graph.names[1] + ":2");
}

TEST_CASE("cyclic bijections") {
  auto s = untwisted(k4(), parse_variant("nu:3"));
  CHECK(cyclic_bijection(s, std::vector<int>(6, 0)) == identity_bijection(s));
  // shift 1 on the second edge of vertex 0 moves its vertex atoms by weight 1
  auto f = cyclic_bijection(s, local_shifts(s, 0, {0, 1, 0}));
  CHECK(f(s.vertex_atom(0, 0, 0)) == s.vertex_atom(0, 0, 1));
  auto f3 = cyclic_bijection(s, local_shifts(s, 0, {0, 0, 1}));
  CHECK(f3(s.vertex_atom(0, 0, 0)) == s.vertex_atom(0, 0, 2));
  auto f1 = cyclic_bijection(s, local_shifts(s, 0, {1, 0, 0}));
  CHECK(f1(s.vertex_atom(0, 0, 0)) == s.vertex_atom(0, 0, 0));
  CHECK(is_edge_preserving(s, f));
  CHECK(compose(f, inverse(f)) == identity_bijection(s));
  CHECK_THROWS(cyclic_bijection(untwisted(biclique_minus_matching(3), parse_variant("maltsev:3")),
                                std::vector<int>(12, 0)));
}

TEST_CASE("single gadget: charge shift equals minus the shift sum") {
  auto S = untwisted(k4(), parse_variant("nu:3"));
  for (int s = 0; s < 3; ++s)
    for (int code = 0; code < 27; ++code) {
      std::vector<int> c{code % 3, code / 3 % 3, code / 9};
      auto f = cyclic_bijection(S, local_shifts(S, 0, c));
      // classify against S's own charge 0 at vertex 0
      auto cls = classify_gadget_map(f, 0, S, S);
      REQUIRE(cls.delta.has_value());
      int expect = mod(-(c[0] + c[1] + c[2]), 3);
      CHECK(*cls.delta == expect);
      for (int d = 0; d < 3; ++d) CHECK(maps_gadget(S, f, 0, s, mod(s + d, 3)) == (d == expect));
    }
}

TEST_CASE("non-cyclic maps are not gadget isomorphisms") {
  auto S = untwisted(k4(), parse_variant("nu:3"));
  auto f = identity_bijection(S);
  // swap two values on one edge
  int e = S.graph.incident[0][0];
  std::swap(f.image[S.edge_atom(e, 0)], f.image[S.edge_atom(e, 1)]);
  CHECK(!classify_gadget_map(f, 0, S, S).delta.has_value());
  auto g = identity_bijection(S);
  std::swap(g.image[S.edge_atom(0, 0)], g.image[S.vertex_atom(0, 0, 0)]);
  CHECK_THROWS(classify_gadget_map(g, 0, S, S));
}

TEST_CASE("path bijections") {
  auto s = untwisted(composite_graph(3, 4), parse_variant("nu:3"));
  auto id = identity_bijection(s);
  auto p1 = std::vector<int>{0, s.graph.neighbors(0)[0]};
  CHECK(path_bijection(s, p1, 0) == id);
  auto f = path_bijection(s, p1, 1);
  CHECK(*classify_gadget_map(f, p1[0], s, s).delta == 1);
  CHECK(*classify_gadget_map(f, p1[1], s, s).delta == 1);

  auto path = bfs_path(s.graph, 0, 17);
  REQUIRE(path.size() >= 3);
  for (int c = 1; c < 3; ++c) {
    auto g = path_bijection(s, path, c);
    int len = static_cast<int>(path.size()) - 1;
    CHECK(*classify_gadget_map(g, path.front(), s, s).delta == c);
    CHECK(*classify_gadget_map(g, path.back(), s, s).delta == mod(len % 2 ? c : -c, 3));
    for (std::size_t i = 1; i + 1 < path.size(); ++i) CHECK(*classify_gadget_map(g, path[i], s, s).delta == 0);
    std::set<int> on(path.begin(), path.end());
    for (int v = 0; v < s.graph.n(); ++v)
      if (!on.count(v))
        for (Element x : s.gadget_atoms(v)) CHECK(g(x) == x);
    CHECK(compose(g, inverse(g)) == id);
  }
  CHECK_THROWS(path_bijection(s, {0, 0}, 1));
  CHECK_THROWS(path_bijection(s, {0, 30}, 1));
}

TEST_CASE("Z4 permutation classification") {
  std::array<int, 4> pi{0, 1, 2, 3};
  int rot = 0, refl = 0, other = 0;
  do {
    auto c = classify_permutation_z4(pi);
    bool is_rot = false, is_refl = false;
    for (int k = 0; k < 4; ++k) {
      bool r = true, f = true;
      for (int x = 0; x < 4; ++x) {
        r &= pi[x] == (x + k) % 4;
        f &= pi[x] == mod(k - x, 4);
      }
      if (r) CHECK(c == PermClass{PermKind::Rotation, k});
      if (f) CHECK(c == PermClass{PermKind::Reflection, k});
      is_rot |= r;
      is_refl |= f;
    }
    if (!is_rot && !is_refl) CHECK(c.kind == PermKind::Other);
    rot += c.kind == PermKind::Rotation;
    refl += c.kind == PermKind::Reflection;
    other += c.kind == PermKind::Other;
  } while (std::next_permutation(pi.begin(), pi.end()));
  CHECK(rot == 4);
  CHECK(refl == 4);
  CHECK(other == 16);
  CHECK(classify_permutation_z4({2, 1, 0, 3}) == PermClass{PermKind::Reflection, 2});
  CHECK(classify_permutation_z4({1, 0, 2, 3}).kind == PermKind::Other);
}

TEST_CASE("Z4 local isomorphisms follow the shift sum") {
  auto g = biclique_minus_matching(3);
  auto S = untwisted(g, parse_variant("maltsev:3"));
  auto T = twisted(g, parse_variant("maltsev:3"));
  for (int v : {0, 5})
    for (auto mode : {Z4Mode::Rotation, Z4Mode::Reflection})
      for (int code = 0; code < 64; ++code) {
        std::vector<int> c{code % 4, code / 4 % 4, code / 16};
        auto shifts = local_shifts(S, v, c);
        auto f = z4_bijection(S, mode, shifts);
        int sigma = c[0] + c[1] + c[2];
        int need = 2 * (S.charge(v) + T.charge(v)) + (mode == Z4Mode::Reflection ? 1 : 0);
        auto effect = classify_gadget_map(f, v, S, T).effect;
        if (mod(sigma - need, 4) == 0) CHECK(effect == RelationEffect::Preserves);
        else if (mod(sigma - need, 4) == 2) CHECK(effect == RelationEffect::Swaps);
        else CHECK(effect == RelationEffect::Neither);
      }
}

TEST_CASE("mixed Z4 edge permutations never preserve or swap") {
  auto g = biclique_minus_matching(3);
  auto S = untwisted(g, parse_variant("maltsev:3"));
  std::mt19937_64 rng(7);
  int checked = 0;
  while (checked < 1000) {
    auto f = identity_bijection(S);
    bool non_rot = false, non_refl = false;
    for (int e : g.incident[2]) {
      std::array<int, 4> pi{0, 1, 2, 3};
      std::shuffle(pi.begin(), pi.end(), rng);
      auto k = classify_permutation_z4(pi).kind;
      non_rot |= k != PermKind::Rotation;
      non_refl |= k != PermKind::Reflection;
      for (int a = 0; a < 4; ++a) f.image[S.edge_atom(e, a)] = S.edge_atom(e, pi[a]);
    }
    if (!non_rot || !non_refl) continue;
    ++checked;
    CHECK(classify_gadget_map(f, 2, S, S).effect == RelationEffect::Neither);
  }
}

TEST_CASE("Maltsev instances are not isomorphic") {
  auto g = biclique_minus_matching(3);
  auto S = untwisted(g, parse_variant("maltsev:3"));
  auto T = twisted(g, parse_variant("maltsev:3"));
  ClassConstraint cc;
  for (int e = 0; e < g.m(); ++e) {
    std::vector<Element> cls;
    for (int a = 0; a < 4; ++a) cls.push_back(S.edge_atom(e, a));
    cc.classes.emplace_back(cls, cls);
  }
  CHECK(!find_isomorphism(S.structure, T.structure, cc).has_value());
  CHECK(find_isomorphism(S.structure, S.structure, cc).has_value());
  // both uniform modes would need an unsolvable Z4 Tseitin system
  std::vector<int> rot(g.n(), 0), refl(g.n(), 1);
  rot[0] = 2;
  refl[0] = 3;
  CHECK(!solve(tseitin_system(g, rot, 4)).has_value());
  CHECK(!solve(tseitin_system(g, refl, 4)).has_value());
  CHECK(solve(tseitin_system(g, std::vector<int>(g.n(), 1), 4)).has_value());
}

TEST_CASE("safe vertices") {
  auto s = untwisted(composite_graph(3, 4), parse_variant("nu:3"));
  const auto& g = s.graph;
  auto all = safe_vertices(s, std::vector<Element>{});
  CHECK(std::count(all.begin(), all.end(), 1) == g.n());
  // one pebble in copy 0 and one in copy 1
  int a = -1, b = -1;
  for (int v = 0; v < g.n(); ++v) {
    if (g.copy_of[v] == 0 && a < 0) a = v;
    if (g.copy_of[v] == 1 && b < 0) b = v;
  }
  auto safe = safe_vertices(s, std::vector<Element>{s.vertex_atom(a, 0, 1), s.vertex_atom(b, 0, 2)});
  for (int v = 0; v < g.n(); ++v) {
    int i = g.copy_of[v], j = g.copy_of[g.other(g.cross_edge[v], v)];
    CHECK(static_cast<bool>(safe[v]) == (i > 1 && j > 1));
  }
  // a cross-edge pebble dirties both copies; enough of them leave nothing safe
  std::vector<Element> cover;
  for (int v = 0; v < g.n(); ++v) {
    int i = g.copy_of[v], j = g.copy_of[g.other(g.cross_edge[v], v)];
    if ((i == 0 && j == 1) || (i == 2 && j == 3) || (i == 4 && j == 0)) cover.push_back(s.edge_atom(g.cross_edge[v], 0));
  }
  auto none = safe_vertices(s, cover);
  CHECK(std::count(none.begin(), none.end(), 1) == 0);
  CHECK_THROWS(safe_vertices(untwisted(k4(), parse_variant("nu:3")), std::vector<Element>{}));
}

TEST_CASE("pebble-free paths") {
  auto s = untwisted(composite_graph(3, 4), parse_variant("nu:3"));
  const auto& g = s.graph;
  auto clean = pebble_classes(s, {});
  CHECK(pebble_free_path(s, 3, 3, clean)->size() == 1);
  auto p = pebble_free_path(s, 0, 30, clean);
  REQUIRE(p);
  CHECK(p->size() == bfs_path(g, 0, 30).size());
  std::vector<Element> block;
  for (int e : g.incident[0]) block.push_back(s.edge_atom(e, 2));
  CHECK(!pebble_free_path(s, 0, 30, pebble_classes(s, block)));
  // pebbled vertex atoms on the start are allowed, elsewhere they block
  auto own = pebble_classes(s, {s.vertex_atom(0, 0, 0)});
  CHECK(pebble_free_path(s, 0, 30, own));
  PathRules only_cross;
  only_cross.forbidden_first = {1, 2};
  auto q = pebble_free_path(s, 0, 30, clean, only_cross);
  REQUIRE(q);
  CHECK(g.edge_index((*q)[0], (*q)[1]) == g.cross_edge[0]);
  std::vector<Element> mid;
  for (int v : g.neighbors(0)) mid.push_back(s.vertex_atom(v, 0, 0));
  CHECK(!pebble_free_path(s, 0, 30, pebble_classes(s, mid)));
}
