#include <random>

#include "doctest.h"
#include "linalg/linalg.hpp"

using namespace ppw;

namespace {

BaseGraph cycle_graph(int n) {
  std::vector<std::string> names;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    names.push_back(std::to_string(i));
    edges.emplace_back(i, (i + 1) % n);
  }
  BaseGraph g = make_graph(names, edges);
  for (int i = 0; i < n; ++i) g.side.push_back(i % 2);
  return g;
}

bool brute_solvable(const LinearSystem& sys) {
  int n = static_cast<int>(sys.vars.size());
  std::vector<int> x(n, 0);
  while (true) {
    if (sys.satisfied_by(x)) return true;
    int j = n - 1;
    while (j >= 0 && ++x[j] == sys.modulus) x[j--] = 0;
    if (j < 0) return false;
  }
}

MatrixModM from_rows(const std::vector<std::vector<int>>& rows) {
  MatrixModM a(3, static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) a.at(i, j) = rows[i][j];
  return a;
}

}  // namespace

TEST_CASE("near-unanimity property of matrices") {
  CHECK(has_nu_property(from_rows({{2, 2}, {2, 2}, {2, 2}})));
  auto id = from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  CHECK(has_nu_property(id));
  CHECK(*nu_image(id) == std::vector<int>{0, 0, 0});
  CHECK(id.times({0, 1, 2}) == std::vector<int>{0, 1, 2});
  auto bad = from_rows({{0, 1}, {1, 1}, {2, 1}});
  CHECK_FALSE(has_nu_property(bad));
  CHECK_FALSE(nu_image(bad));
  CHECK(id.encode() == "100|010|001");
}

TEST_CASE("separator sets") {
  auto s = build_separator_set(3, 7);
  CHECK(s.q == 3);
  CHECK(s.p == 1);
  CHECK(s.vectors.size() == 18);
  CHECK(s.blocks[0] == std::vector<int>{0, 1, 2, 3});
  CHECK(s.blocks[1] == std::vector<int>{4, 5, 6});
  auto t = build_separator_set(4, 9);
  CHECK(t.q == 3);
  CHECK(t.p == 0);
  CHECK(t.vectors.size() == 18);
  for (int ell = 3; ell <= 6; ++ell)
    for (int w = ell; w <= 15; ++w) {
      auto u = build_separator_set(ell, w);
      CHECK(u.vectors.size() == separator_count(ell, w));
      std::vector<int> owner(w, -1);
      for (std::size_t b = 0; b < u.blocks.size(); ++b)
        for (int j : u.blocks[b]) {
          CHECK(owner[j] == -1);
          owner[j] = static_cast<int>(b);
        }
      CHECK(std::count(owner.begin(), owner.end(), -1) == 0);
      for (const auto& v : u.vectors) {
        std::vector<int> nz;
        for (int j = 0; j < w; ++j)
          if (v[j]) nz.push_back(j);
        REQUIRE(nz.size() == 2);
        CHECK(owner[nz[0]] == owner[nz[1]]);
        CHECK(v[nz[0]] == 1);
      }
    }
  CHECK_THROWS(build_separator_set(4, 3));
}

TEST_CASE("small lemma sweeps") {
  auto base = verify_lemma_base();
  CHECK(base.checked == 19683);
  CHECK(base.applicable > 0);
  CHECK(base.ok());
  auto sep = verify_lemma_separating(3);
  CHECK(sep.checked == 21 * 21 * 21);
  CHECK(sep.applicable == base.applicable);
  CHECK(sep.ok());
  auto rb = verify_lemma_row_back(3);
  CHECK(rb.ok());
  auto pairs = verify_lemma_pairs(3, 3);
  CHECK(pairs.checked == 9261);
  CHECK(pairs.ok());
  CHECK(pairs.to_json()["violations"].empty());
  CHECK_THROWS(verify_lemma_separating(5));
  CHECK_THROWS(verify_lemma_pairs(3, 2));
}

TEST_CASE("solve agrees with exhaustive assignment search") {
  std::mt19937_64 rng(11);
  for (int m : {2, 3, 4})
    for (int round = 0; round < 300; ++round) {
      LinearSystem sys;
      sys.modulus = m;
      int n = 1 + static_cast<int>(rng() % 8);
      int eqs = 1 + static_cast<int>(rng() % 8);
      for (int v = 0; v < n; ++v) sys.vars.push_back("x" + std::to_string(v));
      for (int i = 0; i < eqs; ++i) {
        LinearSystem::Equation eq;
        for (int v = 0; v < n; ++v)
          if (rng() % 3 == 0) eq.coeffs[v] = static_cast<int>(rng() % m);
        eq.rhs = static_cast<int>(rng() % m);
        sys.equations.push_back(eq);
      }
      auto x = solve(sys);
      CHECK(x.has_value() == brute_solvable(sys));
      if (x) CHECK(sys.satisfied_by(*x));
    }
  LinearSystem bad;
  bad.modulus = 5;
  CHECK_THROWS(solve(bad));
}

TEST_CASE("Tseitin systems on small graphs") {
  auto c4 = cycle_graph(4);
  auto zero = tseitin_system(c4, {0, 0, 0, 0}, 4);
  CHECK(zero.equations.size() == 4);
  CHECK(*solve(zero) == std::vector<int>{0, 0, 0, 0});
  auto ones = tseitin_system(c4, {1, 1, 1, 1}, 4);
  CHECK(ones.satisfied_by({1, 0, 0, 1}));
  CHECK(solve(ones));
  CHECK_THROWS(tseitin_system(c4, {0, 0, 4, 0}, 4));

  auto g3 = biclique_minus_matching(3);
  std::vector<int> charges(g3.n(), 1);
  CHECK(solve(tseitin_system(g3, charges, 4)));
  for (int v = 0; v < g3.n(); ++v) {
    auto c = charges;
    c[v] = 3;
    CHECK_FALSE(solve(tseitin_system(g3, c, 4)));
  }
  // Z3 analogue with the twist on one vertex
  std::vector<int> z3(g3.n(), 0);
  z3[0] = 1;
  CHECK_FALSE(solve(tseitin_system(g3, z3, 3)));
}

TEST_CASE("perfect matchings") {
  auto k2 = make_graph({"a", "b"}, {{0, 1}});
  k2.side = {0, 1};
  CHECK(perfect_matching(k2) == std::vector<int>{0});
  auto c6 = cycle_graph(6);
  auto pm = perfect_matching(c6);
  CHECK(pm.size() == 3);
  for (auto g : {c6, biclique_minus_matching(3), composite_graph(3, 3)}) {
    auto m = perfect_matching(g);
    std::vector<int> cover(g.n(), 0);
    for (int e : m) ++cover[g.edges[e].first], ++cover[g.edges[e].second];
    CHECK(std::count(cover.begin(), cover.end(), 1) == g.n());
  }
  std::vector<std::string> tri{"a", "b", "c"};
  CHECK_THROWS(perfect_matching(make_graph(tri, {{0, 1}, {1, 2}, {0, 2}})));
}

TEST_CASE("bfs path prefers low vertices") {
  auto c6 = cycle_graph(6);
  CHECK(bfs_path(c6, 0, 3) == std::vector<int>{0, 1, 2, 3});
  std::vector<char> blocked(6, 0);
  blocked[1] = 1;
  CHECK(bfs_path(c6, 0, 3, blocked) == std::vector<int>{0, 5, 4, 3});
  blocked[5] = 1;
  CHECK(bfs_path(c6, 0, 3, blocked).empty());
}

TEST_CASE("near solution leaves only one equation open") {
  std::mt19937_64 rng(5);
  std::vector<BaseGraph> graphs{cycle_graph(4), cycle_graph(6), biclique_minus_matching(3),
                                composite_graph(3, 3), toroidal_grid(4, {4, 4})};
  auto c4 = cycle_graph(4);
  auto x0 = near_solution(c4, {2, 0, 0, 0}, 4, 0);
  CHECK(x0 == std::vector<int>{0, 0, 0, 0});
  auto d1 = tseitin_defects(c4, {2, 0, 0, 0}, 4, near_solution(c4, {2, 0, 0, 0}, 4, 1));
  CHECK(d1 == std::vector<int>{0, 2, 0, 0});
  for (const auto& g : graphs)
    for (int m : {3, 4})
      for (int round = 0; round < 20; ++round) {
        int a = static_cast<int>(rng() % m);
        int special = static_cast<int>(rng() % g.n());
        int vp = static_cast<int>(rng() % g.n());
        std::vector<int> c(g.n(), a);
        c[special] = static_cast<int>(rng() % m);
        auto x = near_solution(g, c, m, vp);
        auto d = tseitin_defects(g, c, m, x);
        for (int v = 0; v < g.n(); ++v)
          if (v != vp) CHECK(d[v] == 0);
        int diff = ((c[special] - a) % m + m) % m;
        CHECK((d[vp] == diff || d[vp] == (m - diff) % m));
      }
  std::vector<int> two(c4.n(), 0);
  two[0] = 1;
  two[1] = 2;
  CHECK_THROWS(near_solution(c4, two, 3, 0));
}
