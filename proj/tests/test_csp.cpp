#include "csp/csp.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "templates/templates.hpp"

using namespace ppw;

TEST_CASE("basic homomorphisms") {
  auto k3 = oracle::clique(3);
  CHECK(find_homomorphism(k3, k3));
  Structure a = empty_structure({{"R", 3}}, 3);
  a.relations[0].push_back({0, 1, 2});
  auto h3 = uniform_hypergraph(3, 3);
  auto h = find_homomorphism(a, h3);
  REQUIRE(h);
  CHECK(is_homomorphism(a, h3, *h));
  CHECK(csp_member(h3, h3));
  CHECK_FALSE(csp_member(oracle::clique(4), oracle::clique(3)));
  CHECK_THROWS(find_homomorphism(k3, h3));
  HomSearchConfig tight;
  tight.node_budget = 3;
  tight.propagation = Propagation::None;
  CHECK_THROWS_AS(find_homomorphism(oracle::clique(6), oracle::clique(5), tight), BudgetExhausted);
}

TEST_CASE("hypergraph to graph") {
  Structure a = empty_structure({{"R", 3}}, 4);
  auto g0 = hypergraph_to_graph(a);
  CHECK(g0.rel("E").empty());
  a.relations[0].push_back({1, 2, 3});
  auto g = hypergraph_to_graph(a);
  CHECK(g.rel("E").size() == 6);
  CHECK(contains_tuple(g.rel("E"), {3, 1}));
  Structure b = empty_structure({{"R", 3}}, 3);
  b.relations[0].push_back({1, 1, 2});
  CHECK(contains_tuple(hypergraph_to_graph(b).rel("E"), {1, 1}));
  Structure two = empty_structure({{"R", 3}, {"S", 3}}, 2);
  CHECK_THROWS(hypergraph_to_graph(two));
}

TEST_CASE("hypergraph colouring reduces to graph colouring") {
  std::mt19937_64 rng(17);
  for (auto [r, m] : {std::pair{3, 2}, {3, 3}, {4, 3}}) {
    auto h = uniform_hypergraph(r, m);
    auto k = clique_template(m);
    int yes = 0;
    for (int round = 0; round < 100; ++round) {
      std::size_t n = 2 + rng() % 5;
      Structure a = empty_structure({{"R", r}}, n);
      int tuples = static_cast<int>(rng() % 6);
      for (int t = 0; t < tuples; ++t) {
        Tuple tup(r);
        for (auto& e : tup) e = static_cast<Element>(rng() % n);
        a.relations[0].push_back(tup);
      }
      a.normalize();
      bool direct = csp_member(a, h);
      CHECK(direct == csp_member(hypergraph_to_graph(a), k));
      yes += direct;
    }
    if (m >= r) CHECK(yes > 0);
    CHECK(yes < 100);
  }
}

TEST_CASE("search agrees with map enumeration on all small graphs") {
  std::vector<Structure> sources, targets;
  for (std::size_t n = 1; n <= 4; ++n)
    for (auto& g : oracle::all_graphs(n, false)) sources.push_back(g);
  for (std::size_t n = 1; n <= 3; ++n)
    for (auto& g : oracle::all_graphs(n, true)) targets.push_back(g);
  int mismatches = 0;
  for (const auto& a : sources)
    for (const auto& b : targets) {
      auto h = find_homomorphism(a, b);
      if (h.has_value() != oracle::hom_exists(a, b)) ++mismatches;
      if (h && !is_homomorphism(a, b, *h)) ++mismatches;
    }
  CHECK(mismatches == 0);
}

TEST_CASE("homomorphisms compose") {
  std::mt19937_64 rng(23);
  Vocabulary v{{"E", 2}, {"P", 1}};
  int composed = 0;
  for (int round = 0; round < 200; ++round) {
    auto a = oracle::random_structure(rng, v, 4, 0.2);
    auto b = oracle::random_structure(rng, v, 3, 0.4);
    auto c = oracle::random_structure(rng, v, 3, 0.5);
    auto f = find_homomorphism(a, b);
    auto g = find_homomorphism(b, c);
    if (f && g) {
      ++composed;
      CHECK(is_homomorphism(a, c, compose(*f, *g)));
    }
  }
  CHECK(composed > 0);
}
