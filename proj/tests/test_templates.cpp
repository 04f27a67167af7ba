#include "doctest.h"
#include "oracles.hpp"
#include "partial_poly/partial_op.hpp"
#include "templates/templates.hpp"

using namespace ppw;

namespace {

std::optional<Element> nu_majority(const std::vector<Element>& col) {
  for (std::size_t c = 0; c < 2; ++c) {
    std::size_t k = std::count(col.begin(), col.end(), col[c]);
    if (k + 1 >= col.size()) return col[c];
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("NU template") {
  auto b = template_nu(3);
  CHECK(b.size() == 3);
  CHECK(b.vocab.size() == 3);
  CHECK(b.vocab[0].arity == 4);
  CHECK(contains_tuple(b.rel("R0"), {0, 0, 0, 0}));
  CHECK(contains_tuple(b.rel("R0"), {1, 1, 1, 0}));
  CHECK_FALSE(contains_tuple(b.rel("R1"), {1, 1, 1, 0}));
  for (int ell : {3, 4, 5}) {
    auto t = template_nu(ell);
    std::size_t want = 1;
    for (int i = 1; i < ell; ++i) want *= 3;
    for (const auto& r : t.relations) CHECK(r.size() == want);
  }
  CHECK_THROWS(template_nu(2));
}

TEST_CASE("NU template is closed under NU") {
  for (int ell : {3, 4}) {
    auto b = template_nu(ell);
    CHECK(is_partial_polymorphism(PartialOp::nu(ell), b));
    for (const auto& r : b.relations) CHECK(oracle::closed_by_rows(r, ell, nu_majority));
  }
}

TEST_CASE("NU star template") {
  auto b = template_nu_star(3, 3);
  CHECK(b.vocab[0].arity == 25);
  CHECK(b.vocab[0].arity <= 7 * (7 / 2 + 2));
  CHECK(contains_tuple(b.rel("R0"), Tuple(25, 0)));
  for (const auto& r : b.relations) CHECK(r.size() == 729);
  CHECK(parse_template("nustar:3,3").arity() == 25);
  CHECK_THROWS(template_nu_star(3, 4));
  // the 3-ary NU closure on a handful of sampled triples
  std::mt19937_64 rng(3);
  const auto& r = b.relations[1];
  for (int k = 0; k < 20000; ++k) {
    std::vector<Tuple> rows{r[rng() % r.size()], r[rng() % r.size()], r[rng() % r.size()]};
    auto t = apply_columnwise(PartialOp::nu(3), rows);
    if (t) CHECK(contains_tuple(r, *t));
  }
}

TEST_CASE("uniform hypergraphs and cliques") {
  auto h = uniform_hypergraph(3, 4);
  CHECK(h.rel("R").size() == 24);
  auto h3 = uniform_hypergraph(3, 3);
  CHECK(contains_tuple(h3.rel("R"), {1, 2, 3}));
  CHECK_FALSE(contains_tuple(h3.rel("R"), {1, 1, 2}));
  for (int m = 2; m <= 5; ++m) {
    auto k = clique_template(m);
    auto u = uniform_hypergraph(2, m);
    CHECK(k.universe == u.universe);
    CHECK(k.relations == u.relations);
    CHECK(k.rel("E").size() == static_cast<std::size_t>(m * (m - 1)));
  }
  CHECK(uniform_hypergraph(4, 3).rel("R").empty());
  CHECK_THROWS(uniform_hypergraph(3, 1));
}

TEST_CASE("parity template has a Maltsev polymorphism") {
  auto p3 = parity_template(3);
  CHECK(contains_tuple(p3.rel("R0"), {0, 0, 0}));
  CHECK(contains_tuple(p3.rel("R0"), {1, 1, 0}));
  for (int r : {3, 4, 5}) {
    auto p = parity_template(r);
    CHECK(p.rel("R0").size() == (std::size_t{1} << (r - 1)));
    CHECK(p.rel("R1").size() == (std::size_t{1} << (r - 1)));
    auto minus = [](const std::vector<Element>& c) -> std::optional<Element> {
      return (c[0] + c[1] + c[2]) % 2;
    };
    for (const auto& rel : p.relations) CHECK(oracle::closed_by_rows(rel, 3, minus));
    CHECK(is_partial_polymorphism(PartialOp::maltsev(), p));
  }
  CHECK_THROWS(parity_template(2));
}

TEST_CASE("template spec parsing") {
  CHECK(parse_template("nu:4").arity() == 5);
  CHECK(parse_template("hypergraph:3,2").name() == "hypergraph:3,2");
  CHECK(build_template(parse_template("clique:3")) == clique_template(3));
  CHECK_THROWS(parse_template("nu:2"));
  CHECK_THROWS(parse_template("nu"));
  CHECK_THROWS(parse_template("nu:x"));
  CHECK_THROWS(parse_template("cube:3"));
  CHECK_THROWS(parse_template("hypergraph:3"));
}
