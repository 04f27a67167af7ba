#pragma once

#include <optional>
#include <stdexcept>

#include "structures/search.hpp"
#include "structures/structure.hpp"

namespace ppw {

using HomSearchConfig = SearchConfig;

struct BudgetExhausted : std::runtime_error {
  explicit BudgetExhausted(std::uint64_t nodes)
      : std::runtime_error("homomorphism search exhausted its budget after " +
                           std::to_string(nodes) + " nodes"),
        nodes(nodes) {}
  std::uint64_t nodes;
};

// Throws BudgetExhausted rather than reporting absence.
std::optional<ElementMap> find_homomorphism(const Structure& a, const Structure& b,
                                            const HomSearchConfig& cfg = {});
bool csp_member(const Structure& a, const Structure& tmpl, const HomSearchConfig& cfg = {});

// Graph on the same universe with an edge (a_i, a_j) for every tuple of the
// single relation and every pair of distinct positions.
Structure hypergraph_to_graph(const Structure& a);

}  // namespace ppw
