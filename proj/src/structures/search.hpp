#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "structures/structure.hpp"

namespace ppw {

enum class VarOrder { SmallestDomain, InputOrder };
enum class Propagation { None, ArcConsistency };

struct SearchConfig {
  VarOrder ordering = VarOrder::SmallestDomain;
  Propagation propagation = Propagation::ArcConsistency;
  std::uint64_t node_budget = 10'000'000;
};

enum class SearchStatus { Found, Absent, BudgetExhausted };

struct SearchOptions {
  bool injective = false;
  // Elements listed here may only take the given values.
  std::map<Element, std::vector<Element>> domains;
};

struct SearchResult {
  SearchStatus status = SearchStatus::Absent;
  ElementMap map;
  std::uint64_t nodes = 0;
};

// Backtracking homomorphism search A -> B over table constraints, one per
// tuple of A. Complete within the node budget.
SearchResult search_homomorphism(const Structure& a, const Structure& b, const SearchConfig& cfg,
                                 const SearchOptions& opts = {});

}  // namespace ppw
