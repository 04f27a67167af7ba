#include "structures/iso.hpp"

#include <stdexcept>

namespace ppw {

std::optional<ElementMap> find_isomorphism(const Structure& a, const Structure& b,
                                           const std::optional<ClassConstraint>& classes,
                                           const SearchConfig& cfg) {
  if (!same_vocabulary(a, b) || a.size() != b.size()) return std::nullopt;
  for (std::size_t i = 0; i < a.relations.size(); ++i)
    if (a.relations[i].size() != b.relations[i].size()) return std::nullopt;

  SearchOptions opts;
  opts.injective = true;
  if (classes) {
    for (const auto& [from, to] : classes->classes) {
      if (from.size() != to.size()) return std::nullopt;
      for (auto x : from) {
        auto& d = opts.domains[x];
        d.insert(d.end(), to.begin(), to.end());
      }
    }
  }
  auto res = search_homomorphism(a, b, cfg, opts);
  if (res.status == SearchStatus::BudgetExhausted)
    throw std::runtime_error("isomorphism search exhausted its node budget");
  if (res.status == SearchStatus::Absent) return std::nullopt;
  // Injective, universe sizes and tuple counts equal: the homomorphism maps
  // each relation onto its counterpart, so it is an isomorphism.
  return res.map;
}

Structure compute_core(const Structure& a, const SearchConfig& cfg) {
  Structure cur = a;
  bool shrunk = true;
  while (shrunk && cur.size() > 1) {
    shrunk = false;
    for (auto x : cur.universe) {
      SearchOptions opts;
      std::vector<Element> rest;
      for (auto y : cur.universe)
        if (y != x) rest.push_back(y);
      for (auto y : cur.universe) opts.domains[y] = rest;
      auto res = search_homomorphism(cur, cur, cfg, opts);
      if (res.status == SearchStatus::BudgetExhausted)
        throw std::runtime_error("core search exhausted its node budget");
      if (res.status == SearchStatus::Found) {
        std::vector<Element> image;
        for (const auto& [from, to] : res.map) image.push_back(to);
        cur = induced(cur, image);
        shrunk = true;
        break;
      }
    }
  }
  return cur;
}

}  // namespace ppw
