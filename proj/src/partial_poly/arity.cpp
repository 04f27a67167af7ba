#include "partial_poly/arity.hpp"

#include <stdexcept>

#include "partial_poly/partial_op.hpp"

namespace ppw {

void validate_division(const IntervalDivision& div, int r) {
  if (div.empty()) throw std::invalid_argument("empty division");
  int next = 1;
  for (auto [i, j] : div) {
    if (i != next || j < i) throw std::invalid_argument("intervals must be consecutive and nonempty");
    next = j + 1;
  }
  if (next != r + 1) throw std::invalid_argument("division does not cover [1, r]");
}

IntervalDivision default_division(int r, int ell) {
  if (ell < 1 || r < ell) throw std::invalid_argument("default division needs r >= ell");
  IntervalDivision div;
  int base = r / ell, extra = r % ell, start = 1;
  for (int n = 0; n < ell; ++n) {
    int len = base + (n < extra ? 1 : 0);
    div.emplace_back(start, start + len - 1);
    start += len;
  }
  return div;
}

IntervalDivision division_from_json(const nlohmann::json& j) {
  IntervalDivision div;
  for (const auto& p : j) div.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
  return div;
}

nlohmann::json division_to_json(const IntervalDivision& div) {
  auto j = nlohmann::json::array();
  for (auto [i, k] : div) j.push_back({i, k});
  return j;
}

TupleSet project_relation(const TupleSet& r, Interval iv, int arity) {
  auto [i, j] = iv;
  if (i < 1 || j < i || j > arity) throw std::invalid_argument("projection interval out of range");
  TupleSet out;
  for (const auto& t : r) {
    if (static_cast<int>(t.size()) != arity) throw std::invalid_argument("tuple of wrong length");
    Tuple p(t.begin(), t.begin() + (i - 1));
    p.insert(p.end(), t.begin() + j, t.end());
    out.push_back(std::move(p));
  }
  sort_unique(out);
  return out;
}

Structure star_operator(const Structure& c, const IntervalDivision& div) {
  if (div.empty()) throw std::invalid_argument("empty division");
  int r = div.back().second;
  validate_division(div, r);
  Structure s;
  s.universe = c.universe;
  s.labels = c.labels;
  for (std::size_t k = 0; k < c.vocab.size(); ++k) {
    const auto& sym = c.vocab[k];
    if (sym.arity > r) throw std::invalid_argument("relation arity exceeds the division");
    for (std::size_t n = 0; n < div.size(); ++n) {
      auto [i, j] = div[n];
      std::string name = sym.name + "#" + std::to_string(n + 1);
      if (sym.arity < i) {
        s.vocab.push_back({name, sym.arity});
        s.relations.emplace_back();
      } else {
        int hi = std::min(j, sym.arity);
        s.vocab.push_back({name, sym.arity - (hi - i + 1)});
        s.relations.push_back(project_relation(c.relations[k], {i, hi}, sym.arity));
      }
    }
  }
  return s;
}

Structure full_reduction(const Structure& a, int ell, const IntervalDivision& div) {
  return star_operator(close_structure(PartialOp::nu(ell), a), div);
}

bool verify_arity_trick(const TupleSet& r, int arity, const std::vector<Element>& domain, int ell,
                        const IntervalDivision& div) {
  validate_division(div, arity);
  if (static_cast<int>(div.size()) != ell)
    throw std::invalid_argument("division must have ell intervals");
  if (!relation_closed(PartialOp::nu(ell), r))
    throw std::invalid_argument("relation is not closed under the near-unanimity operation");
  std::vector<TupleSet> proj;
  for (auto iv : div) proj.push_back(project_relation(r, iv, arity));
  if (domain.empty()) return r.empty();
  std::vector<std::size_t> pos(arity, 0);
  Tuple b(arity);
  while (true) {
    for (int k = 0; k < arity; ++k) b[k] = domain[pos[k]];
    bool all = true;
    for (std::size_t n = 0; n < div.size() && all; ++n) {
      auto [i, j] = div[n];
      Tuple p(b.begin(), b.begin() + (i - 1));
      p.insert(p.end(), b.begin() + j, b.end());
      all = contains_tuple(proj[n], p);
    }
    if (all != contains_tuple(r, b)) return false;
    int k = arity - 1;
    while (k >= 0 && ++pos[k] == domain.size()) pos[k--] = 0;
    if (k < 0) break;
  }
  return true;
}

}  // namespace ppw
