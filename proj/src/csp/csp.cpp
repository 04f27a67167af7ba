#include "csp/csp.hpp"

namespace ppw {

std::optional<ElementMap> find_homomorphism(const Structure& a, const Structure& b,
                                            const HomSearchConfig& cfg) {
  auto res = search_homomorphism(a, b, cfg);
  if (res.status == SearchStatus::BudgetExhausted) throw BudgetExhausted(res.nodes);
  if (res.status == SearchStatus::Absent) return std::nullopt;
  return res.map;
}

bool csp_member(const Structure& a, const Structure& tmpl, const HomSearchConfig& cfg) {
  return find_homomorphism(a, tmpl, cfg).has_value();
}

Structure hypergraph_to_graph(const Structure& a) {
  if (a.vocab.size() != 1) throw std::invalid_argument("expected a single relation symbol");
  Structure g;
  g.vocab = {{"E", 2}};
  g.universe = a.universe;
  g.labels = a.labels;
  g.relations.resize(1);
  for (const auto& t : a.relations[0])
    for (std::size_t i = 0; i < t.size(); ++i)
      for (std::size_t j = 0; j < t.size(); ++j)
        if (i != j) g.relations[0].push_back({t[i], t[j]});
  g.normalize();
  return g;
}

}  // namespace ppw
