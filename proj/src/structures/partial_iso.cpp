#include "structures/partial_iso.hpp"

#include <algorithm>

namespace ppw {

namespace {

int position(const Structure& s, Element e) {
  if (e < s.universe.size() && s.universe[e] == e) return static_cast<int>(e);
  auto it = std::lower_bound(s.universe.begin(), s.universe.end(), e);
  if (it == s.universe.end() || *it != e) return -1;
  return static_cast<int>(it - s.universe.begin());
}

}  // namespace

PartialIsoChecker::PartialIsoChecker(const Structure& a, const Structure& b)
    : a_(index(a)), b_(index(b)) {}

PartialIsoChecker::Side PartialIsoChecker::index(const Structure& s) {
  Side side{&s, std::vector<std::vector<Side::Entry>>(s.size())};
  for (std::size_t r = 0; r < s.relations.size(); ++r)
    for (std::size_t t = 0; t < s.relations[r].size(); ++t) {
      const auto& tup = s.relations[r][t];
      Tuple d = tup;
      std::sort(d.begin(), d.end());
      int distinct = static_cast<int>(std::unique(d.begin(), d.end()) - d.begin());
      for (std::size_t p = 0; p < tup.size(); ++p) {
        // one entry per tuple and element
        if (std::find(tup.begin(), tup.begin() + p, tup[p]) != tup.begin() + p) continue;
        side.incident[position(s, tup[p])].push_back({static_cast<int>(r), static_cast<int>(t), distinct});
      }
    }
  for (auto& inc : side.incident)
    std::stable_sort(inc.begin(), inc.end(), [](const Side::Entry& x, const Side::Entry& y) { return x.distinct < y.distinct; });
  return side;
}

bool PartialIsoChecker::preserved(const Side& from, const Side& to,
                                  const std::vector<std::pair<Element, Element>>& f) {
  auto image = [&](Element x, Element& y) {
    for (const auto& [p, q] : f)
      if (p == x) {
        y = q;
        return true;
      }
    return false;
  };
  Tuple img;
  for (const auto& [x, y] : f) {
    (void)y;
    int pos = position(*from.s, x);
    for (const auto& [r, t, distinct] : from.incident[pos]) {
      // a tuple with more distinct elements than the domain cannot lie inside
      // it; entries are sorted by that count
      if (distinct > static_cast<int>(f.size())) break;
      const auto& tup = from.s->relations[r][t];
      img.resize(tup.size());
      bool inside = true;
      for (std::size_t i = 0; i < tup.size() && inside; ++i) inside = image(tup[i], img[i]);
      if (inside && !contains_tuple(to.s->relations[r], img)) return false;
    }
  }
  return true;
}

bool PartialIsoChecker::check(const std::vector<std::pair<Element, Element>>& pairs) const {
  thread_local std::vector<std::pair<Element, Element>> f, g;
  f.clear();
  g.clear();
  for (const auto& [x, y] : pairs) {
    if (position(*a_.s, x) < 0 || position(*b_.s, y) < 0) return false;
    bool dup = false;
    for (const auto& [p, q] : f) {
      if ((p == x) != (q == y)) return false;
      if (p == x) dup = true;
    }
    if (!dup) {
      f.emplace_back(x, y);
      g.emplace_back(y, x);
    }
  }
  return preserved(a_, b_, f) && preserved(b_, a_, g);
}

}  // namespace ppw
