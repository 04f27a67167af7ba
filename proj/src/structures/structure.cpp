#include "structures/structure.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace ppw {

void sort_unique(TupleSet& ts) {
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
}

bool contains_tuple(const TupleSet& ts, const Tuple& t) {
  return std::binary_search(ts.begin(), ts.end(), t);
}

void Structure::normalize() {
  std::sort(universe.begin(), universe.end());
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
  relations.resize(vocab.size());
  for (auto& r : relations) sort_unique(r);
}

void Structure::validate() const {
  if (relations.size() != vocab.size())
    throw std::invalid_argument("relation count does not match vocabulary");
  std::set<std::string> names;
  for (const auto& s : vocab) {
    // nullary symbols only arise from projecting away every coordinate
    if (s.arity < 0) throw std::invalid_argument("arity of " + s.name + " is negative");
    if (!names.insert(s.name).second) throw std::invalid_argument("duplicate symbol " + s.name);
  }
  if (!std::is_sorted(universe.begin(), universe.end()) ||
      std::adjacent_find(universe.begin(), universe.end()) != universe.end())
    throw std::invalid_argument("universe not sorted/unique");
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    for (const auto& t : relations[i]) {
      if (static_cast<int>(t.size()) != vocab[i].arity)
        throw std::invalid_argument("tuple of wrong length in " + vocab[i].name);
      for (auto e : t)
        if (!contains(e))
          throw std::invalid_argument("tuple element outside universe in " + vocab[i].name);
    }
  }
}

int Structure::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < vocab.size(); ++i)
    if (vocab[i].name == name) return static_cast<int>(i);
  return -1;
}

const TupleSet& Structure::rel(std::string_view name) const {
  int i = index_of(name);
  if (i < 0) throw std::out_of_range("no relation " + std::string(name));
  return relations[i];
}

TupleSet& Structure::rel(std::string_view name) {
  int i = index_of(name);
  if (i < 0) throw std::out_of_range("no relation " + std::string(name));
  return relations[i];
}

bool Structure::contains(Element e) const {
  return std::binary_search(universe.begin(), universe.end(), e);
}

std::string Structure::label(Element e) const {
  auto it = labels.find(e);
  return it == labels.end() ? std::to_string(e) : it->second;
}

std::size_t Structure::tuple_count() const {
  std::size_t n = 0;
  for (const auto& r : relations) n += r.size();
  return n;
}

Structure empty_structure(const Vocabulary& vocab, std::size_t n) {
  Structure s;
  s.vocab = vocab;
  s.universe.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.universe[i] = static_cast<Element>(i);
  s.relations.resize(vocab.size());
  return s;
}

bool same_vocabulary(const Structure& a, const Structure& b) { return a.vocab == b.vocab; }

void require_same_vocabulary(const Structure& a, const Structure& b) {
  if (!same_vocabulary(a, b)) throw std::invalid_argument("vocabulary mismatch");
}

bool leq(const Structure& a, const Structure& b) {
  require_same_vocabulary(a, b);
  if (a.universe != b.universe) return false;
  for (std::size_t i = 0; i < a.relations.size(); ++i)
    if (!std::includes(b.relations[i].begin(), b.relations[i].end(), a.relations[i].begin(),
                       a.relations[i].end()))
      return false;
  return true;
}

Structure union_of(const Structure& a, const Structure& b) {
  require_same_vocabulary(a, b);
  Structure u;
  u.vocab = a.vocab;
  std::set_union(a.universe.begin(), a.universe.end(), b.universe.begin(), b.universe.end(),
                 std::back_inserter(u.universe));
  u.relations.resize(a.vocab.size());
  for (std::size_t i = 0; i < a.relations.size(); ++i)
    std::set_union(a.relations[i].begin(), a.relations[i].end(), b.relations[i].begin(),
                   b.relations[i].end(), std::back_inserter(u.relations[i]));
  u.labels = b.labels;
  for (const auto& [k, v] : a.labels) u.labels[k] = v;
  return u;
}

Structure induced(const Structure& a, const std::vector<Element>& subset) {
  std::vector<Element> s = subset;
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  for (auto e : s)
    if (!a.contains(e)) throw std::invalid_argument("induced: subset not inside universe");
  Structure r;
  r.vocab = a.vocab;
  r.universe = s;
  r.relations.resize(a.vocab.size());
  auto in = [&](Element e) { return std::binary_search(s.begin(), s.end(), e); };
  for (std::size_t i = 0; i < a.relations.size(); ++i)
    for (const auto& t : a.relations[i])
      if (std::all_of(t.begin(), t.end(), in)) r.relations[i].push_back(t);
  for (auto e : s) {
    auto it = a.labels.find(e);
    if (it != a.labels.end()) r.labels.insert(*it);
  }
  return r;
}

std::optional<ElementMap> inverse(const ElementMap& f) {
  ElementMap g;
  for (const auto& [x, y] : f)
    if (!g.emplace(y, x).second) return std::nullopt;
  return g;
}

ElementMap compose(const ElementMap& first, const ElementMap& second) {
  ElementMap h;
  for (const auto& [x, y] : first) {
    auto it = second.find(y);
    if (it != second.end()) h[x] = it->second;
  }
  return h;
}

namespace {

// Every tuple of `from` living inside dom f maps to a tuple of `to`.
bool forward_preserved(const Structure& from, const Structure& to, const ElementMap& f) {
  for (std::size_t i = 0; i < from.relations.size(); ++i) {
    Tuple img;
    for (const auto& t : from.relations[i]) {
      img.clear();
      bool inside = true;
      for (auto e : t) {
        auto it = f.find(e);
        if (it == f.end()) {
          inside = false;
          break;
        }
        img.push_back(it->second);
      }
      if (inside && !contains_tuple(to.relations[i], img)) return false;
    }
  }
  return true;
}

}  // namespace

bool is_partial_isomorphism(const Structure& a, const Structure& b, const ElementMap& f) {
  if (!same_vocabulary(a, b)) return false;
  for (const auto& [x, y] : f)
    if (!a.contains(x) || !b.contains(y)) return false;
  auto g = inverse(f);
  if (!g) return false;
  return forward_preserved(a, b, f) && forward_preserved(b, a, *g);
}

bool is_homomorphism(const Structure& a, const Structure& b, const ElementMap& h) {
  if (!same_vocabulary(a, b)) return false;
  for (auto x : a.universe) {
    auto it = h.find(x);
    if (it == h.end() || !b.contains(it->second)) return false;
  }
  return forward_preserved(a, b, h);
}

}  // namespace ppw
