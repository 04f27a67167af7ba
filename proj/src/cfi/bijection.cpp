#include "cfi/bijection.hpp"

#include <algorithm>
#include <stdexcept>

namespace ppw {

namespace {

int mod(int x, int m) { return ((x % m) + m) % m; }

bool same_class(const CFIStructure& s, Element x, Element y) {
  const auto& a = s.roles[x];
  const auto& b = s.roles[y];
  if (a.kind != b.kind) return false;
  if (a.kind == AtomKind::Edge) return a.edge == b.edge;
  return a.vertex == b.vertex && a.cls == b.cls;
}

}  // namespace

EdgeBijection identity_bijection(const CFIStructure& s) {
  EdgeBijection f;
  f.image.resize(s.atom_count());
  for (std::size_t x = 0; x < f.image.size(); ++x) f.image[x] = static_cast<Element>(x);
  return f;
}

EdgeBijection compose(const EdgeBijection& first, const EdgeBijection& second) {
  if (first.image.size() != second.image.size()) throw std::invalid_argument("bijections over different universes");
  EdgeBijection h;
  h.image.resize(first.image.size());
  for (std::size_t x = 0; x < h.image.size(); ++x) h.image[x] = second.image.at(first.image[x]);
  return h;
}

EdgeBijection inverse(const EdgeBijection& f) {
  EdgeBijection g;
  g.image.assign(f.image.size(), 0);
  std::vector<char> hit(f.image.size(), 0);
  for (std::size_t x = 0; x < f.image.size(); ++x) {
    Element y = f.image[x];
    if (y >= f.image.size() || hit[y]) throw std::invalid_argument("not a bijection");
    hit[y] = 1;
    g.image[y] = static_cast<Element>(x);
  }
  return g;
}

bool is_edge_preserving(const CFIStructure& s, const EdgeBijection& f) {
  if (f.image.size() != s.atom_count()) return false;
  std::vector<char> hit(f.image.size(), 0);
  for (std::size_t x = 0; x < f.image.size(); ++x) {
    Element y = f.image[x];
    if (y >= f.image.size() || hit[y]) return false;
    hit[y] = 1;
    if (!same_class(s, static_cast<Element>(x), y)) return false;
  }
  return true;
}

ElementMap to_element_map(const EdgeBijection& f) {
  ElementMap m;
  for (std::size_t x = 0; x < f.image.size(); ++x) m[static_cast<Element>(x)] = f.image[x];
  return m;
}

EdgeBijection cyclic_bijection(const CFIStructure& s, const std::vector<int>& shifts) {
  if (s.variant.kind == VariantKind::Maltsev) throw std::invalid_argument("cyclic bijections need an NU variant");
  if (static_cast<int>(shifts.size()) != s.graph.m()) throw std::invalid_argument("one shift per edge");
  EdgeBijection f;
  f.image.resize(s.atom_count());
  for (int e = 0; e < s.graph.m(); ++e)
    for (int a = 0; a < 3; ++a) f.image[s.edge_atom(e, a)] = s.edge_atom(e, mod(a + shifts[e], 3));
  for (int v = 0; v < s.graph.n(); ++v) {
    const auto& inc = s.graph.incident[v];
    for (int j = 0; j < s.classes(); ++j) {
      int shift = 0;
      for (std::size_t i = 0; i < inc.size(); ++i) shift += s.weights[j][i] * shifts[inc[i]];
      for (int a = 0; a < 3; ++a) f.image[s.vertex_atom(v, j, a)] = s.vertex_atom(v, j, mod(a + shift, 3));
    }
  }
  return f;
}

EdgeBijection z4_bijection(const CFIStructure& s, Z4Mode mode, const std::vector<int>& shifts) {
  if (s.variant.kind != VariantKind::Maltsev) throw std::invalid_argument("z4 bijections need the maltsev variant");
  if (static_cast<int>(shifts.size()) != s.graph.m()) throw std::invalid_argument("one shift per edge");
  EdgeBijection f;
  f.image.resize(s.atom_count());
  for (int e = 0; e < s.graph.m(); ++e)
    for (int a = 0; a < 4; ++a) {
      int b = mode == Z4Mode::Rotation ? a + shifts[e] : shifts[e] - a;
      f.image[s.edge_atom(e, a)] = s.edge_atom(e, mod(b, 4));
    }
  return f;
}

std::vector<int> path_shifts(const CFIStructure& s, const std::vector<int>& path, int amount) {
  const auto& g = s.graph;
  std::vector<int> out(g.m(), 0);
  std::vector<char> seen(g.n(), 0);
  for (int v : path) {
    if (v < 0 || v >= g.n() || seen[v]) throw std::invalid_argument("not a simple path");
    seen[v] = 1;
  }
  int m = s.modulus();
  int sign = 1;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    int e = g.edge_index(path[i], path[i + 1]);
    if (e < 0) throw std::invalid_argument("not a path: missing edge");
    out[e] = mod(sign * amount, m);
    sign = -sign;
  }
  return out;
}

EdgeBijection path_bijection(const CFIStructure& s, const std::vector<int>& path, int c) {
  // a shift sum of x at a gadget realises the charge shift -x
  return cyclic_bijection(s, path_shifts(s, path, -c));
}

PermClass classify_permutation_z4(const std::array<int, 4>& pi) {
  bool rot = true, refl = true;
  for (int x = 0; x < 4; ++x) {
    if (mod(pi[x] - x, 4) != mod(pi[0], 4)) rot = false;
    if (mod(pi[x] + x, 4) != mod(pi[0], 4)) refl = false;
  }
  if (rot) return {PermKind::Rotation, mod(pi[0], 4)};
  if (refl) return {PermKind::Reflection, mod(pi[0], 4)};
  return {PermKind::Other, 0};
}

std::array<int, 4> edge_permutation(const CFIStructure& s, const EdgeBijection& f, int e) {
  if (s.modulus() != 4) throw std::invalid_argument("edge permutations over Z4 need the maltsev variant");
  std::array<int, 4> pi{};
  for (int a = 0; a < 4; ++a) {
    Element y = f(s.edge_atom(e, a));
    if (s.roles[y].kind != AtomKind::Edge || s.roles[y].edge != e) throw std::invalid_argument("not edge-preserving");
    pi[a] = s.roles[y].value;
  }
  return pi;
}

const char* effect_name(RelationEffect r) {
  switch (r) {
    case RelationEffect::Preserves: return "preserves";
    case RelationEffect::Swaps: return "swaps";
    case RelationEffect::Neither: return "neither";
  }
  return "";
}

GadgetClass classify_gadget_map(const EdgeBijection& f, int v, const CFIStructure& S, const CFIStructure& T) {
  if (S.variant.kind != T.variant.kind || S.atom_count() != T.atom_count() || f.image.size() != S.atom_count())
    throw std::invalid_argument("structures do not share a universe");
  for (Element x : S.gadget_atoms(v))
    if (!same_class(S, x, f(x))) throw std::invalid_argument("map is not edge-preserving at the gadget");
  GadgetClass out;
  int s = S.charge(v);
  auto tuples = S.gadget_tuples(v, s);
  Tuple img;
  if (S.variant.kind == VariantKind::Maltsev) {
    bool all_same = true, all_other = true;
    for (const auto& [rel, t] : tuples) {
      img.resize(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) img[i] = f(t[i]);
      int q = T.gadget_relation(v, T.charge(v), img);
      if (q < 0) return out;
      if (q == rel) all_other = false;
      else all_same = false;
    }
    out.effect = all_same ? RelationEffect::Preserves : all_other ? RelationEffect::Swaps : RelationEffect::Neither;
    return out;
  }
  std::optional<int> delta;
  for (const auto& [rel, t] : tuples) {
    img.resize(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) img[i] = f(t[i]);
    int q = S.gadget_relation(v, 0, img);
    if (q < 0) return out;
    int d = mod(rel - q - s, 3);
    if (delta && *delta != d) return out;
    delta = d;
  }
  out.delta = delta;
  return out;
}

bool is_local_isomorphism(const EdgeBijection& f, int v, const CFIStructure& S, const CFIStructure& T) {
  auto c = classify_gadget_map(f, v, S, T);
  if (S.variant.kind == VariantKind::Maltsev) return c.effect == RelationEffect::Preserves;
  return c.delta && *c.delta == mod(T.charge(v) - S.charge(v), 3);
}

bool PebbleClasses::gadget_touched(const CFIStructure& s, int v) const {
  if (vertex_any(v)) return true;
  for (int e : s.graph.incident[v])
    if (edge[e]) return true;
  return false;
}

PebbleClasses pebble_classes(const CFIStructure& s, const std::vector<Element>& atoms) {
  PebbleClasses p;
  p.edge.assign(s.graph.m(), 0);
  p.classes = s.classes();
  p.vertex.assign(static_cast<std::size_t>(s.graph.n()) * p.classes, 0);
  p.vertex_hit.assign(s.graph.n(), 0);
  for (Element x : atoms) {
    const auto& r = s.roles.at(x);
    if (r.kind == AtomKind::Edge) {
      p.edge[r.edge] = 1;
    } else {
      p.vertex[r.vertex * p.classes + r.cls] = 1;
      p.vertex_hit[r.vertex] = 1;
    }
  }
  return p;
}

std::vector<char> safe_vertices(const CFIStructure& s, const PebbleClasses& p) {
  const auto& g = s.graph;
  if (!g.has_copies()) throw std::invalid_argument("safe vertices need a composite base graph");
  std::vector<char> dirty(g.copies, 0);
  for (int e = 0; e < g.m(); ++e)
    if (p.edge[e]) dirty[g.copy_of[g.edges[e].first]] = dirty[g.copy_of[g.edges[e].second]] = 1;
  for (int v = 0; v < g.n(); ++v)
    if (!dirty[g.copy_of[v]] && p.vertex_any(v)) dirty[g.copy_of[v]] = 1;
  std::vector<char> safe(g.n(), 0);
  for (int v = 0; v < g.n(); ++v) {
    int across = g.other(g.cross_edge[v], v);
    safe[v] = !dirty[g.copy_of[v]] && !dirty[g.copy_of[across]];
  }
  return safe;
}

std::vector<char> safe_vertices(const CFIStructure& s, const std::vector<Element>& atoms) {
  return safe_vertices(s, pebble_classes(s, atoms));
}

std::vector<int> pebble_free_reach(const CFIStructure& s, int from, const PebbleClasses& p, const PathRules& rules) {
  const auto& g = s.graph;
  auto usable = [&](int y) {
    if (!rules.avoid_vertex.empty() && rules.avoid_vertex[y]) return false;
    return !p.vertex_any(y);
  };
  std::vector<std::pair<int, int>> steps;  // (neighbor, position)
  auto sorted_steps = [&](int x) -> const std::vector<std::pair<int, int>>& {
    steps.clear();
    for (std::size_t i = 0; i < g.incident[x].size(); ++i) steps.emplace_back(g.other(g.incident[x][i], x), static_cast<int>(i));
    std::sort(steps.begin(), steps.end());
    return steps;
  };
  std::vector<int> parent(g.n(), -1);
  parent[from] = from;
  std::vector<int> queue;
  queue.reserve(g.n());
  for (auto [y, pos] : sorted_steps(from)) {
    int e = g.incident[from][pos];
    if (rules.forbidden_first.count(pos) || p.edge[e] || parent[y] != -1 || !usable(y)) continue;
    parent[y] = from;
    queue.push_back(y);
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int x = queue[head];
    for (auto [y, pos] : sorted_steps(x)) {
      int e = g.incident[x][pos];
      if (p.edge[e] || parent[y] != -1 || !usable(y)) continue;
      parent[y] = x;
      queue.push_back(y);
    }
  }
  return parent;
}

std::vector<int> path_from_parents(const std::vector<int>& parent, int from, int to) {
  if (parent[to] == -1) return {};
  std::vector<int> path{to};
  while (path.back() != from) path.push_back(parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

std::optional<std::vector<int>> pebble_free_path(const CFIStructure& s, int from, int to, const PebbleClasses& p,
                                                 const PathRules& rules) {
  if (from == to) return std::vector<int>{from};
  auto parent = pebble_free_reach(s, from, p, rules);
  if (parent[to] == -1) return std::nullopt;
  return path_from_parents(parent, from, to);
}

}  // namespace ppw
