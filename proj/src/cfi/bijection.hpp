#pragma once

#include <array>
#include <optional>
#include <set>
#include <vector>

#include "cfi/cfi.hpp"

namespace ppw {

// Total self-map of a CFI universe, as the image of every element id.
struct EdgeBijection {
  std::vector<Element> image;

  Element operator()(Element x) const { return image[x]; }
  bool operator==(const EdgeBijection&) const = default;
};

EdgeBijection identity_bijection(const CFIStructure& s);
// Apply `first`, then `second`.
EdgeBijection compose(const EdgeBijection& first, const EdgeBijection& second);
EdgeBijection inverse(const EdgeBijection& f);
// Permutation mapping every edge class and every vertex-atom class to itself.
bool is_edge_preserving(const CFIStructure& s, const EdgeBijection& f);
ElementMap to_element_map(const EdgeBijection& f);

// NU variants: (e,a) -> (e,a+c_e), vertex atoms of class j at v shift by
// the weighted sum of the shifts on ē(v).
EdgeBijection cyclic_bijection(const CFIStructure& s, const std::vector<int>& shifts);

enum class Z4Mode { Rotation, Reflection };
// Maltsev variant: rotation x -> x+c_e, reflection x -> c_e-x.
EdgeBijection z4_bijection(const CFIStructure& s, Z4Mode mode, const std::vector<int>& shifts);

// Per-edge shifts along a simple path (vertex sequence): +amount on the first
// edge, then alternating signs. Throws if the sequence is not a simple path.
std::vector<int> path_shifts(const CFIStructure& s, const std::vector<int>& path, int amount);
// NU variants: identity off the path, charge shift +c at the first vertex,
// +c or -c at the last (odd or even length), automorphisms in between.
EdgeBijection path_bijection(const CFIStructure& s, const std::vector<int>& path, int c);

enum class PermKind { Rotation, Reflection, Other };
struct PermClass {
  PermKind kind = PermKind::Other;
  int c = 0;
  bool operator==(const PermClass&) const = default;
};
PermClass classify_permutation_z4(const std::array<int, 4>& pi);
// Restriction of f to the class {e} x Z4.
std::array<int, 4> edge_permutation(const CFIStructure& s, const EdgeBijection& f, int e);

enum class RelationEffect { Preserves, Swaps, Neither };
const char* effect_name(RelationEffect r);

struct GadgetClass {
  // NU variants: f is an isomorphism A(v,s) -> A(v,s+delta).
  std::optional<int> delta;
  // Maltsev variant: effect on (R0(v), R1(v)) between the gadgets of S and T.
  RelationEffect effect = RelationEffect::Neither;
};
// Decided by mapping every gadget tuple of S at v. Throws if f does not map
// the atoms of A_v onto A_v class-wise.
GadgetClass classify_gadget_map(const EdgeBijection& f, int v, const CFIStructure& S, const CFIStructure& T);
// Shorthand: f restricted to A_v is an isomorphism of the gadgets of S and T.
bool is_local_isomorphism(const EdgeBijection& f, int v, const CFIStructure& S, const CFIStructure& T);

// Which edges and vertex-atom classes carry a pebble.
struct PebbleClasses {
  std::vector<char> edge;
  int classes = 0;
  std::vector<char> vertex;      // [v * classes + j]
  std::vector<char> vertex_hit;  // per vertex, any class pebbled

  bool held(int v, int j) const { return vertex[v * classes + j]; }
  bool vertex_any(int v) const { return !vertex_hit.empty() && vertex_hit[v]; }
  bool gadget_touched(const CFIStructure& s, int v) const;
};
PebbleClasses pebble_classes(const CFIStructure& s, const std::vector<Element>& atoms);

// u is safe when every gadget of its copy and of the copy across its cross
// edge is pebble-free.
std::vector<char> safe_vertices(const CFIStructure& s, const PebbleClasses& p);
std::vector<char> safe_vertices(const CFIStructure& s, const std::vector<Element>& atoms);

struct PathRules {
  std::set<int> forbidden_first;  // positions in ē(from)
  std::vector<char> avoid_vertex;
};
// Shortest path over pebble-free edges through vertices without pebbled
// vertex atoms; `from` is exempt. Neighbors are tried in vertex order.
std::optional<std::vector<int>> pebble_free_path(const CFIStructure& s, int from, int to,
                                                 const PebbleClasses& p, const PathRules& rules = {});
// BFS tree of the same search: parent per vertex (-1 unreached, from is its
// own parent).
std::vector<int> pebble_free_reach(const CFIStructure& s, int from, const PebbleClasses& p,
                                   const PathRules& rules = {});
std::vector<int> path_from_parents(const std::vector<int>& parent, int from, int to);

}  // namespace ppw
