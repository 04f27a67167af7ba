#pragma once

#include <string>
#include <vector>

#include "cfi/base_graph.hpp"
#include "json.hpp"
#include "structures/structure.hpp"

namespace ppw {

enum class VariantKind { NU, NUStar, Maltsev };

struct Variant {
  VariantKind kind = VariantKind::NU;
  int ell = 3;  // NU, NUStar
  int r = 3;    // NUStar
  int k = 3;    // Maltsev

  int modulus() const { return kind == VariantKind::Maltsev ? 4 : 3; }
  int degree() const;
  std::string name() const;
};

// "nu:L", "nu-star:R,L", "maltsev:K"
Variant parse_variant(const std::string& text);

enum class AtomKind { Edge, Vertex };

struct AtomRole {
  AtomKind kind = AtomKind::Edge;
  int edge = -1;    // Edge
  int vertex = -1;  // Vertex
  int cls = 0;      // Vertex: index of the weight vector (always 0 for NU)
  int value = 0;
};

// Element ids: edge atoms (e,a) first at e*m + a, then vertex atoms
// (v, j, a) at base + (v*classes + j)*3 + a. The Maltsev variant has edge
// atoms only.
struct CFIStructure {
  Structure structure;
  Variant variant;
  BaseGraph graph;
  std::vector<char> charged;              // U, per vertex
  std::vector<AtomRole> roles;            // per element
  std::vector<std::vector<int>> weights;  // per vertex-atom class, over positions of ē(v)

  int modulus() const { return variant.modulus(); }
  int classes() const { return static_cast<int>(weights.size()); }
  std::size_t atom_count() const { return roles.size(); }
  Element edge_atom(int e, int a) const { return static_cast<Element>(e * modulus() + a); }
  Element vertex_atom(int v, int j, int a) const {
    return static_cast<Element>(graph.m() * modulus() + (v * classes() + j) * 3 + a);
  }
  int charge(int v) const { return charged[v]; }
  std::string atom_name(Element x) const;
  // A_v: edge atoms of E(v) in ē(v) order, then v's vertex atoms
  std::vector<Element> gadget_atoms(int v) const;
  // Gadget vertices whose A_v contains x (two for edge atoms, one otherwise).
  std::vector<int> gadgets_of(Element x) const;

  // Relation index of a tuple in the gadget at v with charge s, or -1 when it
  // is not a gadget tuple there.
  int gadget_relation(int v, int s, const Tuple& t) const;
  // All gadget tuples at v for charge s, paired with their relation index.
  std::vector<std::pair<int, Tuple>> gadget_tuples(int v, int s) const;
};

CFIStructure build_cfi(const BaseGraph& g, const std::vector<int>& charged_vertices, const Variant& v);
CFIStructure untwisted(const BaseGraph& g, const Variant& v);
// Charge on the smallest vertex.
CFIStructure twisted(const BaseGraph& g, const Variant& v);

// h(e,a) = a and h(v,..,a) = a, as a map into the matching template.
ElementMap projection_map(const CFIStructure& s);

nlohmann::json cfi_to_json(const CFIStructure& s);
CFIStructure cfi_from_json(const nlohmann::json& j);

}  // namespace ppw
