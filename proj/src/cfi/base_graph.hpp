#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace ppw {

// Vertices are 0..n-1 and their index order is the graph's vertex order.
// incident[v] is the ordered tuple of edges at v.
struct BaseGraph {
  int degree = 0;
  std::vector<std::string> names;
  std::vector<std::pair<int, int>> edges;  // (low, high), lexicographic
  std::vector<std::vector<int>> incident;
  std::vector<int> side;  // bipartition class, empty when not recorded

  // Composite graphs only: copy index per vertex (0-based) and the edge
  // leading into another copy.
  int copies = 0;
  std::vector<int> copy_of;
  std::vector<int> cross_edge;

  int n() const { return static_cast<int>(names.size()); }
  int m() const { return static_cast<int>(edges.size()); }
  int other(int e, int v) const { return edges[e].first == v ? edges[e].second : edges[e].first; }
  int edge_index(int u, int v) const;
  int position(int v, int e) const;
  std::vector<int> neighbors(int v) const;
  bool has_copies() const { return copies > 0; }

  // Throws std::invalid_argument on a broken invariant.
  void validate() const;
};

// Builds a graph from an edge list with incident edges ordered by neighbor.
BaseGraph make_graph(std::vector<std::string> names, std::vector<std::pair<int, int>> edges);

// d even: torus over d/2 cycles of the given lengths. d odd: two copies of
// the (d-1)/2-dimensional torus joined by the matching between copies.
BaseGraph toroidal_grid(int d, const std::vector<int>& sides);

BaseGraph biclique_minus_matching(int k);

enum class CopyShape { Torus, BicliqueMinusMatching };

// n+1 copies of a (d-1)-regular bipartite graph with n vertices per side,
// plus the cross edges v_ij -- w_ji. The torus shape needs 2n to be a
// product of admissible side lengths; the biclique shape needs n = d.
BaseGraph composite_graph(int d, int n, CopyShape shape = CopyShape::Torus);

int edge_connectivity(const BaseGraph& g);
bool is_connected(const BaseGraph& g);
bool is_bipartite(const BaseGraph& g);

nlohmann::json graph_to_json(const BaseGraph& g);
BaseGraph graph_from_json(const nlohmann::json& j);

}  // namespace ppw
