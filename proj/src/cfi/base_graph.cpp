#include "cfi/base_graph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <stdexcept>

namespace ppw {

int BaseGraph::edge_index(int u, int v) const {
  auto key = std::minmax(u, v);
  auto it = std::lower_bound(edges.begin(), edges.end(), std::pair<int, int>(key.first, key.second));
  if (it == edges.end() || *it != std::pair<int, int>(key.first, key.second)) return -1;
  return static_cast<int>(it - edges.begin());
}

int BaseGraph::position(int v, int e) const {
  const auto& inc = incident[v];
  auto it = std::find(inc.begin(), inc.end(), e);
  return it == inc.end() ? -1 : static_cast<int>(it - inc.begin());
}

std::vector<int> BaseGraph::neighbors(int v) const {
  std::vector<int> out;
  for (int e : incident[v]) out.push_back(other(e, v));
  return out;
}

void BaseGraph::validate() const {
  if (!std::is_sorted(edges.begin(), edges.end()) ||
      std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw std::invalid_argument("edges must be sorted and distinct");
  for (auto [u, v] : edges)
    if (u >= v || u < 0 || v >= n()) throw std::invalid_argument("malformed edge");
  if (static_cast<int>(incident.size()) != n()) throw std::invalid_argument("incident table size");
  for (int v = 0; v < n(); ++v) {
    if (static_cast<int>(incident[v].size()) != degree)
      throw std::invalid_argument("vertex " + names[v] + " does not have the declared degree");
    std::vector<int> want;
    for (int e = 0; e < m(); ++e)
      if (edges[e].first == v || edges[e].second == v) want.push_back(e);
    std::vector<int> have = incident[v];
    std::sort(have.begin(), have.end());
    if (have != want) throw std::invalid_argument("incident tuple of " + names[v] + " is not E(v)");
  }
  if (!is_connected(*this)) throw std::invalid_argument("graph is not connected");
  if (!side.empty()) {
    for (auto [u, v] : edges)
      if (side[u] == side[v]) throw std::invalid_argument("bipartition violated");
  }
  if (copies > 0) {
    for (int v = 0; v < n(); ++v) {
      int e = cross_edge[v];
      if (e < 0 || incident[v][0] != e) throw std::invalid_argument("cross edge must come first");
      if (copy_of[other(e, v)] == copy_of[v]) throw std::invalid_argument("cross edge stays in its copy");
    }
  }
}

BaseGraph make_graph(std::vector<std::string> names, std::vector<std::pair<int, int>> edges) {
  BaseGraph g;
  g.names = std::move(names);
  for (auto& [u, v] : edges) {
    if (u == v) throw std::invalid_argument("self-loop in base graph");
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw std::invalid_argument("parallel edges in base graph");
  g.edges = std::move(edges);
  g.incident.assign(g.n(), {});
  for (int e = 0; e < g.m(); ++e) {
    g.incident[g.edges[e].first].push_back(e);
    g.incident[g.edges[e].second].push_back(e);
  }
  for (int v = 0; v < g.n(); ++v)
    std::sort(g.incident[v].begin(), g.incident[v].end(),
              [&](int a, int b) { return g.other(a, v) < g.other(b, v); });
  for (const auto& inc : g.incident) g.degree = std::max(g.degree, static_cast<int>(inc.size()));
  return g;
}

BaseGraph toroidal_grid(int d, const std::vector<int>& sides) {
  if (d < 2) throw std::invalid_argument("toroidal grid needs d >= 2");
  std::size_t dims = static_cast<std::size_t>(d / 2);
  if (sides.size() != dims)
    throw std::invalid_argument("toroidal grid needs " + std::to_string(dims) + " side lengths");
  for (int s : sides)
    if (s < 4 || s % 2) throw std::invalid_argument("side lengths must be even and at least 4");
  bool doubled = d % 2 == 1;
  int cells = 1;
  for (int s : sides) cells *= s;
  int layers = doubled ? 2 : 1;
  std::vector<std::string> names;
  std::vector<int> side;
  auto coords = [&](int idx) {
    std::vector<int> c(dims);
    for (int k = static_cast<int>(dims) - 1; k >= 0; --k) {
      c[k] = idx % sides[k];
      idx /= sides[k];
    }
    return c;
  };
  auto index = [&](const std::vector<int>& c) {
    int idx = 0;
    for (std::size_t k = 0; k < dims; ++k) idx = idx * sides[k] + c[k];
    return idx;
  };
  for (int layer = 0; layer < layers; ++layer)
    for (int i = 0; i < cells; ++i) {
      auto c = coords(i);
      std::string nm;
      int parity = layer;
      for (std::size_t k = 0; k < dims; ++k) {
        nm += (k ? "," : "") + std::to_string(c[k]);
        parity += c[k];
      }
      if (doubled) nm += "|" + std::to_string(layer);
      names.push_back(nm);
      side.push_back(parity % 2);
    }
  std::vector<std::pair<int, int>> edges;
  for (int layer = 0; layer < layers; ++layer)
    for (int i = 0; i < cells; ++i) {
      auto c = coords(i);
      for (std::size_t k = 0; k < dims; ++k) {
        auto c2 = c;
        c2[k] = (c[k] + 1) % sides[k];
        edges.emplace_back(layer * cells + i, layer * cells + index(c2));
      }
      if (doubled && layer == 0) edges.emplace_back(i, cells + i);
    }
  BaseGraph g = make_graph(std::move(names), std::move(edges));
  g.side = std::move(side);
  g.validate();
  return g;
}

BaseGraph biclique_minus_matching(int k) {
  if (k < 3) throw std::invalid_argument("biclique minus matching needs k >= 3");
  std::vector<std::string> names;
  std::vector<int> side;
  for (int s = 0; s < 2; ++s)
    for (int i = 0; i <= k; ++i) {
      names.push_back(std::string(s ? "b" : "a") + std::to_string(i));
      side.push_back(s);
    }
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= k; ++j)
      if (i != j) edges.emplace_back(i, k + 1 + j);
  BaseGraph g = make_graph(std::move(names), std::move(edges));
  g.side = std::move(side);
  g.validate();
  return g;
}

namespace {

// Most balanced non-increasing even sides (>= 4) with the given product.
std::vector<int> pick_sides(int dims, int product) {
  std::vector<int> best, cur;
  std::function<void(int, int, int)> rec = [&](int left, int rest, int cap) {
    if (left == 0) {
      if (rest == 1 && (best.empty() || cur.front() < best.front())) best = cur;
      return;
    }
    for (int s = std::min(cap, rest); s >= 4; --s) {
      if (s % 2 || rest % s) continue;
      cur.push_back(s);
      rec(left - 1, rest / s, s);
      cur.pop_back();
    }
  };
  rec(dims, product, product);
  return best;
}

BaseGraph copy_shape(int d, int n, CopyShape shape) {
  if (shape == CopyShape::BicliqueMinusMatching) {
    if (n != d) throw std::invalid_argument("biclique copies need n = d");
    return biclique_minus_matching(d - 1);
  }
  int hd = d - 1;
  int dims = hd / 2;
  int product = hd % 2 ? n : 2 * n;
  auto sides = pick_sides(dims, product);
  if (sides.empty())
    throw std::invalid_argument("no toroidal grid of degree " + std::to_string(hd) + " with " +
                                std::to_string(n) + " vertices per side");
  return toroidal_grid(hd, sides);
}

}  // namespace

BaseGraph composite_graph(int d, int n, CopyShape shape) {
  if (d < 3) throw std::invalid_argument("composite graph needs d >= 3");
  if (n < d) throw std::invalid_argument("composite graph needs n >= d");
  BaseGraph h = copy_shape(d, n, shape);
  int hn = h.n();
  if (hn != 2 * n) throw std::logic_error("copy graph has the wrong size");
  int copies = n + 1;
  std::vector<std::string> names(copies * hn);
  std::vector<int> side(copies * hn), copy_of(copies * hn);
  // index of v_ij / w_ij, keyed by (kind, i, j)
  std::map<std::tuple<int, int, int>, int> where;
  for (int i = 0; i < copies; ++i) {
    int counter[2] = {0, 0};
    for (int x = 0; x < hn; ++x) {
      int s = h.side[x];
      int t = counter[s]++;
      int j = t < i ? t : t + 1;  // t-th element of [n+1] \ {i}
      int id = i * hn + x;
      names[id] = std::string(s ? "w" : "v") + std::to_string(i + 1) + "_" + std::to_string(j + 1);
      side[id] = s;
      copy_of[id] = i;
      where[{s, i, j}] = id;
    }
  }
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < copies; ++i)
    for (auto [a, b] : h.edges) edges.emplace_back(i * hn + a, i * hn + b);
  for (int i = 0; i < copies; ++i)
    for (int j = 0; j < copies; ++j)
      if (i != j) edges.emplace_back(where.at({0, i, j}), where.at({1, j, i}));
  BaseGraph g = make_graph(std::move(names), std::move(edges));
  g.side = std::move(side);
  g.copies = copies;
  g.copy_of = std::move(copy_of);
  g.cross_edge.assign(g.n(), -1);
  for (int v = 0; v < g.n(); ++v) {
    auto& inc = g.incident[v];
    for (int e : inc)
      if (g.copy_of[g.other(e, v)] != g.copy_of[v]) g.cross_edge[v] = e;
    std::stable_partition(inc.begin(), inc.end(), [&](int e) { return e == g.cross_edge[v]; });
  }
  g.validate();
  return g;
}

namespace {

int max_flow(const BaseGraph& g, int s, int t) {
  // unit capacities in both directions of every edge
  int m = g.m();
  std::vector<int> flow(2 * m, 0);  // arc 2e: low->high, 2e+1: high->low
  int total = 0;
  while (true) {
    std::vector<int> via(g.n(), -1);
    std::vector<char> seen(g.n(), 0);
    std::queue<int> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty() && !seen[t]) {
      int v = q.front();
      q.pop();
      for (int e : g.incident[v]) {
        int w = g.other(e, v);
        int arc = 2 * e + (v == g.edges[e].first ? 0 : 1);
        if (seen[w] || flow[arc] - flow[arc ^ 1] >= 1) continue;
        seen[w] = 1;
        via[w] = arc;
        q.push(w);
      }
    }
    if (!seen[t]) break;
    for (int v = t; v != s;) {
      int arc = via[v];
      if (flow[arc ^ 1] > 0) --flow[arc ^ 1];
      else ++flow[arc];
      int e = arc / 2;
      v = g.other(e, v);
    }
    ++total;
  }
  return total;
}

}  // namespace

int edge_connectivity(const BaseGraph& g) {
  if (g.n() < 2) throw std::invalid_argument("edge connectivity needs two vertices");
  if (!is_connected(g)) throw std::invalid_argument("graph is disconnected");
  int best = g.m();
  for (int t = 1; t < g.n(); ++t) best = std::min(best, max_flow(g, 0, t));
  return best;
}

bool is_connected(const BaseGraph& g) {
  if (g.n() == 0) return true;
  std::vector<char> seen(g.n(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : g.neighbors(v))
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  return count == g.n();
}

bool is_bipartite(const BaseGraph& g) {
  std::vector<int> col(g.n(), -1);
  for (int s = 0; s < g.n(); ++s) {
    if (col[s] >= 0) continue;
    col[s] = 0;
    std::vector<int> stack{s};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : g.neighbors(v)) {
        if (col[w] < 0) {
          col[w] = 1 - col[v];
          stack.push_back(w);
        } else if (col[w] == col[v]) {
          return false;
        }
      }
    }
  }
  return true;
}

nlohmann::json graph_to_json(const BaseGraph& g) {
  nlohmann::json j;
  j["degree"] = g.degree;
  j["vertices"] = g.names;
  j["edges"] = nlohmann::json::array();
  for (auto [u, v] : g.edges) j["edges"].push_back({g.names[u], g.names[v]});
  j["incident"] = nlohmann::json::array();
  for (int v = 0; v < g.n(); ++v) {
    auto row = nlohmann::json::array();
    for (int w : g.neighbors(v)) row.push_back(g.names[w]);
    j["incident"].push_back(row);
  }
  if (!g.side.empty()) j["bipartition"] = g.side;
  if (g.has_copies()) {
    j["copies"] = g.copies;
    j["copy_of"] = g.copy_of;
  }
  return j;
}

BaseGraph graph_from_json(const nlohmann::json& j) {
  std::vector<std::string> names = j.at("vertices").get<std::vector<std::string>>();
  std::map<std::string, int> id;
  for (int i = 0; i < static_cast<int>(names.size()); ++i)
    if (!id.emplace(names[i], i).second) throw std::invalid_argument("duplicate vertex " + names[i]);
  auto lookup = [&](const nlohmann::json& x) {
    auto it = id.find(x.get<std::string>());
    if (it == id.end()) throw std::invalid_argument("unknown vertex " + x.get<std::string>());
    return it->second;
  };
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges")) edges.emplace_back(lookup(e.at(0)), lookup(e.at(1)));
  BaseGraph g = make_graph(std::move(names), std::move(edges));
  if (j.contains("degree")) g.degree = j.at("degree").get<int>();
  if (j.contains("incident")) {
    const auto& inc = j.at("incident");
    if (static_cast<int>(inc.size()) != g.n()) throw std::invalid_argument("incident table size");
    for (int v = 0; v < g.n(); ++v) {
      std::vector<int> order;
      for (const auto& w : inc[v]) {
        int e = g.edge_index(v, lookup(w));
        if (e < 0) throw std::invalid_argument("incident entry is not an edge");
        order.push_back(e);
      }
      g.incident[v] = order;
    }
  }
  if (j.contains("bipartition")) g.side = j.at("bipartition").get<std::vector<int>>();
  if (j.contains("copies")) {
    g.copies = j.at("copies").get<int>();
    g.copy_of = j.at("copy_of").get<std::vector<int>>();
    g.cross_edge.assign(g.n(), -1);
    for (int v = 0; v < g.n(); ++v)
      for (int e : g.incident[v])
        if (g.copy_of[g.other(e, v)] != g.copy_of[v]) g.cross_edge[v] = e;
  }
  g.validate();
  return g;
}

}  // namespace ppw
