#include "cfi/cfi.hpp"

#include <algorithm>
#include <stdexcept>

#include "linalg/linalg.hpp"
#include "structures/json_io.hpp"

namespace ppw {

int Variant::degree() const {
  switch (kind) {
    case VariantKind::NU: return ell;
    case VariantKind::NUStar: return 2 * r + 1;
    case VariantKind::Maltsev: return k;
  }
  return 0;
}

std::string Variant::name() const {
  switch (kind) {
    case VariantKind::NU: return "nu:" + std::to_string(ell);
    case VariantKind::NUStar: return "nu-star:" + std::to_string(r) + "," + std::to_string(ell);
    case VariantKind::Maltsev: return "maltsev:" + std::to_string(k);
  }
  return "";
}

Variant parse_variant(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("variant needs kind:params");
  std::string kind = text.substr(0, colon), rest = text.substr(colon + 1);
  std::vector<int> nums;
  std::size_t pos = 0;
  while (true) {
    auto comma = rest.find(',', pos);
    std::string part = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (part.empty() || !std::all_of(part.begin(), part.end(), ::isdigit) || part.size() > 6)
      throw std::invalid_argument("bad variant parameter '" + part + "'");
    nums.push_back(std::stoi(part));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  Variant v;
  if (kind == "nu" && nums.size() == 1) {
    v.kind = VariantKind::NU;
    v.ell = nums[0];
    if (v.ell < 3) throw std::invalid_argument("nu variant needs ell >= 3");
  } else if ((kind == "nu-star" || kind == "nustar") && nums.size() == 2) {
    v.kind = VariantKind::NUStar;
    v.r = nums[0];
    v.ell = nums[1];
    if (v.ell < 3 || v.r < v.ell) throw std::invalid_argument("nu-star variant needs r >= ell >= 3");
  } else if (kind == "maltsev" && nums.size() == 1) {
    v.kind = VariantKind::Maltsev;
    v.k = nums[0];
    if (v.k < 3) throw std::invalid_argument("maltsev variant needs k >= 3");
  } else {
    throw std::invalid_argument("unknown variant '" + text + "'");
  }
  return v;
}

std::string CFIStructure::atom_name(Element x) const {
  const auto& r = roles.at(x);
  if (r.kind == AtomKind::Edge) {
    auto [u, w] = graph.edges[r.edge];
    return "e:" + graph.names[u] + "-" + graph.names[w] + ":" + std::to_string(r.value);
  }
  if (variant.kind == VariantKind::NU)
    return "v:" + graph.names[r.vertex] + ":" + std::to_string(r.value);
  return "v:" + graph.names[r.vertex] + ":" + std::to_string(r.cls + 1) + ":" + std::to_string(r.value);
}

std::vector<Element> CFIStructure::gadget_atoms(int v) const {
  std::vector<Element> out;
  for (int e : graph.incident[v])
    for (int a = 0; a < modulus(); ++a) out.push_back(edge_atom(e, a));
  for (int j = 0; j < classes(); ++j)
    for (int a = 0; a < 3; ++a) out.push_back(vertex_atom(v, j, a));
  return out;
}

std::vector<int> CFIStructure::gadgets_of(Element x) const {
  const auto& r = roles.at(x);
  if (r.kind == AtomKind::Vertex) return {r.vertex};
  return {graph.edges[r.edge].first, graph.edges[r.edge].second};
}

int CFIStructure::gadget_relation(int v, int s, const Tuple& t) const {
  const auto& inc = graph.incident[v];
  int d = static_cast<int>(inc.size());
  if (static_cast<int>(t.size()) != d + classes()) return -1;
  std::vector<int> a(d);
  int sum = 0;
  for (int i = 0; i < d; ++i) {
    if (t[i] >= atom_count()) return -1;
    const auto& r = roles[t[i]];
    if (r.kind != AtomKind::Edge || r.edge != inc[i]) return -1;
    a[i] = r.value;
    sum += r.value;
  }
  for (int j = 0; j < classes(); ++j) {
    if (t[d + j] >= atom_count()) return -1;
    const auto& r = roles[t[d + j]];
    if (r.kind != AtomKind::Vertex || r.vertex != v || r.cls != j) return -1;
    int want = 0;
    for (int i = 0; i < d; ++i) want += weights[j][i] * a[i];
    if (r.value != want % 3) return -1;
  }
  if (variant.kind == VariantKind::Maltsev) {
    int x = ((sum - 2 * s) % 4 + 4) % 4;
    return x < 2 ? 0 : 1;
  }
  return (sum + s) % 3;
}

std::vector<std::pair<int, Tuple>> CFIStructure::gadget_tuples(int v, int s) const {
  const auto& inc = graph.incident[v];
  int d = static_cast<int>(inc.size());
  int m = modulus();
  std::vector<std::pair<int, Tuple>> out;
  std::vector<int> a(d, 0);
  while (true) {
    Tuple t;
    int sum = 0;
    for (int i = 0; i < d; ++i) {
      t.push_back(edge_atom(inc[i], a[i]));
      sum += a[i];
    }
    for (int j = 0; j < classes(); ++j) {
      int val = 0;
      for (int i = 0; i < d; ++i) val += weights[j][i] * a[i];
      t.push_back(vertex_atom(v, j, val % 3));
    }
    int rel;
    if (variant.kind == VariantKind::Maltsev) rel = (((sum - 2 * s) % 4 + 4) % 4) < 2 ? 0 : 1;
    else rel = (sum + s) % 3;
    out.emplace_back(rel, std::move(t));
    int i = d - 1;
    while (i >= 0 && ++a[i] == m) a[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

CFIStructure build_cfi(const BaseGraph& g, const std::vector<int>& charged_vertices, const Variant& var) {
  g.validate();
  if (g.degree != var.degree())
    throw std::invalid_argument("variant " + var.name() + " needs a " + std::to_string(var.degree()) +
                                "-regular base graph, got degree " + std::to_string(g.degree));
  CFIStructure s;
  s.variant = var;
  s.graph = g;
  s.charged.assign(g.n(), 0);
  for (int v : charged_vertices) {
    if (v < 0 || v >= g.n()) throw std::invalid_argument("charged vertex out of range");
    s.charged[v] = 1;
  }
  if (var.kind == VariantKind::NU) {
    std::vector<int> u(var.ell, 0);
    u[1] = 1;
    u[2] = 2;
    s.weights.push_back(u);
  } else if (var.kind == VariantKind::NUStar) {
    s.weights = build_separator_set(var.ell, 2 * var.r + 1).vectors;
  }
  int m = var.modulus();
  for (int e = 0; e < g.m(); ++e)
    for (int a = 0; a < m; ++a) s.roles.push_back({AtomKind::Edge, e, -1, 0, a});
  for (int v = 0; v < g.n(); ++v)
    for (int j = 0; j < s.classes(); ++j)
      for (int a = 0; a < 3; ++a) s.roles.push_back({AtomKind::Vertex, -1, v, j, a});

  Structure& st = s.structure;
  int arity = g.degree + s.classes();
  if (var.kind == VariantKind::Maltsev) st.vocab = {{"R0", arity}, {"R1", arity}, {"prec", 2}};
  else st.vocab = {{"R0", arity}, {"R1", arity}, {"R2", arity}};
  st.relations.resize(st.vocab.size());
  for (std::size_t x = 0; x < s.roles.size(); ++x) {
    st.universe.push_back(static_cast<Element>(x));
    st.labels[static_cast<Element>(x)] = s.atom_name(static_cast<Element>(x));
  }
  for (int v = 0; v < g.n(); ++v)
    for (auto& [rel, t] : s.gadget_tuples(v, s.charged[v])) st.relations[rel].push_back(std::move(t));
  if (var.kind == VariantKind::Maltsev) {
    auto& prec = st.relations[2];
    for (std::size_t x = 0; x < s.roles.size(); ++x)
      for (std::size_t y = 0; y < s.roles.size(); ++y)
        if (s.roles[x].edge <= s.roles[y].edge)
          prec.push_back({static_cast<Element>(x), static_cast<Element>(y)});
  }
  st.normalize();
  return s;
}

CFIStructure untwisted(const BaseGraph& g, const Variant& v) { return build_cfi(g, {}, v); }

CFIStructure twisted(const BaseGraph& g, const Variant& v) { return build_cfi(g, {0}, v); }

ElementMap projection_map(const CFIStructure& s) {
  ElementMap h;
  for (std::size_t x = 0; x < s.roles.size(); ++x) h[static_cast<Element>(x)] = s.roles[x].value;
  return h;
}

nlohmann::json cfi_to_json(const CFIStructure& s) {
  nlohmann::json j;
  j["variant"] = s.variant.name();
  j["graph"] = graph_to_json(s.graph);
  j["charged"] = nlohmann::json::array();
  for (int v = 0; v < s.graph.n(); ++v)
    if (s.charged[v]) j["charged"].push_back(s.graph.names[v]);
  j["structure"] = structure_to_json(s.structure);
  auto roles = nlohmann::json::array();
  for (std::size_t x = 0; x < s.roles.size(); ++x) {
    const auto& r = s.roles[x];
    nlohmann::json o;
    o["atom"] = s.atom_name(static_cast<Element>(x));
    if (r.kind == AtomKind::Edge) {
      auto [u, w] = s.graph.edges[r.edge];
      o["kind"] = "edge";
      o["edge"] = {s.graph.names[u], s.graph.names[w]};
    } else {
      o["kind"] = "vertex";
      o["vertex"] = s.graph.names[r.vertex];
      if (s.variant.kind == VariantKind::NUStar) o["class"] = r.cls + 1;
    }
    o["value"] = r.value;
    roles.push_back(std::move(o));
  }
  j["roles"] = std::move(roles);
  return j;
}

CFIStructure cfi_from_json(const nlohmann::json& j) {
  BaseGraph g = graph_from_json(j.at("graph"));
  Variant var = parse_variant(j.at("variant").get<std::string>());
  std::vector<int> charged;
  for (const auto& name : j.at("charged")) {
    auto it = std::find(g.names.begin(), g.names.end(), name.get<std::string>());
    if (it == g.names.end()) throw std::invalid_argument("charged vertex not in graph");
    charged.push_back(static_cast<int>(it - g.names.begin()));
  }
  CFIStructure s = build_cfi(g, charged, var);
  if (j.contains("structure")) {
    Structure given = structure_from_json(j.at("structure"));
    if (!(given == s.structure))
      throw std::invalid_argument("structure does not match its graph, variant and charges");
  }
  return s;
}

}  // namespace ppw
