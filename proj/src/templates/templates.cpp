#include "templates/templates.hpp"

#include <stdexcept>

#include "linalg/linalg.hpp"

namespace ppw {

namespace {

Structure numeric_universe(Vocabulary vocab, int first, int count) {
  Structure s;
  s.vocab = std::move(vocab);
  for (int i = 0; i < count; ++i) {
    s.universe.push_back(static_cast<Element>(first + i));
    s.labels[first + i] = std::to_string(first + i);
  }
  s.relations.resize(s.vocab.size());
  return s;
}

// Calls fn on every vector in {0..base-1}^len.
template <class F>
void for_each_vector(int base, int len, F fn) {
  std::vector<int> a(len, 0);
  while (true) {
    fn(a);
    int j = len - 1;
    while (j >= 0 && ++a[j] == base) a[j--] = 0;
    if (j < 0) break;
  }
}

int dot3(const std::vector<int>& a, const std::vector<int>& u) {
  int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * u[i];
  return s % 3;
}

int sum_mod(const std::vector<int>& a, int m) {
  int s = 0;
  for (int x : a) s += x;
  return s % m;
}

Vocabulary indexed_vocab(int count, int arity) {
  Vocabulary v;
  for (int j = 0; j < count; ++j) v.push_back({"R" + std::to_string(j), arity});
  return v;
}

}  // namespace

Structure template_nu(int ell) {
  if (ell < 3) throw std::invalid_argument("NU template needs ell >= 3");
  Structure s = numeric_universe(indexed_vocab(3, ell + 1), 0, 3);
  std::vector<int> u(ell, 0);
  u[1] = 1;
  u[2] = 2;
  for_each_vector(3, ell, [&](const std::vector<int>& a) {
    Tuple t(a.begin(), a.end());
    t.push_back(static_cast<Element>(dot3(a, u)));
    s.relations[sum_mod(a, 3)].push_back(std::move(t));
  });
  s.normalize();
  return s;
}

Structure template_nu_star(int r, int ell) {
  if (ell < 3) throw std::invalid_argument("NU star template needs ell >= 3");
  if (r < ell) throw std::invalid_argument("NU star template needs r >= ell");
  int width = 2 * r + 1;
  auto sep = build_separator_set(ell, width);
  Structure s = numeric_universe(indexed_vocab(3, width + static_cast<int>(sep.vectors.size())), 0, 3);
  for_each_vector(3, width, [&](const std::vector<int>& a) {
    Tuple t(a.begin(), a.end());
    for (const auto& u : sep.vectors) t.push_back(static_cast<Element>(dot3(a, u)));
    s.relations[sum_mod(a, 3)].push_back(std::move(t));
  });
  s.normalize();
  return s;
}

Structure uniform_hypergraph(int r, int m) {
  // m < r is allowed and gives an empty relation
  if (r < 2 || m < 2) throw std::invalid_argument("hypergraph needs r >= 2 and m >= 2");
  Structure s = numeric_universe({{"R", r}}, 1, m);
  for_each_vector(m, r, [&](const std::vector<int>& a) {
    for (int i = 0; i < r; ++i)
      for (int j = i + 1; j < r; ++j)
        if (a[i] == a[j]) return;
    Tuple t;
    for (int x : a) t.push_back(static_cast<Element>(x + 1));
    s.relations[0].push_back(std::move(t));
  });
  s.normalize();
  return s;
}

Structure clique_template(int m) {
  Structure s = uniform_hypergraph(2, m);
  s.vocab[0].name = "E";
  return s;
}

Structure parity_template(int r) {
  if (r < 3) throw std::invalid_argument("parity template needs r >= 3");
  Structure s = numeric_universe(indexed_vocab(2, r), 0, 2);
  for_each_vector(2, r, [&](const std::vector<int>& a) {
    s.relations[sum_mod(a, 2)].push_back(Tuple(a.begin(), a.end()));
  });
  s.normalize();
  return s;
}

int TemplateSpec::arity() const {
  switch (kind) {
    case TemplateKind::NU: return ell + 1;
    case TemplateKind::NUStar:
      return 2 * r + 1 + static_cast<int>(separator_count(ell, 2 * r + 1));
    case TemplateKind::Hypergraph:
    case TemplateKind::Parity: return r;
    case TemplateKind::Clique: return 2;
  }
  return 0;
}

std::string TemplateSpec::name() const {
  switch (kind) {
    case TemplateKind::NU: return "nu:" + std::to_string(ell);
    case TemplateKind::NUStar: return "nustar:" + std::to_string(r) + "," + std::to_string(ell);
    case TemplateKind::Hypergraph: return "hypergraph:" + std::to_string(r) + "," + std::to_string(m);
    case TemplateKind::Clique: return "clique:" + std::to_string(m);
    case TemplateKind::Parity: return "parity:" + std::to_string(r);
  }
  return "";
}

void TemplateSpec::validate() const {
  switch (kind) {
    case TemplateKind::NU:
      if (ell < 3) throw std::invalid_argument("NU template needs ell >= 3");
      break;
    case TemplateKind::NUStar:
      if (ell < 3 || r < ell) throw std::invalid_argument("NU star template needs r >= ell >= 3");
      break;
    case TemplateKind::Hypergraph:
      if (r < 2 || m < 2) throw std::invalid_argument("hypergraph needs r >= 2 and m >= 2");
      break;
    case TemplateKind::Clique:
      if (m < 2) throw std::invalid_argument("clique needs m >= 2");
      break;
    case TemplateKind::Parity:
      if (r < 3) throw std::invalid_argument("parity template needs r >= 3");
      break;
  }
}

TemplateSpec parse_template(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("template spec needs kind:params");
  std::string kind = text.substr(0, colon);
  std::vector<int> nums;
  std::size_t pos = colon + 1;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    std::string part = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (part.empty() || used != part.size()) throw std::invalid_argument("bad template parameter '" + part + "'");
    nums.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  TemplateSpec s;
  auto need = [&](std::size_t k) {
    if (nums.size() != k) throw std::invalid_argument(kind + " template takes " + std::to_string(k) + " parameters");
  };
  if (kind == "nu") {
    need(1);
    s.kind = TemplateKind::NU;
    s.ell = nums[0];
  } else if (kind == "nustar") {
    need(2);
    s.kind = TemplateKind::NUStar;
    s.r = nums[0];
    s.ell = nums[1];
  } else if (kind == "hypergraph") {
    need(2);
    s.kind = TemplateKind::Hypergraph;
    s.r = nums[0];
    s.m = nums[1];
  } else if (kind == "clique") {
    need(1);
    s.kind = TemplateKind::Clique;
    s.m = nums[0];
  } else if (kind == "parity") {
    need(1);
    s.kind = TemplateKind::Parity;
    s.r = nums[0];
  } else {
    throw std::invalid_argument("unknown template kind '" + kind + "'");
  }
  s.validate();
  return s;
}

Structure build_template(const TemplateSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case TemplateKind::NU: return template_nu(spec.ell);
    case TemplateKind::NUStar: return template_nu_star(spec.r, spec.ell);
    case TemplateKind::Hypergraph: return uniform_hypergraph(spec.r, spec.m);
    case TemplateKind::Clique: return clique_template(spec.m);
    case TemplateKind::Parity: return parity_template(spec.r);
  }
  throw std::logic_error("unhandled template kind");
}

}  // namespace ppw
