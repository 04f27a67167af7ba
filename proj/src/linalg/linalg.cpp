#include "linalg/linalg.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <stdexcept>

namespace ppw {

MatrixModM::MatrixModM(int modulus, int rows, int cols)
    : modulus(modulus), rows(rows), cols(cols), data(static_cast<std::size_t>(rows) * cols, 0) {}

std::vector<int> MatrixModM::row(int i) const {
  return {data.begin() + static_cast<std::ptrdiff_t>(i) * cols,
          data.begin() + static_cast<std::ptrdiff_t>(i + 1) * cols};
}

std::vector<int> MatrixModM::times(const std::vector<int>& u) const {
  std::vector<int> out(rows, 0);
  for (int i = 0; i < rows; ++i) {
    int s = 0;
    for (int j = 0; j < cols; ++j) s += at(i, j) * u[j];
    out[i] = s % modulus;
  }
  return out;
}

std::string MatrixModM::encode() const {
  std::string s;
  for (int i = 0; i < rows; ++i) {
    if (i) s += '|';
    for (int j = 0; j < cols; ++j) s += std::to_string(at(i, j));
  }
  return s;
}

namespace {

std::optional<int> nu_value(const int* col, int n, int stride) {
  for (int c = 0; c < 2 && c < n; ++c) {
    int v = col[c * stride], k = 0;
    for (int i = 0; i < n; ++i) k += col[i * stride] == v;
    if (k >= n - 1) return v;
  }
  return std::nullopt;
}

}  // namespace

bool has_nu_property(const MatrixModM& a) {
  for (int j = 0; j < a.cols; ++j)
    if (!nu_value(a.data.data() + j, a.rows, a.cols)) return false;
  return true;
}

std::optional<std::vector<int>> nu_image(const MatrixModM& a) {
  std::vector<int> out(a.cols);
  for (int j = 0; j < a.cols; ++j) {
    auto v = nu_value(a.data.data() + j, a.rows, a.cols);
    if (!v) return std::nullopt;
    out[j] = *v;
  }
  return out;
}

std::uint64_t separator_count(int ell, int width) {
  std::uint64_t q = width / (ell - 1), p = width - q * (ell - 1);
  return (ell - 1) * q * (q - 1) + 2 * p * q;
}

SeparatorSet build_separator_set(int ell, int width) {
  if (ell < 3) throw std::invalid_argument("separator set needs ell >= 3");
  if (width < ell) throw std::invalid_argument("separator set needs width >= ell");
  SeparatorSet s;
  s.ell = ell;
  s.width = width;
  s.q = width / (ell - 1);
  s.p = width - s.q * (ell - 1);
  int start = 0;
  for (int b = 0; b < ell - 1; ++b) {
    int len = s.q + (b < s.p ? 1 : 0);
    std::vector<int> block;
    for (int j = start; j < start + len; ++j) block.push_back(j);
    start += len;
    for (std::size_t x = 0; x < block.size(); ++x)
      for (std::size_t y = x + 1; y < block.size(); ++y) {
        s.pairs.emplace_back(block[x], block[y]);
        std::vector<int> u11(width, 0), u12(width, 0);
        u11[block[x]] = 1;
        u11[block[y]] = 1;
        u12[block[x]] = 1;
        u12[block[y]] = 2;
        s.vectors.push_back(u11);
        s.vectors.push_back(u12);
      }
    s.blocks.push_back(std::move(block));
  }
  return s;
}

nlohmann::json LemmaReport::to_json() const {
  return {{"lemma", lemma},
          {"checked", checked},
          {"applicable", applicable},
          {"internal_checks", internal},
          {"violations", violations}};
}

namespace {

struct NuColumn {
  std::vector<int> values;
  int majority;
  int minority_row;  // -1 when constant
};

std::vector<NuColumn> nu_alphabet(int ell) {
  std::vector<NuColumn> out;
  for (int c = 0; c < 3; ++c) out.push_back({std::vector<int>(ell, c), c, -1});
  for (int i = 0; i < ell; ++i)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        if (a == b) continue;
        std::vector<int> v(ell, a);
        v[i] = b;
        out.push_back({v, a, i});
      }
  return out;
}

// Visits every ell x cols matrix with the near-unanimity property, built
// column by column from the per-column alphabet.
void for_each_nu_matrix(int ell, int cols,
                        const std::function<void(const MatrixModM&, const std::vector<int>&)>& fn) {
  auto alpha = nu_alphabet(ell);
  std::vector<int> pick(cols, 0);
  MatrixModM a(3, ell, cols);
  while (true) {
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < ell; ++i) a.at(i, j) = alpha[pick[j]].values[i];
    fn(a, pick);
    int j = cols - 1;
    while (j >= 0 && ++pick[j] == static_cast<int>(alpha.size())) pick[j--] = 0;
    if (j < 0) break;
  }
}

bool equal_row_sums(const MatrixModM& a) {
  int first = -1;
  for (int i = 0; i < a.rows; ++i) {
    int s = 0;
    for (int j = 0; j < a.cols; ++j) s += a.at(i, j);
    s %= a.modulus;
    if (first < 0) first = s;
    else if (s != first) return false;
  }
  return true;
}

bool image_is_row(const MatrixModM& a, const std::vector<int>& img) {
  for (int i = 0; i < a.rows; ++i)
    if (a.row(i) == img) return true;
  return false;
}

bool two_rows_equal(const MatrixModM& a) {
  for (int i = 0; i < a.rows; ++i)
    for (int k = i + 1; k < a.rows; ++k)
      if (a.row(i) == a.row(k)) return true;
  return false;
}

int distinct(const std::vector<int>& v) {
  std::vector<int> s = v;
  std::sort(s.begin(), s.end());
  return static_cast<int>(std::unique(s.begin(), s.end()) - s.begin());
}

// If the image is not a row, the minority entries of the non-constant
// columns must sit in every row.
bool minority_rows_cover(const MatrixModM& a) {
  std::vector<char> hit(a.rows, 0);
  for (int j = 0; j < a.cols; ++j) {
    auto v = nu_value(a.data.data() + j, a.rows, a.cols);
    for (int i = 0; i < a.rows; ++i)
      if (a.at(i, j) != *v) hit[i] = 1;
  }
  return std::all_of(hit.begin(), hit.end(), [](char c) { return c; });
}

std::vector<int> separating_vector(int ell) {
  std::vector<int> u(ell, 0);
  u[1] = 1;
  u[2] = 2;
  return u;
}

void finish(LemmaReport& r) { std::sort(r.violations.begin(), r.violations.end()); }

}  // namespace

LemmaReport verify_lemma_base() {
  LemmaReport r;
  r.lemma = "base-separating";
  MatrixModM a(3, 3, 3);
  auto u = separating_vector(3);
  for (int code = 0; code < 19683; ++code) {
    int c = code;
    for (int k = 8; k >= 0; --k) {
      a.data[k] = c % 3;
      c /= 3;
    }
    ++r.checked;
    if (!has_nu_property(a) || !equal_row_sums(a)) continue;
    auto img = nu_image(a);
    if (image_is_row(a, *img)) continue;
    ++r.applicable;
    if (distinct(a.times(u)) != 3) r.violations.push_back(a.encode());
  }
  finish(r);
  return r;
}

LemmaReport verify_lemma_separating(int ell) {
  if (ell < 3 || ell > 4) throw std::invalid_argument("separating sweep supports ell in {3,4}");
  LemmaReport r;
  r.lemma = "separating:" + std::to_string(ell);
  auto u = separating_vector(ell);
  for_each_nu_matrix(ell, ell, [&](const MatrixModM& a, const std::vector<int>&) {
    ++r.checked;
    auto img = *nu_image(a);
    bool row = image_is_row(a, img);
    if (!row) {
      ++r.internal;
      if (!minority_rows_cover(a)) r.violations.push_back("cover:" + a.encode());
    }
    if (row || !equal_row_sums(a)) return;
    ++r.applicable;
    if (distinct(a.times(u)) < 3) r.violations.push_back(a.encode());
  });
  finish(r);
  return r;
}

LemmaReport verify_lemma_row_back(int ell) {
  if (ell < 3 || ell > 4) throw std::invalid_argument("row-back sweep supports ell in {3,4}");
  LemmaReport r;
  r.lemma = "row-back:" + std::to_string(ell);
  for_each_nu_matrix(ell, ell, [&](const MatrixModM& a, const std::vector<int>&) {
    ++r.checked;
    if (!equal_row_sums(a)) return;
    ++r.applicable;
    if (image_is_row(a, *nu_image(a)) != two_rows_equal(a)) r.violations.push_back(a.encode());
  });
  finish(r);
  return r;
}

LemmaReport verify_lemma_pairs(int ell, int width) {
  if (ell < 3 || width < ell) throw std::invalid_argument("pairs sweep needs width >= ell >= 3");
  double size = 1;
  for (int j = 0; j < width; ++j) size *= 3 + 6 * ell;
  if (size > 5e7) throw std::invalid_argument("pairs sweep too large for exhaustive enumeration");
  LemmaReport r;
  r.lemma = "pairs:" + std::to_string(ell) + "," + std::to_string(width);
  auto sep = build_separator_set(ell, width);
  std::vector<std::vector<int>> products(sep.vectors.size());
  for_each_nu_matrix(ell, width, [&](const MatrixModM& a, const std::vector<int>&) {
    ++r.checked;
    ++r.applicable;
    auto img = *nu_image(a);
    bool three = false;
    for (std::size_t k = 0; k < sep.vectors.size(); ++k) {
      products[k] = a.times(sep.vectors[k]);
      if (distinct(products[k]) == 3) three = true;
    }
    if (!image_is_row(a, img)) {
      ++r.internal;
      if (!minority_rows_cover(a)) r.violations.push_back("cover:" + a.encode());
      if (!three) r.violations.push_back("case1:" + a.encode());
      return;
    }
    if (three) return;
    for (std::size_t k = 0; k < sep.vectors.size(); ++k) {
      MatrixModM col(3, ell, 1);
      col.data = products[k];
      auto v = nu_image(col);
      int want = 0;
      for (int j = 0; j < width; ++j) want += img[j] * sep.vectors[k][j];
      if (!v || (*v)[0] != want % 3) {
        r.violations.push_back("case2:" + a.encode());
        return;
      }
    }
  });
  finish(r);
  return r;
}

bool LinearSystem::satisfied_by(const std::vector<int>& x) const {
  if (x.size() != vars.size()) return false;
  for (const auto& eq : equations) {
    long s = 0;
    for (auto [v, c] : eq.coeffs) s += static_cast<long>(c) * x[v];
    if (((s - eq.rhs) % modulus + modulus) % modulus != 0) return false;
  }
  return true;
}

LinearSystem tseitin_system(const BaseGraph& g, const std::vector<int>& charges, int modulus) {
  if (static_cast<int>(charges.size()) != g.n()) throw std::invalid_argument("one charge per vertex");
  LinearSystem sys;
  sys.modulus = modulus;
  for (auto [u, v] : g.edges) sys.vars.push_back(g.names[u] + "-" + g.names[v]);
  for (int v = 0; v < g.n(); ++v) {
    if (charges[v] < 0 || charges[v] >= modulus) throw std::invalid_argument("charge out of range");
    LinearSystem::Equation eq;
    for (int e : g.incident[v]) eq.coeffs[e] = 1;
    eq.rhs = charges[v];
    sys.equations.push_back(eq);
  }
  return sys;
}

namespace {

int inv_mod(int a, int p) {
  for (int x = 1; x < p; ++x)
    if (a * x % p == 1) return x;
  throw std::logic_error("no inverse");
}

struct PrimeSolution {
  std::vector<int> particular;
  std::vector<std::vector<int>> kernel;
};

// Gauss-Jordan over a prime field.
std::optional<PrimeSolution> solve_prime(std::vector<std::vector<int>> a, std::vector<int> b, int n,
                                         int p) {
  int rows = static_cast<int>(a.size());
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < n && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (a[i][c] % p) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(a[piv], a[r]);
    std::swap(b[piv], b[r]);
    int inv = inv_mod(a[r][c], p);
    for (int j = 0; j < n; ++j) a[r][j] = a[r][j] * inv % p;
    b[r] = b[r] * inv % p;
    for (int i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      int f = a[i][c];
      for (int j = 0; j < n; ++j) a[i][j] = ((a[i][j] - f * a[r][j]) % p + p) % p;
      b[i] = ((b[i] - f * b[r]) % p + p) % p;
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (int i = r; i < rows; ++i)
    if (b[i] % p) return std::nullopt;
  PrimeSolution s;
  s.particular.assign(n, 0);
  for (int i = 0; i < r; ++i) s.particular[pivot_col[i]] = b[i];
  std::vector<char> is_pivot(n, 0);
  for (int c : pivot_col) is_pivot[c] = 1;
  for (int f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    std::vector<int> k(n, 0);
    k[f] = 1;
    for (int i = 0; i < r; ++i) k[pivot_col[i]] = (p - a[i][f]) % p;
    s.kernel.push_back(k);
  }
  return s;
}

std::vector<std::vector<int>> dense(const LinearSystem& sys, int mod) {
  std::vector<std::vector<int>> a(sys.equations.size(), std::vector<int>(sys.vars.size(), 0));
  for (std::size_t i = 0; i < sys.equations.size(); ++i)
    for (auto [v, c] : sys.equations[i].coeffs) a[i][v] = ((c % mod) + mod) % mod;
  return a;
}

}  // namespace

std::optional<std::vector<int>> solve(const LinearSystem& sys, int max_free_bits) {
  int n = static_cast<int>(sys.vars.size());
  int m = sys.modulus;
  if (m != 2 && m != 3 && m != 4) throw std::invalid_argument("supported moduli are 2, 3 and 4");
  for (const auto& eq : sys.equations)
    for (auto [v, c] : eq.coeffs)
      if (v < 0 || v >= n) throw std::invalid_argument("coefficient on an undeclared variable");
  if (m != 4) {
    std::vector<int> b;
    for (const auto& eq : sys.equations) b.push_back(((eq.rhs % m) + m) % m);
    auto s = solve_prime(dense(sys, m), b, n, m);
    if (!s) return std::nullopt;
    return s->particular;
  }
  // Z4: x = x0 + 2 x1 with x0 a 0/1 solution mod 2 and x1 solving the
  // mod-2 residual system A x1 = (b - A x0) / 2.
  auto a4 = dense(sys, 4);
  auto a2 = dense(sys, 2);
  std::vector<int> b2;
  for (const auto& eq : sys.equations) b2.push_back(((eq.rhs % 2) + 2) % 2);
  auto base = solve_prime(a2, b2, n, 2);
  if (!base) return std::nullopt;
  int k = static_cast<int>(base->kernel.size());
  if (k > max_free_bits)
    throw std::runtime_error("mod-2 solution space too large to lift exhaustively");
  std::vector<int> x0(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    x0 = base->particular;
    for (int t = 0; t < k; ++t)
      if (mask >> t & 1)
        for (int j = 0; j < n; ++j) x0[j] ^= base->kernel[t][j];
    std::vector<int> resid;
    for (std::size_t i = 0; i < sys.equations.size(); ++i) {
      int s = 0;
      for (int j = 0; j < n; ++j) s += a4[i][j] * x0[j];
      int d = (((sys.equations[i].rhs - s) % 4) + 4) % 4;
      resid.push_back(d / 2);
    }
    auto lift = solve_prime(a2, resid, n, 2);
    if (!lift) continue;
    std::vector<int> x(n);
    for (int j = 0; j < n; ++j) x[j] = (x0[j] + 2 * lift->particular[j]) % 4;
    return x;
  }
  return std::nullopt;
}

std::vector<int> tseitin_defects(const BaseGraph& g, const std::vector<int>& charges, int modulus,
                                 const std::vector<int>& x) {
  std::vector<int> d(g.n());
  for (int v = 0; v < g.n(); ++v) {
    int s = 0;
    for (int e : g.incident[v]) s += x[e];
    d[v] = (((s - charges[v]) % modulus) + modulus) % modulus;
  }
  return d;
}

namespace {

std::vector<int> two_colouring(const BaseGraph& g) {
  if (!g.side.empty()) return g.side;
  if (!is_bipartite(g)) throw std::invalid_argument("graph is not bipartite");
  std::vector<int> col(g.n(), -1);
  for (int s = 0; s < g.n(); ++s) {
    if (col[s] >= 0) continue;
    col[s] = 0;
    std::vector<int> st{s};
    while (!st.empty()) {
      int v = st.back();
      st.pop_back();
      for (int w : g.neighbors(v))
        if (col[w] < 0) {
          col[w] = 1 - col[v];
          st.push_back(w);
        }
    }
  }
  return col;
}

}  // namespace

std::vector<int> perfect_matching(const BaseGraph& g) {
  auto col = two_colouring(g);
  std::vector<int> match_edge(g.n(), -1);  // for right vertices: matched edge
  std::vector<int> mate(g.n(), -1);
  std::vector<char> seen;
  std::function<bool(int)> augment = [&](int v) {
    for (int e : g.incident[v]) {
      int w = g.other(e, v);
      if (seen[w]) continue;
      seen[w] = 1;
      if (mate[w] < 0 || augment(mate[w])) {
        mate[w] = v;
        match_edge[w] = e;
        return true;
      }
    }
    return false;
  };
  int left = 0;
  for (int v = 0; v < g.n(); ++v) {
    if (col[v] != 0) continue;
    ++left;
    seen.assign(g.n(), 0);
    if (!augment(v)) throw std::runtime_error("no perfect matching");
  }
  std::vector<int> out;
  for (int w = 0; w < g.n(); ++w)
    if (col[w] == 1 && match_edge[w] >= 0) out.push_back(match_edge[w]);
  if (static_cast<int>(out.size()) * 2 != g.n()) throw std::runtime_error("no perfect matching");
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> bfs_path(const BaseGraph& g, int from, int to, const std::vector<char>& blocked) {
  if (from == to) return {from};
  std::vector<int> parent(g.n(), -2);
  parent[from] = -1;
  std::queue<int> q;
  q.push(from);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    auto nb = g.neighbors(v);
    std::sort(nb.begin(), nb.end());
    for (int w : nb) {
      if (parent[w] != -2 || (!blocked.empty() && blocked[w] && w != to)) continue;
      parent[w] = v;
      if (w == to) {
        std::vector<int> path{to};
        for (int x = v; x != -1; x = parent[x]) path.push_back(x);
        std::reverse(path.begin(), path.end());
        return path;
      }
      q.push(w);
    }
  }
  return {};
}

std::vector<int> near_solution(const BaseGraph& g, const std::vector<int>& charges, int modulus,
                               int v_prime) {
  if (static_cast<int>(charges.size()) != g.n()) throw std::invalid_argument("one charge per vertex");
  std::map<int, int> freq;
  for (int c : charges) ++freq[((c % modulus) + modulus) % modulus];
  int a = 0, best = -1;
  for (auto [c, k] : freq)
    if (k > best) best = k, a = c;
  int special = -1;
  for (int v = 0; v < g.n(); ++v)
    if (charges[v] != a) {
      if (special >= 0) throw std::invalid_argument("charges differ at more than one vertex");
      special = v;
    }
  for (int v = 0; v < g.n(); ++v)
    if (static_cast<int>(g.incident[v].size()) != g.degree)
      throw std::invalid_argument("near solution needs a regular graph");
  std::vector<int> x(g.m(), 0);
  if (a != 0)
    for (int e : perfect_matching(g)) x[e] = a;
  if (special < 0) return x;
  // carry the surplus c - a from the special vertex to v_prime
  int delta = ((charges[special] - a) % modulus + modulus) % modulus;
  auto path = bfs_path(g, special, v_prime);
  if (path.empty()) throw std::invalid_argument("graph is not connected");
  int sign = 1;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    int e = g.edge_index(path[i], path[i + 1]);
    x[e] = ((x[e] + sign * delta) % modulus + modulus) % modulus;
    sign = -sign;
  }
  return x;
}

}  // namespace ppw
