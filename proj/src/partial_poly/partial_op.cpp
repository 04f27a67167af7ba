#include "partial_poly/partial_op.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <unordered_set>

namespace ppw {

PartialOp PartialOp::nu(int ell) {
  if (ell < 3) throw std::invalid_argument("near-unanimity arity must be at least 3");
  return {OpKind::NearUnanimity, ell};
}

std::optional<Element> PartialOp::eval(const Element* args) const {
  if (kind == OpKind::Maltsev) return eval_maltsev(args[0], args[1], args[2]);
  // a value shared by ell-1 arguments must be args[0] or args[1]
  for (int c = 0; c < 2; ++c) {
    Element v = args[c];
    int n = 0;
    for (int i = 0; i < ell; ++i) n += args[i] == v;
    if (n >= ell - 1) return v;
  }
  return std::nullopt;
}

std::string PartialOp::name() const {
  return kind == OpKind::Maltsev ? "maltsev" : "nu:" + std::to_string(ell);
}

PartialOp parse_op(const std::string& text) {
  if (text == "maltsev") return PartialOp::maltsev();
  if (text.rfind("nu:", 0) == 0) return PartialOp::nu(std::stoi(text.substr(3)));
  throw std::invalid_argument("unknown operation family: " + text);
}

std::optional<Element> eval_nu(int ell, const std::vector<Element>& args) {
  if (ell < 3) throw std::invalid_argument("near-unanimity arity must be at least 3");
  if (static_cast<int>(args.size()) != ell) throw std::invalid_argument("wrong number of arguments");
  return PartialOp::nu(ell).eval(args.data());
}

std::optional<Element> eval_maltsev(Element a, Element b, Element c) {
  if (a == b) return c;
  if (b == c) return a;
  return std::nullopt;
}

std::optional<Tuple> apply_columnwise(const PartialOp& p, const std::vector<Tuple>& rows) {
  if (static_cast<int>(rows.size()) != p.arity())
    throw std::invalid_argument("row count must equal the operation arity");
  std::size_t len = rows[0].size();
  for (const auto& r : rows)
    if (r.size() != len) throw std::invalid_argument("ragged rows");
  Tuple out(len);
  std::vector<Element> col(rows.size());
  for (std::size_t j = 0; j < len; ++j) {
    for (std::size_t i = 0; i < rows.size(); ++i) col[i] = rows[i][j];
    auto v = p.eval(col.data());
    if (!v) return std::nullopt;
    out[j] = *v;
  }
  return out;
}

namespace {

int uniform_length(const TupleSet& r) {
  if (r.empty()) return 0;
  std::size_t len = r[0].size();
  for (const auto& t : r)
    if (t.size() != len) throw std::invalid_argument("tuples of different lengths");
  return static_cast<int>(len);
}

// Membership by base-b encoding when it fits in 64 bits.
class TupleLookup {
 public:
  explicit TupleLookup(const TupleSet& r) : r_(r) {
    Element mx = 0;
    for (const auto& t : r)
      for (auto e : t) mx = std::max(mx, e);
    base_ = static_cast<std::uint64_t>(mx) + 1;
    int len = uniform_length(r);
    double bits = len * std::log2(static_cast<double>(base_ + 1));
    encoded_ = bits < 62;
    if (encoded_)
      for (const auto& t : r) set_.insert(encode(t.data(), t.size()));
  }
  bool contains(const Element* t, std::size_t len) const {
    if (!encoded_) return contains_tuple(r_, Tuple(t, t + len));
    for (std::size_t i = 0; i < len; ++i)
      if (t[i] >= base_) return false;
    return set_.count(encode(t, len)) > 0;
  }

 private:
  std::uint64_t encode(const Element* t, std::size_t len) const {
    std::uint64_t x = 0;
    for (std::size_t i = 0; i < len; ++i) x = x * base_ + t[i];
    return x;
  }
  const TupleSet& r_;
  std::uint64_t base_ = 1;
  bool encoded_ = false;
  std::unordered_set<std::uint64_t> set_;
};

// Streams every defined image of a row sequence; fn returns false to stop.
// Near-unanimity prefixes are pruned once some column has no value of
// multiplicity >= k-1 among the first k rows.
bool enumerate_images(const PartialOp& p, const TupleSet& r,
                      const std::function<bool(const Tuple&)>& fn) {
  int len = uniform_length(r);
  int m = static_cast<int>(r.size());
  if (m == 0) return true;
  int ell = p.arity();
  Tuple out(len);
  if (p.kind == OpKind::Maltsev) {
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c) {
          bool ok = true;
          for (int j = 0; j < len && ok; ++j) {
            auto v = eval_maltsev(r[a][j], r[b][j], r[c][j]);
            if (v) out[j] = *v;
            else ok = false;
          }
          if (ok && !fn(out)) return false;
        }
    return true;
  }
  struct Col {
    Element v1, v2;
    int c1, c2;
  };
  std::vector<std::vector<Col>> st(ell + 1, std::vector<Col>(len, Col{0, 0, 0, 0}));
  std::function<bool(int)> rec = [&](int k) -> bool {
    if (k == ell) {
      for (int j = 0; j < len; ++j) out[j] = st[k][j].c1 >= ell - 1 ? st[k][j].v1 : st[k][j].v2;
      return fn(out);
    }
    for (int x = 0; x < m; ++x) {
      const Tuple& row = r[x];
      bool ok = true;
      for (int j = 0; j < len && ok; ++j) {
        Col c = st[k][j];
        Element e = row[j];
        if (c.c1 == 0) c = {e, 0, 1, 0};
        else if (e == c.v1) ++c.c1;
        else if (c.c2 == 0) c.v2 = e, c.c2 = 1;
        else if (e == c.v2) ++c.c2;
        else ok = false;
        if (ok && std::min(c.c1, c.c2) > 1) ok = false;
        st[k + 1][j] = c;
      }
      if (ok && !rec(k + 1)) return false;
    }
    return true;
  };
  return rec(0);
}

double enumerate_cost(const PartialOp& p, const TupleSet& r) {
  return std::pow(static_cast<double>(r.size()), p.arity());
}

double candidate_cost(const PartialOp& p, const TupleSet& r) {
  int len = uniform_length(r);
  if (p.kind != OpKind::NearUnanimity || len > 20) return INFINITY;
  double prod = 1;
  for (int j = 0; j < len; ++j) {
    std::vector<Element> vals;
    for (const auto& t : r) vals.push_back(t[j]);
    std::sort(vals.begin(), vals.end());
    prod *= static_cast<double>(std::unique(vals.begin(), vals.end()) - vals.begin());
  }
  return prod * (static_cast<double>(r.size()) * len + len * std::pow(2.0, len) +
                 p.ell * std::pow(3.0, len));
}

// A candidate b is an image iff ell rows have pairwise disjoint
// disagreement sets with b, i.e. [len] splits into ell parts each containing
// some row's disagreement set.
TupleSet images_by_candidates(const PartialOp& p, const TupleSet& r) {
  int len = uniform_length(r);
  TupleSet out;
  if (r.empty()) return out;
  if (len == 0) return r;
  std::vector<std::vector<Element>> vals(len);
  for (int j = 0; j < len; ++j) {
    for (const auto& t : r) vals[j].push_back(t[j]);
    std::sort(vals[j].begin(), vals[j].end());
    vals[j].erase(std::unique(vals[j].begin(), vals[j].end()), vals[j].end());
  }
  std::uint32_t full = (1u << len) - 1;
  std::vector<char> ok(full + 1), g(full + 1), h(full + 1);
  std::vector<int> pos(len, 0);
  Tuple b(len);
  while (true) {
    for (int j = 0; j < len; ++j) b[j] = vals[j][pos[j]];
    std::fill(ok.begin(), ok.end(), 0);
    for (const auto& t : r) {
      std::uint32_t d = 0;
      for (int j = 0; j < len; ++j)
        if (t[j] != b[j]) d |= 1u << j;
      ok[d] = 1;
    }
    for (int i = 0; i < len; ++i)
      for (std::uint32_t s = 0; s <= full; ++s)
        if ((s >> i & 1) && ok[s ^ (1u << i)]) ok[s] = 1;
    bool hit = ok[0];
    if (!hit) {
      g = ok;
      for (int k = 1; k < p.ell; ++k) {
        std::fill(h.begin(), h.end(), 0);
        for (std::uint32_t s = 0; s <= full; ++s) {
          // h[s] = some submask t with ok[t] and g[s \ t]
          for (std::uint32_t t = s;; t = (t - 1) & s) {
            if (ok[t] && g[s ^ t]) {
              h[s] = 1;
              break;
            }
            if (t == 0) break;
          }
        }
        std::swap(g, h);
      }
      hit = g[full];
    }
    if (hit) out.push_back(b);
    int j = len - 1;
    while (j >= 0 && ++pos[j] == static_cast<int>(vals[j].size())) pos[j--] = 0;
    if (j < 0) break;
  }
  return out;
}

}  // namespace

TupleSet apply_to_relation(const PartialOp& p, const TupleSet& r, ImageStrategy strategy) {
  if (strategy == ImageStrategy::Auto)
    strategy = candidate_cost(p, r) < enumerate_cost(p, r) ? ImageStrategy::Candidates
                                                           : ImageStrategy::Enumerate;
  if (strategy == ImageStrategy::Candidates) {
    if (p.kind != OpKind::NearUnanimity)
      throw std::invalid_argument("candidate strategy needs a near-unanimity operation");
    return images_by_candidates(p, r);
  }
  TupleSet out;
  enumerate_images(p, r, [&](const Tuple& t) {
    out.push_back(t);
    return true;
  });
  sort_unique(out);
  return out;
}

Structure apply_to_structure(const PartialOp& p, const Structure& a) {
  Structure s = a;
  for (auto& rel : s.relations) rel = apply_to_relation(p, rel);
  return s;
}

bool relation_closed(const PartialOp& p, const TupleSet& r) {
  if (candidate_cost(p, r) < enumerate_cost(p, r)) {
    auto img = apply_to_relation(p, r, ImageStrategy::Candidates);
    return std::includes(r.begin(), r.end(), img.begin(), img.end());
  }
  TupleLookup look(r);
  return enumerate_images(p, r, [&](const Tuple& t) { return look.contains(t.data(), t.size()); });
}

bool is_partial_polymorphism(const PartialOp& p, const Structure& a) {
  for (const auto& rel : a.relations)
    if (!relation_closed(p, rel)) return false;
  return true;
}

TupleSet close_relation(const PartialOp& p, const TupleSet& r, int* passes) {
  TupleSet cur = r;
  sort_unique(cur);
  int n = 0;
  while (true) {
    ++n;
    auto img = apply_to_relation(p, cur);
    TupleSet next;
    std::set_union(cur.begin(), cur.end(), img.begin(), img.end(), std::back_inserter(next));
    if (next.size() == cur.size()) break;
    cur = std::move(next);
  }
  if (passes) *passes = n;
  return cur;
}

Structure close_structure(const PartialOp& p, const Structure& a, int* passes) {
  Structure s = a;
  int most = 0;
  for (auto& rel : s.relations) {
    int n = 0;
    rel = close_relation(p, rel, &n);
    most = std::max(most, n);
  }
  if (passes) *passes = most;
  return s;
}

TupleSet close_tuple_set_maltsev(const TupleSet& p) {
  return close_relation(PartialOp::maltsev(), p);
}

}  // namespace ppw
