#include "structures/search.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace ppw {

namespace {

struct Constraint {
  std::vector<int> scope;       // A-variable per position
  const std::vector<int>* rows;  // flattened B relation, arity per row
  std::vector<int> table;       // surviving row indices
};

class Engine {
 public:
  Engine(const Structure& a, const Structure& b, const SearchConfig& cfg, const SearchOptions& opts)
      : a_(a), b_(b), cfg_(cfg), opts_(opts) {}

  SearchResult run() {
    SearchResult res;
    na_ = static_cast<int>(a_.size());
    nb_ = static_cast<int>(b_.size());
    w_ = std::max(1, (nb_ + 63) / 64);
    if (na_ == 0) {
      res.status = SearchStatus::Found;
      return res;
    }
    if (nb_ == 0 || (opts_.injective && na_ > nb_)) return res;

    std::vector<std::uint64_t> dom(static_cast<std::size_t>(na_) * w_, 0);
    for (int v = 0; v < na_; ++v) {
      auto it = opts_.domains.find(a_.universe[v]);
      if (it == opts_.domains.end()) {
        for (int x = 0; x < nb_; ++x) set_bit(dom, v, x);
      } else {
        for (auto e : it->second) {
          int x = b_index(e);
          if (x >= 0) set_bit(dom, v, x);
        }
      }
    }
    build_constraints(dom);
    if (infeasible_) return res;

    std::vector<int> all(cons_.size());
    for (std::size_t i = 0; i < cons_.size(); ++i) all[i] = static_cast<int>(i);
    bool ok = true;
    if (cfg_.propagation == Propagation::ArcConsistency) {
      ok = propagate(dom, all);
    } else {
      ok = check_injective(dom);
    }
    if (ok) {
      try {
        ok = dfs(dom);
      } catch (const Exhausted&) {
        res.status = SearchStatus::BudgetExhausted;
        res.nodes = nodes_;
        return res;
      }
    }
    res.nodes = nodes_;
    if (ok) {
      res.status = SearchStatus::Found;
      for (int v = 0; v < na_; ++v) res.map[a_.universe[v]] = b_.universe[first_bit(solution_, v)];
    }
    return res;
  }

 private:
  struct Exhausted {};

  int a_index(Element e) const {
    auto it = std::lower_bound(a_.universe.begin(), a_.universe.end(), e);
    return static_cast<int>(it - a_.universe.begin());
  }
  int b_index(Element e) const {
    auto it = std::lower_bound(b_.universe.begin(), b_.universe.end(), e);
    if (it == b_.universe.end() || *it != e) return -1;
    return static_cast<int>(it - b_.universe.begin());
  }

  bool test_bit(const std::vector<std::uint64_t>& d, int v, int x) const {
    return (d[static_cast<std::size_t>(v) * w_ + x / 64] >> (x % 64)) & 1u;
  }
  void set_bit(std::vector<std::uint64_t>& d, int v, int x) const {
    d[static_cast<std::size_t>(v) * w_ + x / 64] |= std::uint64_t{1} << (x % 64);
  }
  int count(const std::vector<std::uint64_t>& d, int v) const {
    int c = 0;
    for (int i = 0; i < w_; ++i) c += std::popcount(d[static_cast<std::size_t>(v) * w_ + i]);
    return c;
  }
  int first_bit(const std::vector<std::uint64_t>& d, int v) const {
    for (int i = 0; i < w_; ++i) {
      auto word = d[static_cast<std::size_t>(v) * w_ + i];
      if (word) return i * 64 + std::countr_zero(word);
    }
    return -1;
  }

  void build_constraints(const std::vector<std::uint64_t>& dom) {
    flat_.resize(b_.vocab.size());
    for (std::size_t r = 0; r < b_.vocab.size(); ++r)
      for (const auto& t : b_.relations[r])
        for (auto e : t) flat_[r].push_back(b_index(e));
    var_cons_.assign(na_, {});
    for (std::size_t r = 0; r < a_.vocab.size(); ++r) {
      int ar = a_.vocab[r].arity;
      int rows = static_cast<int>(b_.relations[r].size());
      for (const auto& t : a_.relations[r]) {
        Constraint c;
        for (auto e : t) c.scope.push_back(a_index(e));
        c.rows = &flat_[r];
        for (int row = 0; row < rows; ++row) {
          const int* vals = flat_[r].data() + static_cast<std::size_t>(row) * ar;
          bool ok = true;
          for (int p = 0; p < ar && ok; ++p) {
            if (!test_bit(dom, c.scope[p], vals[p])) ok = false;
            for (int q = 0; q < p && ok; ++q)
              if (c.scope[q] == c.scope[p] && vals[q] != vals[p]) ok = false;
          }
          if (ok) c.table.push_back(row);
        }
        if (c.table.empty()) {
          infeasible_ = true;
          return;
        }
        int id = static_cast<int>(cons_.size());
        std::vector<int> seen;
        for (int v : c.scope)
          if (std::find(seen.begin(), seen.end(), v) == seen.end()) {
            seen.push_back(v);
            var_cons_[v].push_back(id);
          }
        cons_.push_back(std::move(c));
      }
    }
  }

  // Generalized arc consistency over table constraints, plus the all-different
  // pruning of fixed values in injective mode.
  bool propagate(std::vector<std::uint64_t>& dom, const std::vector<int>& seed) {
    std::vector<char> queued(cons_.size(), 0);
    std::vector<int> queue;
    for (int c : seed)
      if (!queued[c]) {
        queued[c] = 1;
        queue.push_back(c);
      }
    std::vector<std::uint64_t> support;
    std::vector<int> changed;
    std::size_t head = 0;
    while (true) {
      if (head == queue.size()) {
        if (!opts_.injective) break;
        changed.clear();
        if (!alldiff(dom, changed)) return false;
        if (changed.empty()) break;
        for (int v : changed)
          for (int c2 : var_cons_[v])
            if (!queued[c2]) {
              queued[c2] = 1;
              queue.push_back(c2);
            }
        if (head == queue.size()) break;
      }
      int c = queue[head++];
      queued[c] = 0;
      const Constraint& con = cons_[c];
      int ar = static_cast<int>(con.scope.size());
      support.assign(static_cast<std::size_t>(ar) * w_, 0);
      const int* base = con.rows->data();
      for (int row : con.table) {
        const int* vals = base + static_cast<std::size_t>(row) * ar;
        bool ok = true;
        for (int p = 0; p < ar; ++p)
          if (!test_bit(dom, con.scope[p], vals[p])) {
            ok = false;
            break;
          }
        if (!ok) continue;
        for (int p = 0; p < ar; ++p)
          support[static_cast<std::size_t>(p) * w_ + vals[p] / 64] |= std::uint64_t{1} << (vals[p] % 64);
      }
      for (int p = 0; p < ar; ++p) {
        int v = con.scope[p];
        bool diff = false, empty = true;
        for (int i = 0; i < w_; ++i) {
          auto& word = dom[static_cast<std::size_t>(v) * w_ + i];
          auto nw = word & support[static_cast<std::size_t>(p) * w_ + i];
          if (nw != word) diff = true;
          word = nw;
          if (nw) empty = false;
        }
        if (empty) return false;
        if (diff)
          for (int c2 : var_cons_[v])
            if (c2 != c && !queued[c2]) {
              queued[c2] = 1;
              queue.push_back(c2);
            }
      }
    }
    return true;
  }

  // Removes every fixed value from the other domains until stable.
  bool alldiff(std::vector<std::uint64_t>& dom, std::vector<int>& changed) {
    bool again = true;
    std::vector<char> done(na_, 0);
    while (again) {
      again = false;
      for (int v = 0; v < na_; ++v) {
        if (done[v] || count(dom, v) != 1) continue;
        done[v] = 1;
        int x = first_bit(dom, v);
        for (int u = 0; u < na_; ++u) {
          if (u == v) continue;
          auto& word = dom[static_cast<std::size_t>(u) * w_ + x / 64];
          auto bit = std::uint64_t{1} << (x % 64);
          if (word & bit) {
            word &= ~bit;
            int c = count(dom, u);
            if (c == 0) return false;
            changed.push_back(u);
            if (c == 1) again = true;
          }
        }
      }
    }
    return true;
  }

  bool check_injective(const std::vector<std::uint64_t>& dom) const {
    if (!opts_.injective) return true;
    std::vector<char> used(nb_, 0);
    for (int v = 0; v < na_; ++v)
      if (count(dom, v) == 1) {
        int x = first_bit(dom, v);
        if (used[x]) return false;
        used[x] = 1;
      }
    return true;
  }

  // Plain backtracking: constraints are checked once fully instantiated.
  bool check_assigned(const std::vector<std::uint64_t>& dom, int v) const {
    for (int c : var_cons_[v]) {
      const Constraint& con = cons_[c];
      int ar = static_cast<int>(con.scope.size());
      bool full = true;
      for (int u : con.scope)
        if (count(dom, u) != 1) {
          full = false;
          break;
        }
      if (!full) continue;
      bool hit = false;
      for (int row : con.table) {
        const int* vals = con.rows->data() + static_cast<std::size_t>(row) * ar;
        bool ok = true;
        for (int p = 0; p < ar && ok; ++p)
          if (!test_bit(dom, con.scope[p], vals[p])) ok = false;
        if (ok) {
          hit = true;
          break;
        }
      }
      if (!hit) return false;
    }
    return check_injective(dom);
  }

  bool full_check(const std::vector<std::uint64_t>& dom) const {
    for (int v = 0; v < na_; ++v)
      if (!check_assigned(dom, v)) return false;
    return true;
  }

  bool dfs(const std::vector<std::uint64_t>& dom) {
    int pick = -1, best = 0;
    for (int v = 0; v < na_; ++v) {
      int c = count(dom, v);
      if (c <= 1) continue;
      if (cfg_.ordering == VarOrder::InputOrder) {
        pick = v;
        break;
      }
      if (pick < 0 || c < best) {
        pick = v;
        best = c;
      }
    }
    if (pick < 0) {
      if (!full_check(dom)) return false;
      solution_ = dom;
      return true;
    }
    for (int x = 0; x < nb_; ++x) {
      if (!test_bit(dom, pick, x)) continue;
      if (++nodes_ > cfg_.node_budget) throw Exhausted{};
      std::vector<std::uint64_t> next = dom;
      for (int i = 0; i < w_; ++i) next[static_cast<std::size_t>(pick) * w_ + i] = 0;
      set_bit(next, pick, x);
      bool ok = cfg_.propagation == Propagation::ArcConsistency ? propagate(next, var_cons_[pick])
                                                                  : check_assigned(next, pick);
      if (ok && dfs(next)) return true;
    }
    return false;
  }

  const Structure& a_;
  const Structure& b_;
  const SearchConfig& cfg_;
  const SearchOptions& opts_;
  int na_ = 0, nb_ = 0, w_ = 1;
  bool infeasible_ = false;
  std::vector<std::vector<int>> flat_;
  std::vector<Constraint> cons_;
  std::vector<std::vector<int>> var_cons_;
  std::vector<std::uint64_t> solution_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

SearchResult search_homomorphism(const Structure& a, const Structure& b, const SearchConfig& cfg,
                                 const SearchOptions& opts) {
  require_same_vocabulary(a, b);
  if (cfg.node_budget == 0) throw std::invalid_argument("node budget must be positive");
  return Engine(a, b, cfg, opts).run();
}

}  // namespace ppw
