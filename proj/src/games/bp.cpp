#include "games/bp.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <random>

namespace ppw {

namespace {

int mod(int x, int m) { return ((x % m) + m) % m; }

void add_shifts(std::vector<int>& into, const std::vector<int>& delta, int m) {
  for (std::size_t e = 0; e < into.size(); ++e) into[e] = mod(into[e] + delta[e], m);
}

std::string describe(const CFIStructure& s, const std::vector<int>& vars, const std::vector<Element>& atoms) {
  std::string out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) out += " ";
    out += var_name(vars[i]) + "=" + s.atom_name(atoms[i]);
  }
  return out;
}

}  // namespace

BPGame::BPGame(const CFIStructure& S, const CFIStructure& T, int k, int r)
    : S_(S), T_(T), k_(k), r_(r), chk_(S.structure, T.structure) {
  if (S.variant.kind == VariantKind::Maltsev || S.variant.name() != T.variant.name())
    throw std::invalid_argument("bijection game needs two NU instances of the same variant");
  if (S.graph.edges != T.graph.edges || S.atom_count() != T.atom_count())
    throw std::invalid_argument("instances differ in their base graph");
  if (r < 1 || r > k) throw std::invalid_argument("bijection game needs 1 <= r <= k");
}

BPMemory BPGame::initial() const { return {std::vector<int>(S_.graph.m(), 0), 0}; }

EdgeBijection BPGame::bijection(const BPMemory& mem) const { return cyclic_bijection(S_, mem.shifts); }

BPMemory BPGame::update(const BPMemory& mem, const Position& after) const {
  return respond(mem, pebble_classes(S_, assigned(after.alpha)));
}

BPMemory BPGame::respond(const BPMemory& mem, const PebbleClasses& pc) const {
  return respond(mem, pc, safe_vertices(S_, pc));
}

BPMemory BPGame::respond(const BPMemory& mem, const PebbleClasses& pc, const std::vector<char>& safe) const {
  const auto& g = S_.graph;
  int u = mem.bar;
  if (safe[u]) return mem;

  BPMemory next = mem;
  int sigma = 0;
  for (int e : g.incident[u]) sigma += mem.shifts[e];
  // shift still needed on E(u) for a local isomorphism at u
  int x = mod(S_.charge(u) - T_.charge(u) - sigma, 3);
  if (x == 0) {
    for (int v = 0; v < g.n(); ++v)
      if (safe[v]) {
        next.bar = v;
        return next;
      }
    throw NoSafeEscape("no safe vertex left");
  }

  int deg = static_cast<int>(g.incident[u].size());
  std::vector<int> held;  // pebbled vertex-atom classes at u
  for (int j = 0; j < S_.classes(); ++j)
    if (pc.held(u, j)) held.push_back(j);
  auto reach_from = [&](const std::vector<int>& positions) {
    PathRules rules;
    for (int d = 0; d < deg; ++d)
      if (std::find(positions.begin(), positions.end(), d) == positions.end()) rules.forbidden_first.insert(d);
    return pebble_free_reach(S_, u, pc, rules);
  };
  auto least_safe = [&](const std::vector<std::vector<int>>& parents) {
    for (int v = 0; v < g.n(); ++v) {
      if (v == u || !safe[v]) continue;
      bool all = true;
      for (const auto& p : parents) all = all && p[v] != -1;
      if (all) return v;
    }
    return -1;
  };

  std::vector<int> neutral;  // first positions that leave the held vertex atoms fixed
  for (int d = 0; d < deg; ++d)
    if (std::all_of(held.begin(), held.end(), [&](int j) { return S_.weights[j][d] % 3 == 0; }))
      neutral.push_back(d);
  if (!neutral.empty()) {
    auto parent = reach_from(neutral);
    int target = least_safe({parent});
    if (target >= 0) {
      add_shifts(next.shifts, path_shifts(S_, path_from_parents(parent, u, target), x), 3);
      next.bar = target;
      return next;
    }
  }

  // two paths whose effects on the held vertex atoms cancel
  std::vector<std::vector<int>> reach(deg);
  for (int d = 0; d < deg; ++d) reach[d] = reach_from({d});
  for (int d1 = 0; d1 < deg; ++d1)
    for (int d2 = d1 + 1; d2 < deg; ++d2)
      for (int b1 = 0; b1 < 3; ++b1) {
        int b2 = mod(x - b1, 3);
        bool cancels = std::all_of(held.begin(), held.end(), [&](int j) {
          return mod(S_.weights[j][d1] * b1 + S_.weights[j][d2] * b2, 3) == 0;
        });
        if (!cancels) continue;
        int target = least_safe({reach[d1], reach[d2]});
        if (target < 0) continue;
        add_shifts(next.shifts, path_shifts(S_, path_from_parents(reach[d1], u, target), b1), 3);
        add_shifts(next.shifts, path_shifts(S_, path_from_parents(reach[d2], u, target), b2), 3);
        next.bar = target;
        return next;
      }
  throw NoSafeEscape("no pebble-free escape from " + g.names[u]);
}

InvariantCheck BPGame::check_local(const BPMemory& mem) const {
  if (static_cast<int>(mem.shifts.size()) != S_.graph.m()) return InvariantCheck::fail("wrong number of shifts");
  if (mem.bar < 0 || mem.bar >= S_.graph.n()) return InvariantCheck::fail("bar vertex out of range");
  auto f = bijection(mem);
  if (!is_edge_preserving(S_, f)) return InvariantCheck::fail("bijection is not edge-preserving");
  for (int v = 0; v < S_.graph.n(); ++v)
    if (v != mem.bar && !is_local_isomorphism(f, v, S_, T_))
      return InvariantCheck::fail("not a local isomorphism at " + S_.graph.names[v]);
  return {};
}

InvariantCheck BPGame::check_invariant(const Position& pos, const BPMemory& mem) const {
  auto local = check_local(mem);
  if (!local.ok) return local;
  auto f = bijection(mem);
  for (int i = 0; i < pos.k(); ++i)
    if (pos.alpha[i] >= 0 && static_cast<long>(f(static_cast<Element>(pos.alpha[i]))) != pos.beta[i])
      return InvariantCheck::fail("bijection does not send alpha to beta at " + var_name(i));
  auto safe = safe_vertices(S_, assigned(pos.alpha));
  if (!safe[mem.bar]) return InvariantCheck::fail("bar vertex " + S_.graph.names[mem.bar] + " is not safe");
  return {};
}

RoundReport BPGame::verify_one_round(const Position& pos, const BPMemory& mem, std::uint64_t budget,
                                     std::uint64_t samples, std::uint64_t seed) const {
  RoundReport rep;
  const int N = static_cast<int>(S_.atom_count());
  const int C = N / 3;  // every class holds three atoms, id = atom / 3
  rep.move_space = move_space(k_, r_, N);
  rep.exhaustive = rep.move_space <= budget;
  const EdgeBijection f = bijection(mem);

  struct Resp {
    bool ok = true;
    std::string error;
    const EdgeBijection* next = nullptr;
  };
  std::map<BPMemory, std::pair<EdgeBijection, InvariantCheck>> next_cache;
  struct ClassesHash {
    std::size_t operator()(const std::vector<int>& v) const {
      std::size_t h = 1469598103934665603ull;
      for (int x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
      return h;
    }
  };
  std::unordered_map<std::vector<int>, Resp, ClassesHash> resp_cache;

  auto respond_to = [&](std::vector<int> classes) -> const Resp& {
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    auto it = resp_cache.find(classes);
    if (it != resp_cache.end()) return it->second;
    Resp resp;
    std::vector<Element> reps;
    for (int c : classes) reps.push_back(static_cast<Element>(c * 3));
    auto pc = pebble_classes(S_, reps);
    try {
      auto safe = safe_vertices(S_, pc);
      BPMemory m = respond(mem, pc, safe);
      auto nit = next_cache.find(m);
      if (nit == next_cache.end()) nit = next_cache.emplace(m, std::make_pair(bijection(m), check_local(m))).first;
      resp.next = &nit->second.first;
      if (!nit->second.second.ok) {
        resp.ok = false;
        resp.error = nit->second.second.reason;
      } else if (!safe[m.bar]) {
        resp.ok = false;
        resp.error = "new bar vertex is not safe";
      }
    } catch (const NoSafeEscape& e) {
      resp.ok = false;
      resp.error = e.what();
    }
    return resp_cache.emplace(std::move(classes), std::move(resp)).first->second;
  };

  Position after = pos;
  auto check_move = [&](const std::vector<int>& vars, const std::vector<Element>& atoms, const Resp& resp) {
    after = pos;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      after.alpha[vars[i]] = atoms[i];
      after.beta[vars[i]] = f(atoms[i]);
    }
    ++rep.checked;
    if (!resp.ok) {
      rep.violation(describe(S_, vars, atoms) + ": " + resp.error);
      return;
    }
    for (int i = 0; i < k_; ++i)
      if (after.alpha[i] >= 0 && static_cast<long>((*resp.next)(static_cast<Element>(after.alpha[i]))) != after.beta[i]) {
        rep.violation(describe(S_, vars, atoms) + ": updated bijection moves pebble " + var_name(i));
        return;
      }
    if (spoiler_wins_now(chk_, after)) rep.violation(describe(S_, vars, atoms) + ": Spoiler wins");
  };

  if (rep.exhaustive) {
    // Re-ordering the moved variables together with their elements gives the
    // same position, so every variable set is visited once in ascending order.
    for (unsigned mask = 1; mask < (1u << k_); ++mask) {
      std::vector<int> vars;
      std::vector<int> classes;
      for (int i = 0; i < k_; ++i) {
        if (mask >> i & 1) vars.push_back(i);
        else if (pos.alpha[i] >= 0) classes.push_back(static_cast<int>(pos.alpha[i] / 3));
      }
      int s = static_cast<int>(vars.size());
      if (s > r_) continue;
      std::size_t kept = classes.size();
      classes.resize(kept + s, 0);
      std::vector<Element> atoms(s);
      std::vector<int> val(s);
      while (true) {
        const Resp& resp = respond_to(classes);
        std::fill(val.begin(), val.end(), 0);
        while (true) {
          for (int i = 0; i < s; ++i) atoms[i] = static_cast<Element>(classes[kept + i] * 3 + val[i]);
          check_move(vars, atoms, resp);
          int i = s - 1;
          while (i >= 0 && ++val[i] == 3) val[i--] = 0;
          if (i < 0) break;
        }
        int i = s - 1;
        while (i >= 0 && ++classes[kept + i] == C) classes[kept + i--] = 0;
        if (i < 0) break;
      }
    }
    return rep;
  }

  std::mt19937_64 rng(seed);
  std::vector<double> weight;
  for (int s = 1; s <= r_; ++s) weight.push_back(static_cast<double>(move_space(k_, s, N) - move_space(k_, s - 1, N)));
  std::discrete_distribution<int> size_dist(weight.begin(), weight.end());
  std::uniform_int_distribution<int> atom_dist(0, N - 1);
  for (std::uint64_t t = 0; t < samples; ++t) {
    int s = size_dist(rng) + 1;
    std::vector<int> order(k_);
    for (int i = 0; i < k_; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> vars(order.begin(), order.begin() + s);
    std::vector<Element> atoms(s);
    for (auto& a : atoms) a = static_cast<Element>(atom_dist(rng));
    std::vector<char> moved(k_, 0);
    for (int y : vars) moved[y] = 1;
    std::vector<int> classes;
    for (int i = 0; i < k_; ++i)
      if (!moved[i] && pos.alpha[i] >= 0) classes.push_back(static_cast<int>(pos.alpha[i] / 3));
    for (Element a : atoms) classes.push_back(static_cast<int>(a / 3));
    check_move(vars, atoms, respond_to(classes));
  }
  return rep;
}

InvariantCheck check_invariant_bp(const BPGame& game, const Position& pos, const BPMemory& mem) {
  return game.check_invariant(pos, mem);
}

EdgeBijection duplicator_move_bp(const BPGame& game, const BPMemory& mem) { return game.bijection(mem); }

BPMemory duplicator_update_bp(const BPGame& game, const BPMemory& mem, const Position& after) {
  return game.update(mem, after);
}

RoundReport verify_one_round_bp(const BPGame& game, const Position& pos, const BPMemory& mem, std::uint64_t budget,
                                std::uint64_t seed, std::uint64_t samples) {
  return game.verify_one_round(pos, mem, budget, samples, seed);
}

}  // namespace ppw
