#include "games/maltsev.hpp"

#include <algorithm>
#include <random>

#include "linalg/linalg.hpp"

namespace ppw {

namespace {

int mod(int x, int m) { return ((x % m) + m) % m; }

int apply_z4(Z4Mode mode, int c, int x) { return mod(mode == Z4Mode::Rotation ? x + c : c - x, 4); }

void add_shifts(std::vector<int>& into, const std::vector<int>& delta) {
  for (std::size_t e = 0; e < into.size(); ++e) into[e] = mod(into[e] + delta[e], 4);
}

PebbleClasses edge_pebbles(const CFIStructure& s, const std::vector<char>& edges) {
  PebbleClasses p;
  p.edge = edges;
  p.classes = s.classes();
  return p;
}

bool edges_free(const BaseGraph& g, int v, const std::vector<char>& pebbled) {
  for (int e : g.incident[v])
    if (pebbled[e]) return false;
  return true;
}

std::string describe(const CFIStructure& s, SpoilerSide side, const std::vector<int>& vars,
                     const std::vector<Element>& atoms) {
  std::string out = side == SpoilerSide::A ? "A:" : "B:";
  for (std::size_t i = 0; i < vars.size(); ++i) out += " " + var_name(vars[i]) + "=" + s.atom_name(atoms[i]);
  return out;
}

template <class Fn>
void for_each_tuple(int s, int base, std::vector<Element>& out, Fn&& fn) {
  out.assign(s, 0);
  while (true) {
    if (!fn()) return;
    int i = s - 1;
    while (i >= 0 && ++out[i] == static_cast<Element>(base)) out[i--] = 0;
    if (i < 0) return;
  }
}

}  // namespace

MaltsevMemory invert(const MaltsevMemory& m) {
  MaltsevMemory out = m;
  if (m.mode == Z4Mode::Rotation)
    for (int& c : out.shifts) c = mod(-c, 4);
  return out;
}

struct MaltsevGame::Cache {
  struct Escape {
    bool ok = true;
    std::string error;
    MaltsevMemory next;
  };
  const MaltsevGame& game;
  std::map<MaltsevMemory, EdgeBijection> fwd, bwd;
  std::map<MaltsevMemory, InvariantCheck> local;
  std::map<std::pair<int, std::vector<char>>, std::map<MaltsevMemory, Escape>> escapes;
  std::map<std::vector<long>, bool> rounds;

  const EdgeBijection& forward(const MaltsevMemory& m) {
    auto it = fwd.find(m);
    if (it == fwd.end()) it = fwd.emplace(m, game.bijection(m)).first;
    return it->second;
  }
  const EdgeBijection& backward(const MaltsevMemory& m) {
    auto it = bwd.find(m);
    if (it == bwd.end()) it = bwd.emplace(m, inverse(game.bijection(m))).first;
    return it->second;
  }
  const InvariantCheck& local_check(const MaltsevMemory& m) {
    auto it = local.find(m);
    if (it == local.end()) it = local.emplace(m, game.check_local(m)).first;
    return it->second;
  }
  const Escape& escape(const MaltsevMemory& m, SpoilerSide side, const std::vector<char>& pebbled) {
    auto& inner = escapes[{side == SpoilerSide::A ? 0 : 1, pebbled}];
    auto it = inner.find(m);
    if (it != inner.end()) return it->second;
    Escape out;
    try {
      MaltsevMemory g = side == SpoilerSide::A ? m : invert(m);
      MaltsevMemory n = game.escape(g, pebbled);
      out.next = side == SpoilerSide::A ? n : invert(n);
    } catch (const NoSafeEscape& e) {
      out.ok = false;
      out.error = e.what();
    }
    return inner.emplace(m, std::move(out)).first->second;
  }
  // Full invariant at `after`, with the bijection-only part cached.
  std::string invariant(const Position& after, const MaltsevMemory& next) {
    const auto& loc = local_check(next);
    if (!loc.ok) return loc.reason;
    const auto& g = game.S().graph;
    std::vector<char> pebbled(g.m(), 0);
    for (Element x : assigned(after.alpha)) pebbled[x / 4] = 1;
    if (!edges_free(g, next.bar, pebbled)) return "an edge at the bar vertex carries a pebble";
    const auto& f = forward(next);
    for (int i = 0; i < after.k(); ++i)
      if (after.alpha[i] >= 0 && static_cast<long>(f(static_cast<Element>(after.alpha[i]))) != after.beta[i])
        return "bijection does not send alpha to beta at " + var_name(i);
    return "";
  }
};

MaltsevGame::MaltsevGame(const CFIStructure& S, const CFIStructure& T, int k)
    : S_(S), T_(T), k_(k), chk_(S.structure, T.structure) {
  if (S.variant.kind != VariantKind::Maltsev || T.variant.kind != VariantKind::Maltsev)
    throw std::invalid_argument("Maltsev game needs two Maltsev instances");
  if (S.graph.edges != T.graph.edges) throw std::invalid_argument("instances differ in their base graph");
  if (k < 1) throw std::invalid_argument("Maltsev game needs k >= 1");
}

MaltsevGame::~MaltsevGame() = default;

MaltsevMemory MaltsevGame::initial() const { return {Z4Mode::Rotation, std::vector<int>(S_.graph.m(), 0), 0}; }

EdgeBijection MaltsevGame::bijection(const MaltsevMemory& mem) const {
  return z4_bijection(S_, mem.mode, mem.shifts);
}

MaltsevMemory MaltsevGame::escape(const MaltsevMemory& g, const std::vector<char>& pebbled) const {
  const auto& G = S_.graph;
  int w = g.bar;
  if (edges_free(G, w, pebbled)) return g;
  // +2 = -2 over Z4, so a single path carries the correction
  auto parent = pebble_free_reach(S_, w, edge_pebbles(S_, pebbled));
  for (int v = 0; v < G.n(); ++v) {
    if (v == w || parent[v] == -1 || !edges_free(G, v, pebbled)) continue;
    MaltsevMemory next = g;
    add_shifts(next.shifts, path_shifts(S_, path_from_parents(parent, w, v), 2));
    next.bar = v;
    return next;
  }
  throw NoSafeEscape("no pebble-free escape from " + G.names[w]);
}

MaltsevMemory MaltsevGame::double_escape(const MaltsevMemory& g, const std::vector<char>& pebbled, int e1, int e2,
                                         int delta) const {
  const auto& G = S_.graph;
  int w = g.bar;
  PathRules rules;
  rules.avoid_vertex.assign(G.n(), 0);
  rules.avoid_vertex[w] = 1;
  auto pc = edge_pebbles(S_, pebbled);
  int y1 = G.other(e1, w), y2 = G.other(e2, w);
  auto p1 = pebble_free_reach(S_, y1, pc, rules);
  auto p2 = pebble_free_reach(S_, y2, pc, rules);
  for (int v = 0; v < G.n(); ++v) {
    if (v == w || p1[v] == -1 || p2[v] == -1 || !edges_free(G, v, pebbled)) continue;
    MaltsevMemory next = g;
    for (auto [y, parent] : {std::pair{y1, &p1}, std::pair{y2, &p2}}) {
      std::vector<int> path{w};
      for (int x : path_from_parents(*parent, y, v)) path.push_back(x);
      add_shifts(next.shifts, path_shifts(S_, path, delta));
    }
    next.bar = v;
    return next;
  }
  throw NoSafeEscape("no pair of escape paths from " + G.names[w]);
}

MaltsevMemory MaltsevGame::invert_mode(const MaltsevMemory& g, const std::vector<char>& pebbled,
                                       const std::vector<Element>& atoms, int entry, int delta) const {
  const auto& G = S_.graph;
  int w = g.bar;
  MaltsevMemory next;
  next.mode = g.mode == Z4Mode::Rotation ? Z4Mode::Reflection : Z4Mode::Rotation;
  int target = -1;
  for (int v = 0; v < G.n() && target < 0; ++v)
    if (v != w && G.edge_index(v, w) < 0) target = v;
  if (target < 0) throw NoSafeEscape("every vertex is adjacent to " + G.names[w]);
  // shift sums that make every gadget a local isomorphism in the new mode
  std::vector<int> need(G.n());
  for (int v = 0; v < G.n(); ++v)
    need[v] = mod(2 * (S_.charge(v) + T_.charge(v)) + (next.mode == Z4Mode::Reflection ? 1 : 0), 4);
  next.shifts = near_solution(G, need, 4, target);
  next.bar = target;

  std::vector<int> fixed(G.m(), -1);
  for (std::size_t t = 0; t < atoms.size(); ++t) {
    int e = static_cast<int>(atoms[t] / 4), a = static_cast<int>(atoms[t] % 4);
    int ga = apply_z4(g.mode, g.shifts[e], a);
    // x -> -g(x) + 2 g(a) (+ delta on the picked entry), read off at x = 0
    fixed[e] = mod(-apply_z4(g.mode, g.shifts[e], 0) + 2 * ga + (static_cast<int>(t) == entry ? delta : 0), 4);
  }
  PathRules rules;
  rules.avoid_vertex.assign(G.n(), 0);
  rules.avoid_vertex[w] = 1;
  auto pc = edge_pebbles(S_, pebbled);
  for (int e : G.incident[w]) {
    int d = mod(fixed[e] - next.shifts[e], 4);
    next.shifts[e] = fixed[e];
    if (d == 0) continue;
    int v = G.other(e, w);
    auto path = pebble_free_path(S_, v, target, pc, rules);
    if (!path) throw NoSafeEscape("cannot repair " + G.names[v]);
    add_shifts(next.shifts, path_shifts(S_, *path, -d));
  }
  return next;
}

MaltsevReply MaltsevGame::respond(const MaltsevMemory& mem, const Position& pos, SpoilerSide side,
                                  const std::vector<int>& vars, const std::vector<Element>& atoms) const {
  const auto& G = S_.graph;
  if (vars.empty() || vars.size() != atoms.size() || static_cast<int>(vars.size()) > k_)
    throw std::invalid_argument("Spoiler moves between 1 and k variables, one element each");
  std::vector<char> moved(k_, 0);
  for (int y : vars) {
    if (y < 0 || y >= k_ || moved[y]) throw std::invalid_argument("variables must be distinct and in range");
    moved[y] = 1;
  }
  for (Element a : atoms)
    if (a >= S_.atom_count()) throw std::invalid_argument("element out of range");

  MaltsevMemory g = side == SpoilerSide::A ? mem : invert(mem);
  Tuple img;
  for (Element a : atoms)
    img.push_back(S_.edge_atom(static_cast<int>(a / 4), apply_z4(g.mode, g.shifts[a / 4], static_cast<int>(a % 4))));
  const auto& xs = side == SpoilerSide::A ? pos.alpha : pos.beta;
  std::vector<char> pebbled(G.m(), 0);
  for (int i = 0; i < k_; ++i)
    if (!moved[i] && xs[i] >= 0) pebbled[xs[i] / 4] = 1;
  for (Element a : atoms) pebbled[a / 4] = 1;

  auto back = [&](MaltsevMemory m) { return side == SpoilerSide::A ? m : invert(m); };
  MaltsevReply reply;
  int w = g.bar;
  if (!edges_free(G, w, pebbled) && std::all_of(G.incident[w].begin(), G.incident[w].end(), [&](int e) { return pebbled[e]; })) {
    // every edge at w is now pebbled, necessarily by this move
    std::vector<int> hit;
    for (Element a : atoms) hit.push_back(static_cast<int>(a / 4));
    std::sort(hit.begin(), hit.end());
    std::vector<int> ew = G.incident[w];
    std::sort(ew.begin(), ew.end());
    if (hit != ew) throw std::logic_error("edges at the bar vertex were pebbled before this move");
    int theta = 0;
    for (Element b : img) theta += static_cast<int>(b % 4);
    int delta = theta % 2 ? 1 : 3;
    auto bump = [&](std::initializer_list<int> entries) {
      Tuple t = img;
      for (int i : entries) t[i] = S_.edge_atom(static_cast<int>(t[i] / 4), mod(static_cast<int>(t[i] % 4) + delta, 4));
      return t;
    };
    reply.P = {bump({0}), bump({0, 1}), bump({1})};
    int e1 = static_cast<int>(atoms[0] / 4), e2 = static_cast<int>(atoms[1] / 4);
    reply.next = {back(invert_mode(g, pebbled, atoms, 0, delta)), back(double_escape(g, pebbled, e1, e2, delta)),
                  back(invert_mode(g, pebbled, atoms, 1, delta))};
    return reply;
  }
  reply.P = {img};
  reply.next = {back(escape(g, pebbled))};
  return reply;
}

Position MaltsevGame::apply(const Position& pos, SpoilerSide side, const std::vector<int>& vars,
                            const std::vector<Element>& atoms, const Tuple& pick) const {
  if (vars.size() != atoms.size() || pick.size() != atoms.size())
    throw std::invalid_argument("tuple lengths differ");
  Position out = pos;
  auto& mine = side == SpoilerSide::A ? out.alpha : out.beta;
  auto& theirs = side == SpoilerSide::A ? out.beta : out.alpha;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    mine[vars[i]] = atoms[i];
    theirs[vars[i]] = pick[i];
  }
  return out;
}

InvariantCheck MaltsevGame::check_local(const MaltsevMemory& mem) const {
  const auto& G = S_.graph;
  if (static_cast<int>(mem.shifts.size()) != G.m()) return InvariantCheck::fail("wrong number of shifts");
  if (mem.bar < 0 || mem.bar >= G.n()) return InvariantCheck::fail("bar vertex out of range");
  auto f = bijection(mem);
  PermKind want = mem.mode == Z4Mode::Rotation ? PermKind::Rotation : PermKind::Reflection;
  for (int e = 0; e < G.m(); ++e)
    if (classify_permutation_z4(edge_permutation(S_, f, e)).kind != want)
      return InvariantCheck::fail("mixed rotation and reflection edges");
  for (int v = 0; v < G.n(); ++v) {
    auto effect = classify_gadget_map(f, v, S_, T_).effect;
    if (v == mem.bar && effect != RelationEffect::Swaps)
      return InvariantCheck::fail("shift sum at the bar vertex is not exactly 2 off");
    if (v != mem.bar && effect != RelationEffect::Preserves)
      return InvariantCheck::fail("not a local isomorphism at " + G.names[v]);
  }
  return {};
}

InvariantCheck MaltsevGame::check_invariant(const Position& pos, const MaltsevMemory& mem) const {
  Cache cache{*this, {}, {}, {}, {}, {}};
  auto why = cache.invariant(pos, mem);
  return why.empty() ? InvariantCheck{} : InvariantCheck::fail(why);
}

template <class Visit>
void MaltsevGame::play_move(Cache& cache, const MaltsevMemory& mem, const Position& pos, SpoilerSide side,
                            const std::vector<int>& vars, const std::vector<Element>& atoms, bool invariant,
                            Visit&& visit) const {
  const auto& G = S_.graph;
  const auto& g = side == SpoilerSide::A ? cache.forward(mem) : cache.backward(mem);
  Tuple img(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) img[i] = g(atoms[i]);

  const auto& xs = side == SpoilerSide::A ? pos.alpha : pos.beta;
  std::vector<char> pebbled(G.m(), 0);
  for (int i = 0; i < k_; ++i)
    if (xs[i] >= 0 && std::find(vars.begin(), vars.end(), i) == vars.end()) pebbled[xs[i] / 4] = 1;
  for (Element a : atoms) pebbled[a / 4] = 1;
  bool open = false;
  for (int e : G.incident[mem.bar]) open = open || !pebbled[e];

  if (open) {
    const auto& esc = cache.escape(mem, side, pebbled);
    Position after = apply(pos, side, vars, atoms, img);
    std::string problem;
    if (!esc.ok) problem = esc.error;
    else if (invariant) problem = cache.invariant(after, esc.next);
    if (problem.empty() && spoiler_wins_now(chk_, after)) problem = "Spoiler wins";
    visit(after, esc.ok ? &esc.next : nullptr, problem);
    return;
  }
  MaltsevReply reply;
  try {
    reply = respond(mem, pos, side, vars, atoms);
  } catch (const std::exception& e) {
    visit(pos, nullptr, std::string(e.what()));
    return;
  }
  for (std::size_t j = 0; j < reply.P.size(); ++j) {
    std::string problem;
    if (!maltsev_validate_duplicator(img, reply.P)) problem = "image not in the closure of P";
    Position after = apply(pos, side, vars, atoms, reply.P[j]);
    if (problem.empty() && invariant) problem = cache.invariant(after, reply.next[j]);
    if (problem.empty() && spoiler_wins_now(chk_, after)) problem = "Spoiler wins";
    visit(after, &reply.next[j], problem);
  }
}

RoundReport MaltsevGame::verify_one_round(const Position& pos, const MaltsevMemory& mem, std::uint64_t budget,
                                          std::uint64_t samples, std::uint64_t seed) const {
  RoundReport rep;
  const int N = static_cast<int>(S_.atom_count());
  rep.move_space = 2 * move_space(k_, k_, N);
  rep.exhaustive = rep.move_space <= budget;
  Cache cache{*this, {}, {}, {}, {}, {}};
  std::vector<int> vars;
  std::vector<Element> atoms;
  SpoilerSide side = SpoilerSide::A;
  auto visit = [&](const Position&, const MaltsevMemory*, const std::string& problem) {
    ++rep.checked;
    if (!problem.empty()) rep.violation(describe(S_, side, vars, atoms) + ": " + problem);
  };
  if (rep.exhaustive) {
    for (SpoilerSide sd : {SpoilerSide::A, SpoilerSide::B}) {
      side = sd;
      for (unsigned mask = 1; mask < (1u << k_); ++mask) {
        vars.clear();
        for (int i = 0; i < k_; ++i)
          if (mask >> i & 1) vars.push_back(i);
        for_each_tuple(static_cast<int>(vars.size()), N, atoms, [&] {
          play_move(cache, mem, pos, side, vars, atoms, true, visit);
          return true;
        });
      }
    }
    return rep;
  }
  std::mt19937_64 rng(seed);
  std::vector<double> weight;
  for (int s = 1; s <= k_; ++s) weight.push_back(static_cast<double>(move_space(k_, s, N) - move_space(k_, s - 1, N)));
  std::discrete_distribution<int> size_dist(weight.begin(), weight.end());
  std::uniform_int_distribution<int> atom_dist(0, N - 1);
  for (std::uint64_t t = 0; t < samples; ++t) {
    side = rng() % 2 ? SpoilerSide::B : SpoilerSide::A;
    int s = size_dist(rng) + 1;
    std::vector<int> order(k_);
    for (int i = 0; i < k_; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    vars.assign(order.begin(), order.begin() + s);
    atoms.resize(s);
    for (auto& a : atoms) a = static_cast<Element>(atom_dist(rng));
    play_move(cache, mem, pos, side, vars, atoms, true, visit);
  }
  return rep;
}

bool MaltsevGame::round_survives(Cache& cache, const MaltsevMemory& mem, const Position& pos, SpoilerSide side,
                                 unsigned mask, TreeResult& out) const {
  // what happens this round depends on the memory and the pebbles that stay
  std::vector<long> key{static_cast<long>(mem.mode), mem.bar, side == SpoilerSide::A ? 0 : 1, static_cast<long>(mask)};
  key.insert(key.end(), mem.shifts.begin(), mem.shifts.end());
  std::vector<int> vars;
  for (int i = 0; i < k_; ++i) {
    if (mask >> i & 1) {
      vars.push_back(i);
    } else {
      key.push_back(pos.alpha[i]);
      key.push_back(pos.beta[i]);
    }
  }
  auto it = cache.rounds.find(key);
  if (it != cache.rounds.end()) {
    ++out.memo_hits;
    return it->second;
  }
  bool ok = true;
  std::vector<Element> atoms;
  for_each_tuple(static_cast<int>(vars.size()), static_cast<int>(S_.atom_count()), atoms, [&] {
    play_move(cache, mem, pos, side, vars, atoms, false, [&](const Position&, const MaltsevMemory*, const std::string& p) {
      ++out.positions;
      if (!p.empty() && ok) {
        ok = false;
        out.failure = describe(S_, side, vars, atoms) + ": " + p;
      }
    });
    return ok;
  });
  cache.rounds.emplace(std::move(key), ok);
  return ok;
}

void MaltsevGame::explore_rec(Cache& cache, const MaltsevMemory& mem, const Position& pos, int depth,
                              TreeResult& out) const {
  if (depth <= 0 || !out.survived) return;
  for (SpoilerSide side : {SpoilerSide::A, SpoilerSide::B})
    for (unsigned mask = 1; mask < (1u << k_); ++mask) {
      if (!out.survived) return;
      if (depth == 1) {
        if (!round_survives(cache, mem, pos, side, mask, out)) out.survived = false;
        continue;
      }
      std::vector<int> vars;
      for (int i = 0; i < k_; ++i)
        if (mask >> i & 1) vars.push_back(i);
      std::vector<Element> atoms;
      for_each_tuple(static_cast<int>(vars.size()), static_cast<int>(S_.atom_count()), atoms, [&] {
        play_move(cache, mem, pos, side, vars, atoms, false,
                  [&](const Position& after, const MaltsevMemory* next, const std::string& p) {
                    if (!out.survived) return;
                    ++out.positions;
                    if (!p.empty()) {
                      out.survived = false;
                      out.failure = describe(S_, side, vars, atoms) + ": " + p;
                      return;
                    }
                    explore_rec(cache, *next, after, depth - 1, out);
                  });
        return out.survived;
      });
    }
}

MaltsevGame::TreeResult MaltsevGame::explore(const Position& pos, const MaltsevMemory& mem, int depth) const {
  TreeResult out;
  Cache cache{*this, {}, {}, {}, {}, {}};
  if (spoiler_wins_now(chk_, pos)) {
    out.survived = false;
    out.failure = "start position is not a partial isomorphism";
    return out;
  }
  explore_rec(cache, mem, pos, depth, out);
  return out;
}

InvariantCheck check_invariant_maltsev(const MaltsevGame& game, const Position& pos, const MaltsevMemory& mem) {
  return game.check_invariant(pos, mem);
}

MaltsevReply duplicator_move_maltsev(const MaltsevGame& game, const MaltsevMemory& mem, const Position& pos,
                                     SpoilerSide side, const std::vector<int>& vars, const std::vector<Element>& atoms) {
  return game.respond(mem, pos, side, vars, atoms);
}

RoundReport verify_one_round_maltsev(const MaltsevGame& game, const Position& pos, const MaltsevMemory& mem,
                                     std::uint64_t budget, std::uint64_t seed, std::uint64_t samples) {
  return game.verify_one_round(pos, mem, budget, samples, seed);
}

}  // namespace ppw
