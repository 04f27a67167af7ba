#include "checks.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <set>

#include "csp/csp.hpp"
#include "partial_poly/arity.hpp"
#include "partial_poly/partial_op.hpp"
#include "structures/iso.hpp"
#include "templates/templates.hpp"

namespace ppw {

using nlohmann::json;

namespace {

int mod(int x, int m) { return ((x % m) + m) % m; }

// Every tuple over {0..n-1} of the given arity enters with probability p.
TupleSet random_relation(std::mt19937_64& rng, int arity, Element n, double p) {
  std::bernoulli_distribution coin(p);
  TupleSet out;
  Tuple t(arity, 0);
  while (true) {
    if (coin(rng)) out.push_back(t);
    int i = arity - 1;
    while (i >= 0 && ++t[i] == n) t[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

Structure random_structure(std::mt19937_64& rng, const Vocabulary& voc, std::size_t n, double p) {
  Structure s = empty_structure(voc, n);
  for (std::size_t r = 0; r < voc.size(); ++r) s.relations[r] = random_relation(rng, voc[r].arity, static_cast<Element>(n), p);
  s.normalize();
  return s;
}

// Odometer over index tuples into `size` rows; checks every column-wise image.
std::uint64_t rows_checked(const PartialOp& op, const TupleSet& r, CheckReport& rep, const std::string& rel) {
  if (r.empty()) return 0;
  int k = op.arity();
  std::vector<std::size_t> idx(k, 0);
  std::vector<Tuple> rows(k);
  std::uint64_t n = 0;
  while (true) {
    for (int i = 0; i < k; ++i) rows[i] = r[idx[i]];
    ++n;
    auto t = apply_columnwise(op, rows);
    if (t && !contains_tuple(r, *t)) rep.fail(rel + ": image of a row tuple leaves the relation");
    int i = k - 1;
    while (i >= 0 && ++idx[i] == r.size()) idx[i--] = 0;
    if (i < 0) break;
  }
  return n;
}

bool brute_solvable(const LinearSystem& sys) {
  std::vector<int> x(sys.vars.size(), 0);
  while (true) {
    if (sys.satisfied_by(x)) return true;
    int j = static_cast<int>(x.size()) - 1;
    while (j >= 0 && ++x[j] == sys.modulus) x[j--] = 0;
    if (j < 0) return false;
  }
}

// Relation-wise image of the gadget tuples at v (charge s in `from`) lies
// in the gadget tuples of `to` (charge t), with relation i sent to rel_map[i].
bool gadget_maps(const CFIStructure& from, int s, const CFIStructure& to, int t, const EdgeBijection& f, int v,
                 const std::vector<int>& rel_map) {
  std::set<std::pair<int, Tuple>> target;
  for (auto& rt : to.gadget_tuples(v, t)) target.insert(rt);
  for (auto& [rel, tup] : from.gadget_tuples(v, s)) {
    Tuple img;
    for (Element x : tup) img.push_back(f(x));
    if (!target.count({rel_map[rel], img})) return false;
  }
  return true;
}

std::vector<int> local_shifts(const CFIStructure& s, int v, const std::vector<int>& local) {
  std::vector<int> out(s.graph.m(), 0);
  for (std::size_t i = 0; i < local.size(); ++i) out[s.graph.incident[v][i]] = local[i];
  return out;
}

}  // namespace

void CheckReport::fail(const std::string& what) {
  ++violation_count;
  if (violations.size() < 10) violations.push_back(what);
}

void CheckReport::absorb(const CheckReport& other) {
  checked += other.checked;
  exhaustive = exhaustive && other.exhaustive;
  for (const auto& v : other.violations) fail(other.name + ": " + v);
  violation_count += other.violation_count - other.violations.size();
}

json CheckReport::to_json() const {
  return {{"check", name},        {"ok", ok()},
          {"coverage", exhaustive ? "exhaustive" : "sampled"},
          {"checked", checked},   {"violations", violation_count},
          {"examples", violations}, {"details", details}};
}

CheckReport from_lemma(const LemmaReport& r) {
  CheckReport rep;
  rep.name = r.lemma;
  rep.checked = r.checked;
  for (const auto& v : r.violations) rep.fail(v);
  rep.details = {{"applicable", r.applicable}, {"internal_checks", r.internal}};
  return rep;
}

CheckReport check_poly_closed(int ell) {
  CheckReport rep;
  rep.name = "poly-closed:" + std::to_string(ell);
  auto b = template_nu(ell);
  auto op = PartialOp::nu(ell);
  json per = json::object();
  for (std::size_t r = 0; r < b.relations.size(); ++r) {
    auto n = rows_checked(op, b.relations[r], rep, b.vocab[r].name);
    per[b.vocab[r].name] = n;
    rep.checked += n;
  }
  bool agrees = is_partial_polymorphism(op, b) == rep.ok();
  if (!agrees) rep.fail("is_partial_polymorphism disagrees with the row enumeration");
  rep.details = {{"row_tuples", per}};
  return rep;
}

CheckReport check_poly_closed_star(int r, int ell, std::uint64_t limit, std::uint64_t samples, std::uint64_t seed) {
  CheckReport rep;
  rep.name = "poly-closed-star:" + std::to_string(r) + "," + std::to_string(ell);
  auto b = template_nu_star(r, ell);
  auto op = PartialOp::nu(ell);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < b.relations.size(); ++i) {
    const auto& rel = b.relations[i];
    std::uint64_t total = 1;
    for (int j = 0; j < ell && total <= limit; ++j) total *= rel.size();
    if (total <= limit) {
      rep.checked += rows_checked(op, rel, rep, b.vocab[i].name);
      continue;
    }
    rep.exhaustive = false;
    std::uniform_int_distribution<std::size_t> pick(0, rel.size() - 1);
    std::vector<Tuple> rows(ell);
    for (std::uint64_t s = 0; s < samples; ++s) {
      for (auto& row : rows) row = rel[pick(rng)];
      auto t = apply_columnwise(op, rows);
      if (t && !contains_tuple(rel, *t)) rep.fail(b.vocab[i].name + ": sampled row tuple leaves the relation");
      ++rep.checked;
    }
  }
  rep.details = {{"arity", b.vocab[0].arity}, {"seed", seed}, {"samples_per_relation", samples}};
  return rep;
}

CheckReport check_arity_trick(int per_config, std::uint64_t seed) {
  CheckReport rep;
  rep.name = "arity-trick";
  rep.exhaustive = false;
  std::mt19937_64 rng(seed);
  for (auto [ell, r] : {std::pair{3, 3}, {3, 4}, {4, 5}}) {
    for (int it = 0; it < per_config; ++it) {
      Element d = 2 + rng() % 2;
      auto rel = close_relation(PartialOp::nu(ell), random_relation(rng, r, d, 0.1));
      std::vector<Element> dom;
      for (Element x = 0; x < d; ++x) dom.push_back(x);
      ++rep.checked;
      if (!verify_arity_trick(rel, r, dom, ell, default_division(r, ell)))
        rep.fail("(ell,r)=(" + std::to_string(ell) + "," + std::to_string(r) + ") relation " + std::to_string(it));
    }
  }
  rep.details = {{"seed", seed}, {"per_config", per_config}};
  return rep;
}

CheckReport check_csp_reduction(int per_config, std::uint64_t seed) {
  CheckReport rep;
  rep.name = "csp-reduction";
  rep.exhaustive = false;
  std::mt19937_64 rng(seed);
  SearchConfig cfg;
  int sat = 0;
  for (auto [ell, r] : {std::pair{3, 3}, {3, 4}, {4, 4}}) {
    auto div = default_division(r, ell);
    for (int it = 0; it < per_config; ++it) {
      Vocabulary voc{{"R", r}, {"S", r}};
      auto a = random_structure(rng, voc, 3 + rng() % 2, 0.04);
      auto b = close_structure(PartialOp::nu(ell), random_structure(rng, voc, 2 + rng() % 2, 0.12));
      bool direct = search_homomorphism(a, b, cfg).status == SearchStatus::Found;
      bool starred = search_homomorphism(star_operator(a, div), star_operator(b, div), cfg).status == SearchStatus::Found;
      ++rep.checked;
      sat += direct;
      if (direct != starred)
        rep.fail("(ell,r)=(" + std::to_string(ell) + "," + std::to_string(r) + ") pair " + std::to_string(it));
    }
  }
  rep.details = {{"seed", seed}, {"satisfiable", sat}};
  return rep;
}

CheckReport check_hypergraph_reduction(int per_config, std::uint64_t seed) {
  CheckReport rep;
  rep.name = "hypergraph-reduction";
  rep.exhaustive = false;
  std::mt19937_64 rng(seed);
  json yes = json::object();
  for (auto [r, m] : {std::pair{3, 2}, {3, 3}, {4, 3}}) {
    auto h = uniform_hypergraph(r, m);
    auto k = clique_template(m);
    int colourable = 0;
    for (int it = 0; it < per_config; ++it) {
      std::size_t n = 2 + rng() % 5;
      Structure a = empty_structure({{"R", r}}, n);
      int tuples = static_cast<int>(rng() % 6);
      for (int t = 0; t < tuples; ++t) {
        Tuple tup(r);
        for (auto& e : tup) e = static_cast<Element>(rng() % n);
        a.relations[0].push_back(tup);
      }
      a.normalize();
      bool direct = csp_member(a, h);
      ++rep.checked;
      colourable += direct;
      if (direct != csp_member(hypergraph_to_graph(a), k))
        rep.fail("(r,m)=(" + std::to_string(r) + "," + std::to_string(m) + ") structure " + std::to_string(it));
    }
    yes[std::to_string(r) + "," + std::to_string(m)] = colourable;
  }
  rep.details = {{"seed", seed}, {"colourable", yes}};
  return rep;
}

CheckReport check_linear_solver(int per_modulus, std::uint64_t seed) {
  CheckReport rep;
  rep.name = "tseitin";
  rep.exhaustive = false;
  std::mt19937_64 rng(seed);
  for (int m : {2, 3, 4})
    for (int it = 0; it < per_modulus; ++it) {
      LinearSystem sys;
      sys.modulus = m;
      int n = 1 + static_cast<int>(rng() % 8);
      int eqs = 1 + static_cast<int>(rng() % 8);
      for (int v = 0; v < n; ++v) sys.vars.push_back("x" + std::to_string(v));
      for (int i = 0; i < eqs; ++i) {
        LinearSystem::Equation eq;
        for (int v = 0; v < n; ++v)
          if (rng() % 3 == 0) eq.coeffs[v] = static_cast<int>(rng() % m);
        eq.rhs = static_cast<int>(rng() % m);
        sys.equations.push_back(eq);
      }
      auto x = solve(sys);
      ++rep.checked;
      if (x.has_value() != brute_solvable(sys) || (x && !sys.satisfied_by(*x)))
        rep.fail("Z" + std::to_string(m) + " system " + std::to_string(it));
    }
  rep.details = {{"seed", seed}};
  return rep;
}

CheckReport check_near_solution() {
  CheckReport rep;
  rep.name = "near-solution";
  for (auto [spec, m] : {std::pair<std::string, int>{"biclique-minus-matching:3", 4}, {"biclique-minus-matching:3", 3},
                         {"composite:3,4", 3}, {"composite:3,4", 4}}) {
    auto g = parse_graph_spec(spec);
    for (int a = 0; a < m; ++a)
      for (int odd = 0; odd < g.n(); odd += std::max(1, g.n() / 8))
        for (int vp = 0; vp < g.n(); ++vp) {
          std::vector<int> charges(g.n(), a);
          charges[odd] = mod(a + 1 + odd % (m - 1), m);
          auto x = near_solution(g, charges, m, vp);
          auto d = tseitin_defects(g, charges, m, x);
          ++rep.checked;
          for (int v = 0; v < g.n(); ++v)
            if (v != vp && d[v] != 0) {
              rep.fail(spec + " mod " + std::to_string(m) + ": equation at " + g.names[v] + " fails");
              break;
            }
        }
  }
  return rep;
}

CheckReport check_comp_isom() {
  CheckReport rep;
  rep.name = "comp-isom";
  auto g = composite_graph(3, 4);
  auto S = untwisted(g, parse_variant("nu:3"));
  for (int v : {0, 7})
    for (int code = 0; code < 27; ++code) {
      std::vector<int> c{code % 3, code / 3 % 3, code / 9};
      auto f = cyclic_bijection(S, local_shifts(S, v, c));
      int sigma = c[0] + c[1] + c[2];
      for (int s = 0; s < 3; ++s) {
        ++rep.checked;
        // the gadget with charge s goes onto the one with charge s - sigma
        if (!gadget_maps(S, s, S, mod(s - sigma, 3), f, v, {0, 1, 2}))
          rep.fail("shifts " + std::to_string(code) + " at " + g.names[v] + " charge " + std::to_string(s));
      }
      auto cls = classify_gadget_map(f, v, S, S);
      if (!cls.delta || mod(*cls.delta + sigma, 3) != 0) rep.fail("classification of shifts " + std::to_string(code));
    }
  return rep;
}

CheckReport check_local_isom(int samples, std::uint64_t seed) {
  CheckReport rep;
  rep.name = "local-isom";
  rep.exhaustive = false;
  auto g = biclique_minus_matching(3);
  auto S = untwisted(g, parse_variant("maltsev:3"));
  auto T = twisted(g, parse_variant("maltsev:3"));
  for (int v : {0, 5})
    for (auto mode : {Z4Mode::Rotation, Z4Mode::Reflection})
      for (int code = 0; code < 64; ++code) {
        std::vector<int> c{code % 4, code / 4 % 4, code / 16};
        auto f = z4_bijection(S, mode, local_shifts(S, v, c));
        int need = 2 * (S.charge(v) + T.charge(v)) + (mode == Z4Mode::Reflection ? 1 : 0);
        int off = mod(c[0] + c[1] + c[2] - need, 4);
        auto effect = classify_gadget_map(f, v, S, T).effect;
        bool keeps = gadget_maps(S, S.charge(v), T, T.charge(v), f, v, {0, 1});
        bool swaps = gadget_maps(S, S.charge(v), T, T.charge(v), f, v, {1, 0});
        ++rep.checked;
        auto want = off == 0 ? RelationEffect::Preserves : off == 2 ? RelationEffect::Swaps : RelationEffect::Neither;
        if (effect != want || keeps != (off == 0) || swaps != (off == 2))
          rep.fail(std::string(mode == Z4Mode::Rotation ? "rotation" : "reflection") + " shifts " + std::to_string(code));
      }
  // mixed edge permutations: neither all rotations nor all reflections
  std::mt19937_64 rng(seed);
  int mixed = 0;
  while (mixed < samples) {
    auto f = identity_bijection(S);
    bool non_rot = false, non_refl = false;
    for (int e : g.incident[2]) {
      std::array<int, 4> pi{0, 1, 2, 3};
      std::shuffle(pi.begin(), pi.end(), rng);
      auto k = classify_permutation_z4(pi).kind;
      non_rot |= k != PermKind::Rotation;
      non_refl |= k != PermKind::Reflection;
      for (int a = 0; a < 4; ++a) f.image[S.edge_atom(e, a)] = S.edge_atom(e, pi[a]);
    }
    if (!non_rot || !non_refl) continue;
    ++mixed;
    ++rep.checked;
    bool keeps = gadget_maps(S, S.charge(2), T, T.charge(2), f, 2, {0, 1});
    bool swaps = gadget_maps(S, S.charge(2), T, T.charge(2), f, 2, {1, 0});
    if (classify_gadget_map(f, 2, S, T).effect != RelationEffect::Neither || keeps || swaps)
      rep.fail("mixed sample " + std::to_string(mixed));
  }
  rep.details = {{"mixed_samples", samples}, {"seed", seed}};
  return rep;
}

CheckReport check_z4_permutations() {
  CheckReport rep;
  rep.name = "z4-permutations";
  std::array<int, 4> pi{0, 1, 2, 3};
  int counts[3] = {0, 0, 0};
  do {
    auto c = classify_permutation_z4(pi);
    PermClass want{PermKind::Other, 0};
    for (int k = 0; k < 4; ++k) {
      bool rot = true, refl = true;
      for (int x = 0; x < 4; ++x) {
        rot &= pi[x] == (x + k) % 4;
        refl &= pi[x] == mod(k - x, 4);
      }
      if (rot) want = {PermKind::Rotation, k};
      if (refl) want = {PermKind::Reflection, k};
    }
    ++rep.checked;
    ++counts[static_cast<int>(c.kind)];
    if (c.kind != want.kind || (c.kind != PermKind::Other && c.c != want.c))
      rep.fail("permutation " + std::to_string(pi[0]) + std::to_string(pi[1]) + std::to_string(pi[2]) +
               std::to_string(pi[3]));
  } while (std::next_permutation(pi.begin(), pi.end()));
  rep.details = {{"rotations", counts[static_cast<int>(PermKind::Rotation)]},
                 {"reflections", counts[static_cast<int>(PermKind::Reflection)]},
                 {"other", counts[static_cast<int>(PermKind::Other)]}};
  if (rep.details["rotations"] != 4 || rep.details["reflections"] != 4 || rep.details["other"] != 16)
    rep.fail("wrong class sizes");
  return rep;
}

CheckReport check_non_isomorphism(int k) {
  CheckReport rep;
  rep.name = "non-isomorphism";
  auto g = biclique_minus_matching(k);
  auto v = parse_variant("maltsev:" + std::to_string(k));
  auto S = untwisted(g, v), T = twisted(g, v);
  ClassConstraint cc;
  for (int e = 0; e < g.m(); ++e) {
    std::vector<Element> cls;
    for (int a = 0; a < 4; ++a) cls.push_back(S.edge_atom(e, a));
    cc.classes.emplace_back(cls, cls);
  }
  bool iso = find_isomorphism(S.structure, T.structure, cc).has_value();
  bool self = find_isomorphism(S.structure, S.structure, cc).has_value();
  std::vector<int> rot(g.n(), 0), refl(g.n(), 1);
  for (int u = 0; u < g.n(); ++u) {
    rot[u] = mod(2 * (S.charge(u) + T.charge(u)), 4);
    refl[u] = mod(2 * (S.charge(u) + T.charge(u)) + 1, 4);
  }
  bool rot_ok = solve(tseitin_system(g, rot, 4)).has_value();
  bool refl_ok = solve(tseitin_system(g, refl, 4)).has_value();
  rep.checked = 4;
  if (iso) rep.fail("an isomorphism respecting the preorder classes exists");
  if (!self) rep.fail("no automorphism of the untwisted instance found");
  if (rot_ok) rep.fail("rotation system is solvable");
  if (refl_ok) rep.fail("reflection system is solvable");
  rep.details = {{"atoms", S.atom_count()},
                 {"isomorphic", iso},
                 {"rotation_solvable", rot_ok},
                 {"reflection_solvable", refl_ok}};
  return rep;
}

CheckReport check_round_sweep(const SweepConfig& cfg) {
  bool maltsev = parse_variant(cfg.variant).kind == VariantKind::Maltsev;
  GameSetup setup({maltsev ? GameKind::Maltsev : GameKind::Bijection, cfg.k, cfg.r}, cfg.graph, cfg.variant);
  CheckReport rep;
  rep.name = maltsev ? "maltsev-invariant" : "bp-invariant";
  std::uint64_t exhaustive_states = 0, move_space = 0;
  int states = 0;
  auto record = [&](const RoundReport& r, int state) {
    ++states;
    rep.checked += r.checked;
    move_space = r.move_space;
    exhaustive_states += r.exhaustive;
    rep.exhaustive = rep.exhaustive && r.exhaustive;
    for (const auto& e : r.examples) rep.fail("state " + std::to_string(state) + ": " + e);
    rep.violation_count += r.violations - r.examples.size();
  };

  // states come from one seeded random game
  SpoilerMode mode;
  mode.seed = cfg.seed;
  mode.rounds = cfg.states;
  auto trace = play_game(setup, mode);
  Position pos = empty_position(cfg.k);
  if (maltsev) {
    const auto& game = *setup.maltsev;
    MaltsevMemory mem = game.initial();
    record(game.verify_one_round(pos, mem, cfg.budget, cfg.samples, cfg.seed), 0);
    for (std::size_t i = 1; i + 1 < trace.lines.size(); ++i) {
      const auto& l = trace.lines[i];
      std::vector<int> vars;
      std::vector<Element> atoms;
      for (std::size_t j = 0; j < l["vars"].size(); ++j) {
        vars.push_back(parse_var(l["vars"][j], cfg.k));
        atoms.push_back(setup.atom(l["atoms"][j]));
      }
      auto side = l["side"] == "A" ? SpoilerSide::A : SpoilerSide::B;
      auto reply = game.respond(mem, pos, side, vars, atoms);
      std::size_t pick = l["pick"].get<std::size_t>() - 1;
      pos = game.apply(pos, side, vars, atoms, reply.P[pick]);
      mem = reply.next[pick];
      record(game.verify_one_round(pos, mem, cfg.budget, cfg.samples, cfg.seed + i), static_cast<int>(i));
    }
  } else {
    const auto& game = *setup.bp;
    BPMemory mem = game.initial();
    record(game.verify_one_round(pos, mem, cfg.budget, cfg.samples, cfg.seed), 0);
    for (std::size_t i = 1; i + 1 < trace.lines.size(); ++i) {
      const auto& l = trace.lines[i];
      std::vector<int> vars;
      std::vector<Element> atoms;
      for (std::size_t j = 0; j < l["vars"].size(); ++j) {
        vars.push_back(parse_var(l["vars"][j], cfg.k));
        atoms.push_back(setup.atom(l["atoms"][j]));
      }
      pos = bp_apply_round(pos, game.bijection(mem), vars, atoms, cfg.r);
      mem = game.update(mem, pos);
      record(game.verify_one_round(pos, mem, cfg.budget, cfg.samples, cfg.seed + i), static_cast<int>(i));
    }
  }
  if (!trace.duplicator_survived) rep.fail("state generation stopped: " + trace.verdict);
  rep.details = {{"graph", cfg.graph},
                 {"variant", cfg.variant},
                 {"k", cfg.k},
                 {"states", states},
                 {"exhaustive_states", exhaustive_states},
                 {"moves_per_round", move_space},
                 {"budget", cfg.budget},
                 {"samples", cfg.samples},
                 {"seed", cfg.seed}};
  if (!maltsev) rep.details["r"] = cfg.r;
  return rep;
}

CheckReport check_random_play(const SweepConfig& cfg, int games, int rounds) {
  bool maltsev = parse_variant(cfg.variant).kind == VariantKind::Maltsev;
  GameSetup setup({maltsev ? GameKind::Maltsev : GameKind::Bijection, cfg.k, cfg.r}, cfg.graph, cfg.variant);
  CheckReport rep;
  rep.name = "random-play";
  int survived = 0;
  for (int gi = 0; gi < games; ++gi) {
    SpoilerMode mode;
    mode.seed = cfg.seed + static_cast<std::uint64_t>(gi);
    mode.rounds = rounds;
    auto t = play_game(setup, mode);
    survived += t.duplicator_survived;
    if (!t.duplicator_survived) rep.fail("seed " + std::to_string(mode.seed) + ": " + t.verdict);
    for (std::size_t i = 1; i + 1 < t.lines.size(); ++i) {
      ++rep.checked;
      const auto& l = t.lines[i];
      if (l.value("invariant", false) != true) rep.fail("seed " + std::to_string(mode.seed) + " round " + std::to_string(i) + ": invariant lost");
      if (maltsev && l.value("P_valid", false) != true) rep.fail("seed " + std::to_string(mode.seed) + " round " + std::to_string(i) + ": invalid P");
    }
    if (gi == 0 && !replay_trace(t.text()).identical) rep.fail("replay of seed " + std::to_string(mode.seed) + " differs");
  }
  rep.exhaustive = false;
  rep.details = {{"games", games}, {"rounds", rounds}, {"survived", survived}, {"first_seed", cfg.seed}};
  return rep;
}

}  // namespace ppw
