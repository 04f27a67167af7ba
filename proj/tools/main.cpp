#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "checks.hpp"
#include "csp/csp.hpp"
#include "partial_poly/arity.hpp"
#include "partial_poly/partial_op.hpp"
#include "structures/json_io.hpp"
#include "templates/templates.hpp"

using namespace ppw;

namespace {

enum Exit { Ok = 0, Violation = 1, Usage = 2, Budget = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<int> int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size()) throw UsageError("bad integer list: '" + s + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<int> params_exactly(const std::string& s, std::size_t n, const std::string& what) {
  auto v = int_list(s);
  if (v.size() != n) throw UsageError(what + " takes " + std::to_string(n) + " parameter(s), got '" + s + "'");
  return v;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

void emit(const json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << j.dump() << '\n';
    return;
  }
  std::ofstream f(out);
  if (!f) throw UsageError("cannot write " + out);
  f << j.dump() << '\n';
}

std::string read_text(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json load(const std::string& path) {
  try {
    return read_json_file(path);
  } catch (const json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

Structure load_structure(const std::string& path) {
  auto j = load(path);
  return j.contains("structure") && j.contains("roles") ? structure_from_json(j["structure"]) : structure_from_json(j);
}

int report_exit(const CheckReport& r) {
  std::cout << r.to_json().dump() << '\n';
  std::cerr << r.name << ": " << (r.exhaustive ? "exhaustive" : "sampled") << ", " << r.checked << " checked, "
            << r.violation_count << " violations\n";
  return r.ok() ? Ok : Violation;
}

// ---- verbs

struct TemplateArgs {
  std::string kind, params, out;
};

int run_template(const TemplateArgs& a) {
  std::string spec;
  if (a.kind == "nu") spec = "nu:" + join(params_exactly(a.params, 1, "nu"));
  else if (a.kind == "nu-star") spec = "nustar:" + join(params_exactly(a.params, 2, "nu-star"));
  else if (a.kind == "hypergraph") spec = "hypergraph:" + join(params_exactly(a.params, 2, "hypergraph"));
  else if (a.kind == "clique") spec = "clique:" + join(params_exactly(a.params, 1, "clique"));
  else if (a.kind == "parity") spec = "parity:" + join(params_exactly(a.params, 1, "parity"));
  else throw UsageError("unknown template kind " + a.kind);
  auto t = parse_template(spec);
  t.validate();
  emit(structure_to_json(build_template(t)), a.out);
  return Ok;
}

struct GraphArgs {
  std::string kind, params, shape = "torus", out;
  bool connectivity = false;
};

int run_graph(const GraphArgs& a) {
  BaseGraph g;
  auto p = int_list(a.params);
  if (a.kind == "torus") {
    if (p.size() < 2) throw UsageError("torus takes D,S1,...");
    g = toroidal_grid(p[0], {p.begin() + 1, p.end()});
  } else if (a.kind == "composite") {
    if (p.size() != 2) throw UsageError("composite takes D,N");
    if (a.shape != "torus" && a.shape != "biclique") throw UsageError("unknown copy shape " + a.shape);
    g = composite_graph(p[0], p[1], a.shape == "torus" ? CopyShape::Torus : CopyShape::BicliqueMinusMatching);
  } else if (a.kind == "biclique-minus-matching") {
    g = biclique_minus_matching(params_exactly(a.params, 1, "biclique-minus-matching")[0]);
  } else {
    throw UsageError("unknown graph kind " + a.kind);
  }
  emit(graph_to_json(g), a.out);
  if (a.connectivity) {
    json rep{{"vertices", g.n()},
             {"edges", g.m()},
             {"degree", g.degree},
             {"connected", is_connected(g)},
             {"bipartite", is_bipartite(g)},
             {"edge_connectivity", edge_connectivity(g)}};
    std::cerr << rep.dump() << '\n';
  }
  return Ok;
}

struct InstanceArgs {
  std::string graph, variant, out;
  bool twist = false;
};

int run_instance(const InstanceArgs& a) {
  auto g = graph_from_json(load(a.graph));
  auto v = parse_variant(a.variant);
  emit(cfi_to_json(a.twist ? twisted(g, v) : untwisted(g, v)), a.out);
  return Ok;
}

struct CspArgs {
  std::string instance, tmpl, out;
  std::uint64_t budget = 10'000'000;
};

int run_csp(const CspArgs& a) {
  auto ij = load(a.instance);
  Structure b = structure_from_json(load(a.tmpl));
  std::optional<CFIStructure> cfi;
  Structure inst;
  if (ij.contains("roles")) {
    cfi = cfi_from_json(ij);
    inst = cfi->structure;
  } else {
    inst = structure_from_json(ij);
  }
  require_same_vocabulary(inst, b);

  SearchConfig cfg;
  cfg.node_budget = a.budget;
  auto res = search_homomorphism(inst, b, cfg);
  json out{{"instance_size", inst.size()}, {"budget", a.budget}, {"nodes", res.nodes}};
  out["solver"] = res.status == SearchStatus::Found ? "SAT" : res.status == SearchStatus::Absent ? "UNSAT" : "BUDGET";
  if (res.status == SearchStatus::Found) {
    bool ok = is_homomorphism(inst, b, res.map);
    out["witness_verified"] = ok;
    json w = json::object();
    for (auto [x, y] : res.map) w[inst.label(x)] = b.label(y);
    out["witness"] = w;
    if (!ok) {
      emit(out, a.out);
      return Violation;
    }
  }

  // The Tseitin system decides NU instances against their own template.
  std::optional<bool> oracle;
  if (cfi && cfi->variant.kind == VariantKind::NU && b == template_nu(cfi->variant.ell)) {
    std::vector<int> charges(cfi->graph.n());
    for (int v = 0; v < cfi->graph.n(); ++v) charges[v] = cfi->charge(v);
    oracle = solve(tseitin_system(cfi->graph, charges, 3)).has_value();
    out["oracle"] = *oracle ? "SAT" : "UNSAT";
    out["oracle_authoritative"] = is_bipartite(cfi->graph);
  }

  int code = Ok;
  if (oracle && res.status != SearchStatus::BudgetExhausted) {
    bool agree = *oracle == (res.status == SearchStatus::Found);
    out["agreement"] = agree;
    // the oracle is exact only on bipartite base graphs
    if (!agree && is_bipartite(cfi->graph)) code = Violation;
  }
  if (res.status == SearchStatus::BudgetExhausted) {
    if (oracle) out["verdict"] = *oracle ? "SAT" : "UNSAT";
    else code = Budget;
  } else {
    out["verdict"] = out["solver"];
  }
  emit(out, a.out);
  std::cerr << "csp: " << out.value("verdict", std::string("unknown")) << " (solver " << out["solver"].get<std::string>()
            << (oracle ? std::string(", oracle ") + out["oracle"].get<std::string>() : std::string()) << ", " << res.nodes
            << " nodes)\n";
  return code;
}

struct CloseArgs {
  std::string structure, family, out;
};

int run_close(const CloseArgs& a) {
  auto s = load_structure(a.structure);
  int passes = 0;
  auto closed = close_structure(parse_op(a.family), s, &passes);
  emit(structure_to_json(closed), a.out);
  std::cerr << "close: " << passes << " passes, " << s.tuple_count() << " -> " << closed.tuple_count() << " tuples\n";
  return Ok;
}

struct ReduceArgs {
  std::string structure, division, out;
  int ell = 3;
};

int run_reduce(const ReduceArgs& a) {
  auto s = load_structure(a.structure);
  int r = 1;
  for (const auto& sym : s.vocab) r = std::max(r, sym.arity);
  IntervalDivision div = a.division.empty() ? default_division(r, a.ell) : division_from_json(json::parse(a.division));
  validate_division(div, r);
  emit(structure_to_json(full_reduction(s, a.ell, div)), a.out);
  std::cerr << "reduce: division " << division_to_json(div).dump() << '\n';
  return Ok;
}

struct VerifyArgs {
  std::string lemma, params, graph, variant;
  std::uint64_t seed = 0, budget = 5'000'000;
  std::uint64_t samples = 0;  // 0: per-lemma default
  int count = 100, states = 200, k = 3, r = 2;
};

int run_verify(VerifyArgs a) {
  auto colon = a.lemma.find(':');
  if (colon != std::string::npos) {
    if (!a.params.empty()) throw UsageError("parameters given twice");
    a.params = a.lemma.substr(colon + 1);
    a.lemma = a.lemma.substr(0, colon);
  }
  auto one = [&](const char* what, int dflt) {
    return a.params.empty() ? dflt : params_exactly(a.params, 1, what)[0];
  };
  auto samples = [&](std::uint64_t dflt) { return a.samples ? a.samples : dflt; };
  std::cerr << "verify " << a.lemma << (a.params.empty() ? "" : ":" + a.params) << " seed " << a.seed << '\n';

  if (a.lemma == "base-separating") return report_exit(from_lemma(verify_lemma_base()));
  if (a.lemma == "separating") return report_exit(from_lemma(verify_lemma_separating(one("separating", 3))));
  if (a.lemma == "row-back") return report_exit(from_lemma(verify_lemma_row_back(one("row-back", 3))));
  if (a.lemma == "pairs") {
    auto p = a.params.empty() ? std::vector<int>{3, 3} : params_exactly(a.params, 2, "pairs");
    return report_exit(from_lemma(verify_lemma_pairs(p[0], p[1])));
  }
  if (a.lemma == "poly-closed") return report_exit(check_poly_closed(one("poly-closed", 3)));
  if (a.lemma == "poly-closed-star") {
    auto p = a.params.empty() ? std::vector<int>{3, 3} : params_exactly(a.params, 2, "poly-closed-star");
    return report_exit(check_poly_closed_star(p[0], p[1], a.budget, samples(1'000'000), a.seed));
  }
  if (a.lemma == "arity-trick") return report_exit(check_arity_trick(a.count, a.seed));
  if (a.lemma == "csp-reduction") return report_exit(check_csp_reduction(a.count, a.seed));
  if (a.lemma == "hypergraph-reduction") return report_exit(check_hypergraph_reduction(a.count, a.seed));
  if (a.lemma == "tseitin") return report_exit(check_linear_solver(a.count, a.seed));
  if (a.lemma == "near-solution") return report_exit(check_near_solution());
  if (a.lemma == "comp-isom") return report_exit(check_comp_isom());
  if (a.lemma == "local-isom") return report_exit(check_local_isom(static_cast<int>(samples(1000)), a.seed));
  if (a.lemma == "z4-permutations") return report_exit(check_z4_permutations());
  if (a.lemma == "non-isomorphism") return report_exit(check_non_isomorphism(one("non-isomorphism", 3)));
  if (a.lemma == "bp-invariant" || a.lemma == "maltsev-invariant") {
    bool bp = a.lemma == "bp-invariant";
    SweepConfig cfg;
    cfg.graph = a.graph.empty() ? (bp ? "composite:3,7" : "biclique-minus-matching:3") : a.graph;
    cfg.variant = a.variant.empty() ? (bp ? "nu:3" : "maltsev:3") : a.variant;
    if ((parse_variant(cfg.variant).kind == VariantKind::Maltsev) == bp)
      throw UsageError(a.lemma + " does not take variant " + cfg.variant);
    cfg.k = a.k;
    cfg.r = a.r;
    cfg.states = a.states;
    cfg.budget = a.budget;
    cfg.samples = samples(5000);
    cfg.seed = a.seed;
    return report_exit(check_round_sweep(cfg));
  }
  throw UsageError("unknown lemma " + a.lemma);
}

struct GameArgs {
  std::string graph = "composite:3,7", variant = "nu:3", spoiler = "random", out, trace;
  int k = 3, r = 2, rounds = 200, depth = 1, states = 0;
  std::uint64_t seed = 0, budget = 5'000'000, samples = 5000;
};

GameConfig game_config(const GameArgs& a) {
  bool maltsev = parse_variant(a.variant).kind == VariantKind::Maltsev;
  return {maltsev ? GameKind::Maltsev : GameKind::Bijection, a.k, a.r};
}

void write_trace(const Trace& t, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << t.text();
    return;
  }
  std::ofstream f(out);
  if (!f) throw UsageError("cannot write " + out);
  f << t.text();
}

int run_game(const std::string& sub, const GameArgs& a) {
  if (sub == "replay") {
    auto res = replay_trace(read_text(a.trace));
    json out{{"identical", res.identical}, {"verdict", res.trace.verdict}};
    if (!res.identical) out["first_difference"] = res.first_difference;
    std::cout << out.dump() << '\n';
    std::cerr << "replay: " << (res.identical ? "identical" : "differs at line " + std::to_string(res.first_difference))
              << '\n';
    return res.identical && res.trace.duplicator_survived ? Ok : Violation;
  }
  if (sub == "verify-round") {
    SweepConfig cfg{a.graph, a.variant, a.k, a.r, a.states, a.budget, a.samples, a.seed};
    return report_exit(check_round_sweep(cfg));
  }
  GameSetup setup(game_config(a), a.graph, a.variant);
  SpoilerMode mode;
  mode.seed = a.seed;
  mode.rounds = a.rounds;
  mode.depth = a.depth;
  Trace t;
  if (sub == "play") {
    mode.kind = SpoilerMode::Interactive;
    std::cerr << "moves: [A|B] x1=ATOM ... (side only in the Maltsev game), 'quit' to stop\n";
    t = play_game(setup, mode, &std::cin, &std::cerr);
  } else {
    if (a.spoiler == "random") mode.kind = SpoilerMode::Random;
    else if (a.spoiler == "exhaustive") mode.kind = SpoilerMode::Exhaustive;
    else throw UsageError("unknown spoiler " + a.spoiler);
    t = play_game(setup, mode);
  }
  write_trace(t, a.out);
  std::cerr << t.verdict << '\n';
  return t.duplicator_survived ? Ok : Violation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"partial polymorphism and pebble game toolkit"};
  app.require_subcommand(1);

  TemplateArgs ta;
  auto* tmpl = app.add_subcommand("template", "emit a template structure");
  tmpl->add_option("--kind", ta.kind, "nu|nu-star|hypergraph|clique|parity")->required();
  tmpl->add_option("--params", ta.params, "comma separated: nu L, nu-star R,L, hypergraph R,M, clique M, parity R")
      ->required();
  tmpl->add_option("-o,--out", ta.out);

  GraphArgs ga;
  auto* graph = app.add_subcommand("graph", "emit a base graph");
  graph->add_option("--kind", ga.kind, "torus|composite|biclique-minus-matching")->required();
  graph->add_option("--params", ga.params, "torus D,S1,..; composite D,N; biclique-minus-matching K")->required();
  graph->add_option("--shape", ga.shape, "composite copies: torus|biclique");
  graph->add_flag("--connectivity", ga.connectivity, "connectivity report on stderr");
  graph->add_option("-o,--out", ga.out);

  InstanceArgs ia;
  auto* inst = app.add_subcommand("instance", "build a CFI instance over a graph file");
  inst->add_option("--graph", ia.graph)->required();
  inst->add_option("--variant", ia.variant, "nu:L|nu-star:R,L|maltsev:K")->required();
  inst->add_flag("--twist", ia.twist);
  inst->add_option("-o,--out", ia.out);

  CspArgs ca;
  auto* csp = app.add_subcommand("csp", "decide a homomorphism instance");
  csp->add_option("--instance", ca.instance)->required();
  csp->add_option("--template", ca.tmpl)->required();
  csp->add_option("--budget", ca.budget, "search node budget");
  csp->add_option("-o,--out", ca.out);

  CloseArgs cl;
  auto* close = app.add_subcommand("close", "close a structure under a partial operation");
  close->add_option("--structure", cl.structure)->required();
  close->add_option("--family", cl.family, "nu:L|maltsev")->required();
  close->add_option("-o,--out", cl.out);

  ReduceArgs ra;
  auto* reduce = app.add_subcommand("reduce", "NU closure followed by the star operator");
  reduce->add_option("--structure", ra.structure)->required();
  reduce->add_option("--ell", ra.ell)->required();
  reduce->add_option("--division", ra.division, "JSON list of [i,j] intervals");
  reduce->add_option("-o,--out", ra.out);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run a property verifier");
  verify->add_option("--lemma", va.lemma)->required();
  verify->add_option("--params", va.params);
  verify->add_option("--seed", va.seed);
  verify->add_option("--budget", va.budget, "exhaustive up to this many cases");
  verify->add_option("--samples", va.samples);
  verify->add_option("--count", va.count, "random cases per configuration");
  verify->add_option("--states", va.states, "reachable states for the game sweeps");
  verify->add_option("--graph", va.graph);
  verify->add_option("--variant", va.variant);
  verify->add_option("--k", va.k);
  verify->add_option("--r", va.r);

  GameArgs gm;
  auto* game = app.add_subcommand("game", "play or verify the pebble games");
  game->require_subcommand(1);
  auto game_opts = [&](CLI::App* c) {
    c->add_option("--graph", gm.graph, "composite:D,N|composite-biclique:D|biclique-minus-matching:K|torus:D,S..");
    c->add_option("--variant", gm.variant);
    c->add_option("--k", gm.k);
    c->add_option("--r", gm.r);
    c->add_option("--seed", gm.seed);
  };
  auto* grun = game->add_subcommand("run", "play against a random or exhaustive Spoiler");
  game_opts(grun);
  grun->add_option("--spoiler", gm.spoiler, "random|exhaustive");
  grun->add_option("--rounds", gm.rounds);
  grun->add_option("--depth", gm.depth);
  grun->add_option("-o,--out", gm.out);
  auto* gver = game->add_subcommand("verify-round", "one-round checks from reachable states");
  game_opts(gver);
  gver->add_option("--states", gm.states);
  gver->add_option("--budget", gm.budget);
  gver->add_option("--samples", gm.samples);
  auto* grep = game->add_subcommand("replay", "re-run a trace and compare");
  grep->add_option("trace", gm.trace)->required();
  auto* gplay = game->add_subcommand("play", "you play Spoiler");
  game_opts(gplay);
  gplay->add_option("-o,--out", gm.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? Ok : Usage;
  }

  try {
    if (*tmpl) return run_template(ta);
    if (*graph) return run_graph(ga);
    if (*inst) return run_instance(ia);
    if (*csp) return run_csp(ca);
    if (*close) return run_close(cl);
    if (*reduce) return run_reduce(ra);
    if (*verify) return run_verify(va);
    if (*game) return run_game(game->get_subcommands().front()->get_name(), gm);
  } catch (const BudgetExhausted& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Budget;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Usage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Usage;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Usage;
  }
  return Usage;
}
