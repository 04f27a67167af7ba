#include "games/play.hpp"

#include <iostream>
#include <random>
#include <set>
#include <sstream>

namespace ppw {

using nlohmann::json;

namespace {

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw std::invalid_argument("bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::string digits(const std::vector<int>& shifts) {
  std::string out;
  for (int c : shifts) out += static_cast<char>('0' + c);
  return out;
}

const char* mode_name(Z4Mode m) { return m == Z4Mode::Rotation ? "rotation" : "reflection"; }

json position_json(const CFIStructure& S, const CFIStructure& T, const Position& pos) {
  json out = json::object();
  for (int i = 0; i < pos.k(); ++i)
    if (pos.alpha[i] >= 0)
      out[var_name(i)] = {S.atom_name(static_cast<Element>(pos.alpha[i])), T.atom_name(static_cast<Element>(pos.beta[i]))};
  return out;
}

json names(const CFIStructure& s, const std::vector<Element>& atoms) {
  json out = json::array();
  for (Element a : atoms) out.push_back(s.atom_name(a));
  return out;
}

json var_names(const std::vector<int>& vars) {
  json out = json::array();
  for (int y : vars) out.push_back(var_name(y));
  return out;
}

// Spoiler's moves come from one of these.
struct MoveSource {
  virtual ~MoveSource() = default;
  // false ends the game
  virtual bool next(int round, SpoilerSide& side, std::vector<int>& vars, std::vector<Element>& atoms) = 0;
  virtual std::size_t pick(int round, const std::vector<Tuple>& P) = 0;
};

struct RandomSource : MoveSource {
  std::mt19937_64 rng;
  int k, r, rounds;
  bool two_sided;
  std::discrete_distribution<int> size_dist;
  std::uniform_int_distribution<int> atom_dist;

  RandomSource(std::uint64_t seed, int k, int r, int rounds, int atoms, bool two_sided)
      : rng(seed), k(k), r(r), rounds(rounds), two_sided(two_sided), atom_dist(0, atoms - 1) {
    // move sizes weighted by how many moves have that size
    std::vector<double> w;
    for (int s = 1; s <= r; ++s) w.push_back(static_cast<double>(move_space(k, s, atoms) - move_space(k, s - 1, atoms)));
    size_dist = std::discrete_distribution<int>(w.begin(), w.end());
  }
  bool next(int round, SpoilerSide& side, std::vector<int>& vars, std::vector<Element>& atoms) override {
    if (round > rounds) return false;
    side = two_sided && rng() % 2 ? SpoilerSide::B : SpoilerSide::A;
    int s = size_dist(rng) + 1;
    std::vector<int> order(k);
    for (int i = 0; i < k; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    vars.assign(order.begin(), order.begin() + s);
    atoms.resize(s);
    for (auto& a : atoms) a = static_cast<Element>(atom_dist(rng));
    return true;
  }
  std::size_t pick(int, const std::vector<Tuple>& P) override { return P.size() == 1 ? 0 : rng() % P.size(); }
};

struct PromptSource : MoveSource {
  const GameSetup& setup;
  std::istream& in;
  std::ostream* out;

  PromptSource(const GameSetup& setup, std::istream& in, std::ostream* out) : setup(setup), in(in), out(out) {}

  void say(const std::string& text) {
    if (out) *out << text << std::flush;
  }
  bool read(std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }
  bool next(int round, SpoilerSide& side, std::vector<int>& vars, std::vector<Element>& atoms) override {
    bool maltsev = setup.config.kind == GameKind::Maltsev;
    int limit = maltsev ? setup.config.k : setup.config.r;
    while (true) {
      say("round " + std::to_string(round) + (maltsev ? " [A|B] x1=ELEM ...> " : " x1=ELEM ...> "));
      std::string line;
      if (!read(line)) return false;
      std::stringstream tokens(line);
      std::vector<std::string> words;
      for (std::string w; tokens >> w;) words.push_back(w);
      if (words.empty()) continue;
      if (words[0] == "quit" || words[0] == "q") return false;
      try {
        std::size_t i = 0;
        side = SpoilerSide::A;
        if (maltsev) {
          if (words[0] != "A" && words[0] != "B") throw std::invalid_argument("start with the side, A or B");
          side = words[0] == "A" ? SpoilerSide::A : SpoilerSide::B;
          i = 1;
        }
        vars.clear();
        atoms.clear();
        for (; i < words.size(); ++i) {
          auto eq = words[i].find('=');
          if (eq == std::string::npos) throw std::invalid_argument("expected VAR=ELEM, got '" + words[i] + "'");
          int y = parse_var(words[i].substr(0, eq), setup.config.k);
          if (std::find(vars.begin(), vars.end(), y) != vars.end()) throw std::invalid_argument("variable repeated");
          vars.push_back(y);
          atoms.push_back(setup.atom(words[i].substr(eq + 1)));
        }
        if (vars.empty()) throw std::invalid_argument("no variables given");
        if (static_cast<int>(vars.size()) > limit)
          throw std::invalid_argument("at most " + std::to_string(limit) + " variables per round");
        return true;
      } catch (const std::exception& e) {
        say(std::string("error: ") + e.what() + "\n");
      }
    }
  }
  std::size_t pick(int, const std::vector<Tuple>& P) override {
    if (P.size() == 1) return 0;
    const auto& target = setup.S;  // P lives in whichever side; names coincide
    for (std::size_t j = 0; j < P.size(); ++j) {
      std::string row = "  " + std::to_string(j + 1) + ":";
      for (Element x : P[j]) row += " " + target.atom_name(x);
      say(row + "\n");
    }
    while (true) {
      say("pick 1-" + std::to_string(P.size()) + "> ");
      std::string line;
      if (!read(line)) return 0;
      try {
        std::size_t used = 0;
        int j = std::stoi(line, &used);
        if (used == line.size() && j >= 1 && j <= static_cast<int>(P.size())) return static_cast<std::size_t>(j - 1);
      } catch (const std::exception&) {
      }
      say("error: enter a number from 1 to " + std::to_string(P.size()) + "\n");
    }
  }
};

json header(const GameSetup& setup, const SpoilerMode& mode) {
  json h;
  h["type"] = "header";
  h["game"] = setup.config.kind == GameKind::Bijection ? "bijection" : "maltsev";
  h["k"] = setup.config.k;
  if (setup.config.kind == GameKind::Bijection) h["r"] = setup.config.r;
  h["graph"] = setup.graph_spec;
  h["variant"] = setup.variant_spec;
  h["atoms"] = setup.S.atom_count();
  h["digest_S"] = structure_digest(setup.S.structure);
  h["digest_T"] = structure_digest(setup.T.structure);
  switch (mode.kind) {
    case SpoilerMode::Random:
      h["spoiler"] = "random";
      h["seed"] = mode.seed;
      h["rounds"] = mode.rounds;
      break;
    case SpoilerMode::Exhaustive:
      h["spoiler"] = "exhaustive";
      h["depth"] = mode.depth;
      break;
    case SpoilerMode::Interactive:
      h["spoiler"] = "interactive";
      break;
  }
  return h;
}

void finish(Trace& t, bool survived, std::string verdict) {
  t.duplicator_survived = survived;
  t.verdict = std::move(verdict);
  t.lines.push_back({{"type", "verdict"}, {"duplicator_survived", survived}, {"verdict", t.verdict}});
}

void play_rounds(const GameSetup& setup, MoveSource& src, Trace& trace) {
  const auto& S = setup.S;
  const auto& T = setup.T;
  Position pos = empty_position(setup.config.k);
  SpoilerSide side = SpoilerSide::A;
  std::vector<int> vars;
  std::vector<Element> atoms;
  int round = 1;

  if (setup.config.kind == GameKind::Bijection) {
    const BPGame& game = *setup.bp;
    BPMemory mem = game.initial();
    for (; src.next(round, side, vars, atoms); ++round) {
      json line{{"type", "round"}, {"round", round}, {"vars", var_names(vars)}, {"atoms", names(S, atoms)}};
      auto f = game.bijection(mem);
      pos = bp_apply_round(pos, f, vars, atoms, game.r());
      std::vector<Element> images;
      for (Element a : atoms) images.push_back(f(a));
      line["images"] = names(T, images);
      line["position"] = position_json(S, T, pos);
      bool lost = spoiler_wins_now(game.checker(), pos);
      line["spoiler_wins"] = lost;
      if (lost) {
        trace.lines.push_back(line);
        return finish(trace, false, "Spoiler won at round " + std::to_string(round));
      }
      try {
        mem = game.update(mem, pos);
      } catch (const NoSafeEscape& e) {
        line["strategy_error"] = e.what();
        trace.lines.push_back(line);
        return finish(trace, false, "Duplicator strategy failed at round " + std::to_string(round));
      }
      auto inv = game.check_invariant(pos, mem);
      line["bar"] = S.graph.names[mem.bar];
      line["shifts"] = digits(mem.shifts);
      line["invariant"] = inv.ok;
      if (!inv.ok) line["invariant_failure"] = inv.reason;
      trace.lines.push_back(line);
    }
  } else {
    const MaltsevGame& game = *setup.maltsev;
    MaltsevMemory mem = game.initial();
    for (; src.next(round, side, vars, atoms); ++round) {
      const auto& mine = side == SpoilerSide::A ? S : T;
      const auto& theirs = side == SpoilerSide::A ? T : S;
      json line{{"type", "round"},
                {"round", round},
                {"side", side == SpoilerSide::A ? "A" : "B"},
                {"vars", var_names(vars)},
                {"atoms", names(mine, atoms)}};
      MaltsevReply reply;
      try {
        reply = game.respond(mem, pos, side, vars, atoms);
      } catch (const std::exception& e) {
        line["strategy_error"] = e.what();
        trace.lines.push_back(line);
        return finish(trace, false, "Duplicator strategy failed at round " + std::to_string(round));
      }
      json P = json::array();
      for (const auto& t : reply.P) P.push_back(names(theirs, t));
      line["P"] = P;
      const auto& g = side == SpoilerSide::A ? game.bijection(mem) : inverse(game.bijection(mem));
      Tuple img;
      for (Element a : atoms) img.push_back(g(a));
      bool valid = maltsev_validate_duplicator(img, reply.P);
      line["P_valid"] = valid;
      if (!valid) {
        trace.lines.push_back(line);
        return finish(trace, false, "Duplicator played an invalid P at round " + std::to_string(round));
      }
      std::size_t j = src.pick(round, reply.P);
      line["pick"] = j + 1;
      pos = game.apply(pos, side, vars, atoms, reply.P[j]);
      line["position"] = position_json(S, T, pos);
      bool lost = spoiler_wins_now(game.checker(), pos);
      line["spoiler_wins"] = lost;
      if (lost) {
        trace.lines.push_back(line);
        return finish(trace, false, "Spoiler won at round " + std::to_string(round));
      }
      mem = reply.next[j];
      auto inv = game.check_invariant(pos, mem);
      line["mode"] = mode_name(mem.mode);
      line["bar"] = S.graph.names[mem.bar];
      line["shifts"] = digits(mem.shifts);
      line["invariant"] = inv.ok;
      if (!inv.ok) line["invariant_failure"] = inv.reason;
      trace.lines.push_back(line);
    }
  }
  --round;
  finish(trace, true, "Duplicator survived " + std::to_string(round) + " rounds");
}

struct BPSearch {
  const BPGame& game;
  std::set<std::tuple<int, BPMemory, Position>> survived;
  std::uint64_t positions = 0, memo_hits = 0;
  std::string failure;

  bool run(const BPMemory& mem, const Position& pos, int depth) {
    if (depth <= 0) return true;
    auto key = std::make_tuple(depth, mem, pos);
    if (survived.count(key)) {
      ++memo_hits;
      return true;
    }
    const int N = static_cast<int>(game.S().atom_count());
    const int k = game.k();
    auto f = game.bijection(mem);
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
      std::vector<int> vars;
      for (int i = 0; i < k; ++i)
        if (mask >> i & 1) vars.push_back(i);
      int s = static_cast<int>(vars.size());
      if (s > game.r()) continue;
      std::vector<Element> atoms(s, 0);
      while (true) {
        ++positions;
        Position after = bp_apply_round(pos, f, vars, atoms, game.r());
        std::string where;
        for (int i = 0; i < s; ++i) where += " " + var_name(vars[i]) + "=" + game.S().atom_name(atoms[i]);
        if (spoiler_wins_now(game.checker(), after)) {
          failure = "Spoiler wins with" + where;
          return false;
        }
        BPMemory next;
        try {
          next = game.update(mem, after);
        } catch (const NoSafeEscape& e) {
          failure = std::string(e.what()) + " after" + where;
          return false;
        }
        if (!run(next, after, depth - 1)) return false;
        int i = s - 1;
        while (i >= 0 && ++atoms[i] == static_cast<Element>(N)) atoms[i--] = 0;
        if (i < 0) break;
      }
    }
    survived.insert(std::move(key));
    return true;
  }
};

void search(const GameSetup& setup, int depth, Trace& trace) {
  Position pos = empty_position(setup.config.k);
  json line{{"type", "search"}, {"depth", depth}};
  bool ok = true;
  std::string failure;
  if (setup.config.kind == GameKind::Bijection) {
    BPSearch s{*setup.bp, {}, 0, 0, {}};
    ok = s.run(setup.bp->initial(), pos, depth);
    line["positions"] = s.positions;
    line["memo_hits"] = s.memo_hits;
    failure = s.failure;
  } else {
    auto r = setup.maltsev->explore(pos, setup.maltsev->initial(), depth);
    ok = r.survived;
    line["positions"] = r.positions;
    line["memo_hits"] = r.memo_hits;
    failure = r.failure;
  }
  if (!ok) line["failure"] = failure;
  trace.lines.push_back(line);
  if (ok) finish(trace, true, "Duplicator survived depth " + std::to_string(depth));
  else finish(trace, false, "Spoiler won within depth " + std::to_string(depth));
}

}  // namespace

BaseGraph parse_graph_spec(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("graph spec needs KIND:PARAMS, got '" + spec + "'");
  std::string kind = spec.substr(0, colon);
  auto p = parse_ints(spec.substr(colon + 1));
  if (kind == "composite" && p.size() == 2) return composite_graph(p[0], p[1]);
  if (kind == "composite-biclique" && p.size() == 1) return composite_graph(p[0], p[0], CopyShape::BicliqueMinusMatching);
  if (kind == "biclique-minus-matching" && p.size() == 1) return biclique_minus_matching(p[0]);
  if (kind == "torus" && p.size() >= 2) return toroidal_grid(p[0], std::vector<int>(p.begin() + 1, p.end()));
  throw std::invalid_argument("unknown graph spec '" + spec + "'");
}

GameSetup::GameSetup(GameConfig cfg, std::string graph, std::string variant)
    : config(cfg), graph_spec(std::move(graph)), variant_spec(std::move(variant)) {
  auto g = parse_graph_spec(graph_spec);
  auto v = parse_variant(variant_spec);
  if ((v.kind == VariantKind::Maltsev) != (cfg.kind == GameKind::Maltsev))
    throw std::invalid_argument("the Maltsev game goes with the maltsev variant and only with it");
  S = untwisted(g, v);
  T = twisted(g, v);
  if (cfg.kind == GameKind::Bijection) bp = std::make_unique<BPGame>(S, T, cfg.k, cfg.r);
  else maltsev = std::make_unique<MaltsevGame>(S, T, cfg.k);
}

Element GameSetup::atom(const std::string& name) const {
  for (Element x = 0; x < S.atom_count(); ++x)
    if (S.atom_name(x) == name) return x;
  throw std::invalid_argument("no element named '" + name + "'");
}

std::string Trace::text() const {
  std::string out;
  for (const auto& l : lines) out += l.dump() + "\n";
  return out;
}

Trace play_game(const GameSetup& setup, const SpoilerMode& spoiler, std::istream* in, std::ostream* out) {
  Trace trace;
  trace.lines.push_back(header(setup, spoiler));
  switch (spoiler.kind) {
    case SpoilerMode::Exhaustive:
      search(setup, spoiler.depth, trace);
      break;
    case SpoilerMode::Random: {
      bool maltsev = setup.config.kind == GameKind::Maltsev;
      RandomSource src(spoiler.seed, setup.config.k, maltsev ? setup.config.k : setup.config.r, spoiler.rounds,
                       static_cast<int>(setup.S.atom_count()), maltsev);
      play_rounds(setup, src, trace);
      break;
    }
    case SpoilerMode::Interactive: {
      if (!in) throw std::invalid_argument("interactive play needs an input stream");
      PromptSource src(setup, *in, out);
      play_rounds(setup, src, trace);
      break;
    }
  }
  return trace;
}

ReplayResult replay_trace(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream in(text);
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  if (lines.empty()) throw std::invalid_argument("empty trace");
  json h = json::parse(lines[0]);
  if (h.value("type", "") != "header") throw std::invalid_argument("trace does not start with a header");
  GameConfig cfg;
  cfg.kind = h.at("game").get<std::string>() == "maltsev" ? GameKind::Maltsev : GameKind::Bijection;
  cfg.k = h.at("k").get<int>();
  if (cfg.kind == GameKind::Bijection) cfg.r = h.at("r").get<int>();
  GameSetup setup(cfg, h.at("graph").get<std::string>(), h.at("variant").get<std::string>());

  SpoilerMode mode;
  std::string who = h.at("spoiler").get<std::string>();
  std::stringstream script;
  if (who == "random") {
    mode.kind = SpoilerMode::Random;
    mode.seed = h.at("seed").get<std::uint64_t>();
    mode.rounds = h.at("rounds").get<int>();
  } else if (who == "exhaustive") {
    mode.kind = SpoilerMode::Exhaustive;
    mode.depth = h.at("depth").get<int>();
  } else if (who == "interactive") {
    // feed the recorded moves back through the prompt loop
    mode.kind = SpoilerMode::Interactive;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      json r = json::parse(lines[i]);
      if (r.value("type", "") != "round") continue;
      if (r.contains("side")) script << r["side"].get<std::string>() << ' ';
      for (std::size_t j = 0; j < r["vars"].size(); ++j)
        script << r["vars"][j].get<std::string>() << '=' << r["atoms"][j].get<std::string>() << ' ';
      script << '\n';
      if (r.contains("pick") && r["P"].size() > 1) script << r["pick"].get<int>() << '\n';
    }
  } else {
    throw std::invalid_argument("unknown spoiler mode '" + who + "'");
  }
  ReplayResult res;
  res.trace = play_game(setup, mode, &script, nullptr);
  std::string again = res.trace.text();
  res.identical = again == text;
  if (!res.identical) {
    std::stringstream a(again);
    std::size_t n = 0;
    for (std::string l; ; ) {
      ++n;
      bool more = static_cast<bool>(std::getline(a, l));
      if (n > lines.size() || !more || l != lines[n - 1]) break;
    }
    res.first_difference = n;
  }
  return res;
}

}  // namespace ppw
