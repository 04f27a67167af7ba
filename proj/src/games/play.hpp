#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "games/bp.hpp"
#include "games/maltsev.hpp"
#include "json.hpp"

namespace ppw {

enum class GameKind { Bijection, Maltsev };

struct GameConfig {
  GameKind kind = GameKind::Bijection;
  int k = 3;
  int r = 2;  // bijection game only; Maltsev moves use any r <= k
};

// "composite:D,N", "composite-biclique:D", "biclique-minus-matching:K",
// "torus:D,S1,S2,..."
BaseGraph parse_graph_spec(const std::string& spec);

// Both instances and the strategy object for one configuration.
struct GameSetup {
  GameConfig config;
  std::string graph_spec, variant_spec;
  CFIStructure S, T;
  std::unique_ptr<BPGame> bp;
  std::unique_ptr<MaltsevGame> maltsev;

  GameSetup(GameConfig config, std::string graph_spec, std::string variant_spec);
  GameSetup(const GameSetup&) = delete;
  GameSetup& operator=(const GameSetup&) = delete;

  // element by name, checked in both structures
  Element atom(const std::string& name) const;
};

struct SpoilerMode {
  enum Kind { Exhaustive, Random, Interactive } kind = Random;
  int depth = 1;             // Exhaustive
  std::uint64_t seed = 0;    // Random
  int rounds = 200;          // Random
};

struct Trace {
  std::vector<nlohmann::json> lines;  // header, rounds, verdict
  bool duplicator_survived = true;
  std::string verdict;

  // One compact JSON object per line, newline-terminated.
  std::string text() const;
};

// Interactive mode reads Spoiler moves from `in` and prompts on `out`.
Trace play_game(const GameSetup& setup, const SpoilerMode& spoiler, std::istream* in = nullptr,
                std::ostream* out = nullptr);

struct ReplayResult {
  bool identical = false;
  std::size_t first_difference = 0;  // line number, 1-based, when not identical
  Trace trace;
};

// Re-runs the game recorded in a trace and compares the output byte for byte.
ReplayResult replay_trace(const std::string& text);

}  // namespace ppw
