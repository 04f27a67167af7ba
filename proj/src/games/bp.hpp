#pragma once

#include <cstdint>
#include <vector>

#include "games/game.hpp"

namespace ppw {

// Duplicator's state in the bijection game: the cyclic bijection given by
// per-edge shifts, and the one vertex where it may fail to be a local
// isomorphism.
struct BPMemory {
  std::vector<int> shifts;
  int bar = 0;

  bool operator==(const BPMemory&) const = default;
  auto operator<=>(const BPMemory&) const = default;
};

class BPGame {
 public:
  // S untwisted, T twisted (or any pair over the same base graph and variant).
  BPGame(const CFIStructure& S, const CFIStructure& T, int k, int r);

  const CFIStructure& S() const { return S_; }
  const CFIStructure& T() const { return T_; }
  int k() const { return k_; }
  int r() const { return r_; }
  const PartialIsoChecker& checker() const { return chk_; }

  BPMemory initial() const;
  // The bijection Duplicator plays this round.
  EdgeBijection bijection(const BPMemory& mem) const;
  // New memory after Spoiler's placement led to `after`.
  BPMemory update(const BPMemory& mem, const Position& after) const;
  BPMemory respond(const BPMemory& mem, const PebbleClasses& pebbles) const;
  // `safe` as computed by safe_vertices for the same pebbles
  BPMemory respond(const BPMemory& mem, const PebbleClasses& pebbles, const std::vector<char>& safe) const;

  InvariantCheck check_invariant(const Position& pos, const BPMemory& mem) const;
  // Local-isomorphism part of the invariant only.
  InvariantCheck check_local(const BPMemory& mem) const;

  RoundReport verify_one_round(const Position& pos, const BPMemory& mem, std::uint64_t budget,
                               std::uint64_t samples, std::uint64_t seed) const;

 private:
  const CFIStructure& S_;
  const CFIStructure& T_;
  int k_, r_;
  PartialIsoChecker chk_;
};

InvariantCheck check_invariant_bp(const BPGame& game, const Position& pos, const BPMemory& mem);
EdgeBijection duplicator_move_bp(const BPGame& game, const BPMemory& mem);
BPMemory duplicator_update_bp(const BPGame& game, const BPMemory& mem, const Position& after);
RoundReport verify_one_round_bp(const BPGame& game, const Position& pos, const BPMemory& mem,
                                std::uint64_t budget, std::uint64_t seed, std::uint64_t samples = 5000);

}  // namespace ppw
