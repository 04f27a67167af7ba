#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "games/game.hpp"

namespace ppw {

// Duplicator's state in the Maltsev game: a uniform rotation or reflection
// bijection given by per-edge shifts, and the vertex w it is good bar.
struct MaltsevMemory {
  Z4Mode mode = Z4Mode::Rotation;
  std::vector<int> shifts;
  int bar = 0;

  bool operator==(const MaltsevMemory&) const = default;
  auto operator<=>(const MaltsevMemory&) const = default;
};

// Structure that holds Spoiler's tuple; Duplicator's set P lives in the other.
enum class SpoilerSide { A, B };

struct MaltsevReply {
  std::vector<Tuple> P;
  std::vector<MaltsevMemory> next;  // per entry of P
};

class MaltsevGame {
 public:
  MaltsevGame(const CFIStructure& S, const CFIStructure& T, int k);
  ~MaltsevGame();

  const CFIStructure& S() const { return S_; }
  const CFIStructure& T() const { return T_; }
  int k() const { return k_; }
  const PartialIsoChecker& checker() const { return chk_; }

  MaltsevMemory initial() const;
  // S -> T; Duplicator plays it, or its inverse when Spoiler picks in T.
  EdgeBijection bijection(const MaltsevMemory& mem) const;
  MaltsevReply respond(const MaltsevMemory& mem, const Position& pos, SpoilerSide side, const std::vector<int>& vars,
                       const std::vector<Element>& atoms) const;
  // Spoiler's tuple goes to its side, the picked tuple from P to the other.
  Position apply(const Position& pos, SpoilerSide side, const std::vector<int>& vars,
                 const std::vector<Element>& atoms, const Tuple& pick) const;

  InvariantCheck check_invariant(const Position& pos, const MaltsevMemory& mem) const;
  // Conditions on the bijection alone: uniform mode, local isomorphism off
  // the bar vertex, relations swapped at it.
  InvariantCheck check_local(const MaltsevMemory& mem) const;

  RoundReport verify_one_round(const Position& pos, const MaltsevMemory& mem, std::uint64_t budget,
                               std::uint64_t samples, std::uint64_t seed) const;

  struct TreeResult {
    bool survived = true;
    std::uint64_t positions = 0;   // positions reached, picks included
    std::uint64_t memo_hits = 0;
    std::string failure;
  };
  // All Spoiler moves and picks to the given depth; loss or an invalid P
  // fails the run.
  TreeResult explore(const Position& pos, const MaltsevMemory& mem, int depth) const;

  struct Cache;

 private:
  MaltsevMemory escape(const MaltsevMemory& g, const std::vector<char>& pebbled_edges) const;
  MaltsevMemory double_escape(const MaltsevMemory& g, const std::vector<char>& pebbled_edges, int e1, int e2,
                              int delta) const;
  MaltsevMemory invert_mode(const MaltsevMemory& g, const std::vector<char>& pebbled_edges,
                            const std::vector<Element>& atoms, int entry, int delta) const;

  template <class Visit>
  void play_move(Cache& cache, const MaltsevMemory& mem, const Position& pos, SpoilerSide side,
                 const std::vector<int>& vars, const std::vector<Element>& atoms, bool invariant, Visit&& visit) const;
  bool round_survives(Cache& cache, const MaltsevMemory& mem, const Position& pos, SpoilerSide side, unsigned mask,
                      TreeResult& out) const;
  void explore_rec(Cache& cache, const MaltsevMemory& mem, const Position& pos, int depth, TreeResult& out) const;

  const CFIStructure& S_;
  const CFIStructure& T_;
  int k_;
  PartialIsoChecker chk_;
};

MaltsevMemory invert(const MaltsevMemory& m);

InvariantCheck check_invariant_maltsev(const MaltsevGame& game, const Position& pos, const MaltsevMemory& mem);
MaltsevReply duplicator_move_maltsev(const MaltsevGame& game, const MaltsevMemory& mem, const Position& pos,
                                     SpoilerSide side, const std::vector<int>& vars, const std::vector<Element>& atoms);
RoundReport verify_one_round_maltsev(const MaltsevGame& game, const Position& pos, const MaltsevMemory& mem,
                                     std::uint64_t budget, std::uint64_t seed, std::uint64_t samples = 5000);

}  // namespace ppw
