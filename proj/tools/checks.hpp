#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "games/play.hpp"
#include "json.hpp"
#include "linalg/linalg.hpp"

namespace ppw {

// Outcome of one property sweep, shared by `verify` and the acceptance run.
struct CheckReport {
  std::string name;
  bool exhaustive = true;
  std::uint64_t checked = 0;
  std::uint64_t violation_count = 0;
  std::vector<std::string> violations;  // the first few
  nlohmann::json details = nlohmann::json::object();

  bool ok() const { return violation_count == 0; }
  void fail(const std::string& what);
  void absorb(const CheckReport& other);  // counts and violations only
  nlohmann::json to_json() const;
};

CheckReport from_lemma(const LemmaReport& r);

// Every ell-tuple of rows of every relation of B_ell.
CheckReport check_poly_closed(int ell);
// Exhaustive when the row tuples per relation stay within `limit`, else
// `samples` seeded row tuples per relation.
CheckReport check_poly_closed_star(int r, int ell, std::uint64_t limit, std::uint64_t samples, std::uint64_t seed);

CheckReport check_arity_trick(int per_config, std::uint64_t seed);
CheckReport check_csp_reduction(int per_config, std::uint64_t seed);
CheckReport check_hypergraph_reduction(int per_config, std::uint64_t seed);

// Random systems with at most 8 unknowns against full enumeration.
CheckReport check_linear_solver(int per_modulus, std::uint64_t seed);
CheckReport check_near_solution();

CheckReport check_comp_isom();
CheckReport check_local_isom(int samples, std::uint64_t seed);
CheckReport check_z4_permutations();
CheckReport check_non_isomorphism(int k);

struct SweepConfig {
  std::string graph, variant;
  int k = 3, r = 2;
  int states = 200;                 // reachable states after the initial one
  std::uint64_t budget = 5'000'000;  // exhaustive up to this many moves
  std::uint64_t samples = 5000;
  std::uint64_t seed = 0;
};

// One-round checks from the initial state and from the states of a seeded
// random play.
CheckReport check_round_sweep(const SweepConfig& cfg);

// Seeded random games; every round must keep the invariant and every P must
// be valid.
CheckReport check_random_play(const SweepConfig& cfg, int games, int rounds);

}  // namespace ppw
