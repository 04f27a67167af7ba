#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfi/bijection.hpp"
#include "structures/partial_iso.hpp"

namespace ppw {

// Partial assignments over the variables x1..xk; -1 marks an unassigned
// variable. dom alpha = dom beta.
struct Position {
  std::vector<long> alpha, beta;

  int k() const { return static_cast<int>(alpha.size()); }
  bool operator==(const Position&) const = default;
  auto operator<=>(const Position&) const = default;
};

Position empty_position(int k);
std::string var_name(int i);
int parse_var(const std::string& name, int k);
std::vector<Element> assigned(const std::vector<long>& side);
std::vector<std::pair<Element, Element>> position_pairs(const Position& pos);

bool spoiler_wins_now(const PartialIsoChecker& chk, const Position& pos);
bool spoiler_wins_now(const Structure& a, const Structure& b, const Position& pos);

// alpha[ā/ȳ], beta[f(ā)/ȳ]. Throws on more than r variables, repeated
// variables or mismatched lengths.
Position bp_apply_round(const Position& pos, const EdgeBijection& f, const std::vector<int>& vars,
                        const std::vector<Element>& atoms, int r);

// The image tuple lies in the partial-Maltsev closure of P; |P| <= 3.
bool maltsev_validate_duplicator(const Tuple& image, const TupleSet& P);

// Raised when the strategy finds no admissible escape.
struct NoSafeEscape : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvariantCheck {
  bool ok = true;
  std::string reason;
  static InvariantCheck fail(std::string why) { return {false, std::move(why)}; }
};

struct RoundReport {
  std::uint64_t move_space = 0;  // ordered variable tuples times element tuples (times sides)
  std::uint64_t checked = 0;     // positions actually played, picks included
  bool exhaustive = false;
  std::uint64_t violations = 0;
  std::vector<std::string> examples;  // first few violations

  void violation(const std::string& what);
  bool ok() const { return violations == 0; }
};

// k!/(k-s)! * n^s summed over s = 1..r
std::uint64_t move_space(int k, int r, std::uint64_t n);

// 64-bit FNV-1a over the compact JSON text of a structure.
std::string structure_digest(const Structure& s);

}  // namespace ppw
