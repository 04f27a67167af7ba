#include "games/game.hpp"

#include <algorithm>
#include <cstdio>

#include "partial_poly/partial_op.hpp"
#include "structures/json_io.hpp"

namespace ppw {

Position empty_position(int k) {
  if (k < 1) throw std::invalid_argument("need at least one variable");
  return {std::vector<long>(k, -1), std::vector<long>(k, -1)};
}

std::string var_name(int i) { return "x" + std::to_string(i + 1); }

int parse_var(const std::string& name, int k) {
  if (name.size() < 2 || name[0] != 'x' || !std::all_of(name.begin() + 1, name.end(), ::isdigit) || name.size() > 6)
    throw std::invalid_argument("bad variable '" + name + "'");
  int i = std::stoi(name.substr(1)) - 1;
  if (i < 0 || i >= k) throw std::invalid_argument("variable '" + name + "' out of range");
  return i;
}

std::vector<Element> assigned(const std::vector<long>& side) {
  std::vector<Element> out;
  for (long x : side)
    if (x >= 0) out.push_back(static_cast<Element>(x));
  return out;
}

std::vector<std::pair<Element, Element>> position_pairs(const Position& pos) {
  std::vector<std::pair<Element, Element>> out;
  for (int i = 0; i < pos.k(); ++i)
    if (pos.alpha[i] >= 0) out.emplace_back(static_cast<Element>(pos.alpha[i]), static_cast<Element>(pos.beta[i]));
  return out;
}

bool spoiler_wins_now(const PartialIsoChecker& chk, const Position& pos) {
  thread_local std::vector<std::pair<Element, Element>> pairs;
  pairs.clear();
  for (int i = 0; i < pos.k(); ++i)
    if (pos.alpha[i] >= 0) pairs.emplace_back(static_cast<Element>(pos.alpha[i]), static_cast<Element>(pos.beta[i]));
  return !chk.check(pairs);
}

bool spoiler_wins_now(const Structure& a, const Structure& b, const Position& pos) {
  return spoiler_wins_now(PartialIsoChecker(a, b), pos);
}

Position bp_apply_round(const Position& pos, const EdgeBijection& f, const std::vector<int>& vars,
                        const std::vector<Element>& atoms, int r) {
  if (vars.size() != atoms.size()) throw std::invalid_argument("variable and element tuples differ in length");
  if (static_cast<int>(vars.size()) > r) throw std::invalid_argument("more than r variables moved");
  Position out = pos;
  std::vector<char> seen(pos.k(), 0);
  for (std::size_t i = 0; i < vars.size(); ++i) {
    int y = vars[i];
    if (y < 0 || y >= pos.k() || seen[y]) throw std::invalid_argument("variables must be distinct and in range");
    seen[y] = 1;
    out.alpha[y] = atoms[i];
    out.beta[y] = f(atoms[i]);
  }
  return out;
}

bool maltsev_validate_duplicator(const Tuple& image, const TupleSet& P) {
  if (P.size() > 3) throw std::invalid_argument("Duplicator may offer at most three tuples");
  for (const auto& t : P)
    if (t == image) return true;
  TupleSet sorted = P;
  sort_unique(sorted);
  return contains_tuple(close_tuple_set_maltsev(sorted), image);
}

void RoundReport::violation(const std::string& what) {
  ++violations;
  if (examples.size() < 10) examples.push_back(what);
}

std::uint64_t move_space(int k, int r, std::uint64_t n) {
  std::uint64_t total = 0;
  for (int s = 1; s <= r; ++s) {
    std::uint64_t c = 1;
    for (int i = 0; i < s; ++i) c *= static_cast<std::uint64_t>(k - i) * n;
    total += c;
  }
  return total;
}

std::string structure_digest(const Structure& s) {
  std::string text = structure_to_json(s).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ppw
