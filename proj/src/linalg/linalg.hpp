#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cfi/base_graph.hpp"
#include "json.hpp"

namespace ppw {

struct MatrixModM {
  int modulus = 3;
  int rows = 0, cols = 0;
  std::vector<int> data;  // row-major

  MatrixModM() = default;
  MatrixModM(int modulus, int rows, int cols);
  int& at(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  int at(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
  std::vector<int> row(int i) const;
  std::vector<int> times(const std::vector<int>& u) const;
  std::string encode() const;
};

bool has_nu_property(const MatrixModM& a);
// Column-wise near-unanimity value (rows = ell), absent if some column has
// no value shared by rows-1 entries.
std::optional<std::vector<int>> nu_image(const MatrixModM& a);

struct SeparatorSet {
  int ell = 3, width = 0, q = 0, p = 0;
  std::vector<std::vector<int>> blocks;       // 0-based columns
  std::vector<std::pair<int, int>> pairs;     // one per (u11, u12) couple
  std::vector<std::vector<int>> vectors;      // u11 then u12 for each pair
};

SeparatorSet build_separator_set(int ell, int width);
std::uint64_t separator_count(int ell, int width);

struct LemmaReport {
  std::string lemma;
  std::uint64_t checked = 0;      // matrices enumerated
  std::uint64_t applicable = 0;   // matrices meeting the hypotheses
  std::uint64_t internal = 0;     // side assertions evaluated
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  nlohmann::json to_json() const;
};

LemmaReport verify_lemma_base();
LemmaReport verify_lemma_separating(int ell);
LemmaReport verify_lemma_row_back(int ell);
LemmaReport verify_lemma_pairs(int ell, int width);

struct LinearSystem {
  struct Equation {
    std::map<int, int> coeffs;  // variable -> coefficient
    int rhs = 0;
  };
  int modulus = 2;
  std::vector<std::string> vars;
  std::vector<Equation> equations;

  bool satisfied_by(const std::vector<int>& x) const;
};

LinearSystem tseitin_system(const BaseGraph& g, const std::vector<int>& charges, int modulus);

// Complete over Z2, Z3 and Z4; Z4 lifts every mod-2 solution. Throws
// std::runtime_error if the mod-2 solution space exceeds 2^max_free_bits.
std::optional<std::vector<int>> solve(const LinearSystem& sys, int max_free_bits = 24);

// Per-vertex value of (sum of incident edge values) - charge.
std::vector<int> tseitin_defects(const BaseGraph& g, const std::vector<int>& charges, int modulus,
                                 const std::vector<int>& x);

std::vector<int> perfect_matching(const BaseGraph& g);

// BFS path between two vertices avoiding `blocked`, neighbors in vertex
// order; empty if none. Returned as the vertex sequence.
std::vector<int> bfs_path(const BaseGraph& g, int from, int to, const std::vector<char>& blocked = {});

// All equations hold except possibly the one at v_prime. Charges equal a
// constant a except at one vertex.
std::vector<int> near_solution(const BaseGraph& g, const std::vector<int>& charges, int modulus,
                               int v_prime);

}  // namespace ppw
