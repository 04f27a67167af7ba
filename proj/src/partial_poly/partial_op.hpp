#pragma once

#include <optional>
#include <string>
#include <vector>

#include "structures/structure.hpp"

namespace ppw {

enum class OpKind { NearUnanimity, Maltsev };

// The two partial operation families: near-unanimity n^ell and the partial
// Maltsev operation. Both depend only on the equality pattern of their input.
struct PartialOp {
  OpKind kind = OpKind::NearUnanimity;
  int ell = 3;

  static PartialOp nu(int ell);
  static PartialOp maltsev() { return {OpKind::Maltsev, 3}; }

  int arity() const { return kind == OpKind::Maltsev ? 3 : ell; }
  std::optional<Element> eval(const Element* args) const;
  std::string name() const;
};

// Parses "nu:<ell>" or "maltsev".
PartialOp parse_op(const std::string& text);

std::optional<Element> eval_nu(int ell, const std::vector<Element>& args);
std::optional<Element> eval_maltsev(Element a, Element b, Element c);

std::optional<Tuple> apply_columnwise(const PartialOp& p, const std::vector<Tuple>& rows);

enum class ImageStrategy { Auto, Enumerate, Candidates };

// p(R): every defined column-wise image of a p-arity sequence of rows.
TupleSet apply_to_relation(const PartialOp& p, const TupleSet& r,
                           ImageStrategy strategy = ImageStrategy::Auto);
Structure apply_to_structure(const PartialOp& p, const Structure& a);

bool relation_closed(const PartialOp& p, const TupleSet& r);
bool is_partial_polymorphism(const PartialOp& p, const Structure& a);

TupleSet close_relation(const PartialOp& p, const TupleSet& r, int* passes = nullptr);
Structure close_structure(const PartialOp& p, const Structure& a, int* passes = nullptr);
TupleSet close_tuple_set_maltsev(const TupleSet& p);

}  // namespace ppw
