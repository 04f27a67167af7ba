#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ppw {

using Element = std::uint32_t;
using Tuple = std::vector<Element>;
// Always kept sorted and duplicate-free.
using TupleSet = std::vector<Tuple>;

struct RelSymbol {
  std::string name;
  int arity = 1;

  bool operator==(const RelSymbol&) const = default;
};

using Vocabulary = std::vector<RelSymbol>;

// Partial map between universes, keyed by source element.
using ElementMap = std::map<Element, Element>;

struct Structure {
  Vocabulary vocab;
  std::vector<Element> universe;      // sorted
  std::vector<TupleSet> relations;    // parallel to vocab
  std::map<Element, std::string> labels;

  void normalize();
  // Throws std::invalid_argument on a broken invariant.
  void validate() const;

  int index_of(std::string_view name) const;
  const TupleSet& rel(std::string_view name) const;
  TupleSet& rel(std::string_view name);

  bool contains(Element e) const;
  std::string label(Element e) const;
  std::size_t size() const { return universe.size(); }
  std::size_t tuple_count() const;

  // Labels are presentation only and do not take part in equality.
  bool operator==(const Structure& o) const {
    return vocab == o.vocab && universe == o.universe && relations == o.relations;
  }
};

void sort_unique(TupleSet& ts);
bool contains_tuple(const TupleSet& ts, const Tuple& t);

Structure empty_structure(const Vocabulary& vocab, std::size_t n);

bool same_vocabulary(const Structure& a, const Structure& b);
void require_same_vocabulary(const Structure& a, const Structure& b);

bool leq(const Structure& a, const Structure& b);
Structure union_of(const Structure& a, const Structure& b);
Structure induced(const Structure& a, const std::vector<Element>& subset);

bool is_partial_isomorphism(const Structure& a, const Structure& b, const ElementMap& f);
bool is_homomorphism(const Structure& a, const Structure& b, const ElementMap& h);
std::optional<ElementMap> inverse(const ElementMap& f);
ElementMap compose(const ElementMap& first, const ElementMap& second);

// Pairs of element classes: an element of first may only map into second.
struct ClassConstraint {
  std::vector<std::pair<std::vector<Element>, std::vector<Element>>> classes;
};

}  // namespace ppw
