#pragma once

#include <utility>
#include <vector>

#include "structures/structure.hpp"

namespace ppw {

// Partial-isomorphism test for small maps between two fixed structures; only
// the tuples touching the domain are inspected.
class PartialIsoChecker {
 public:
  PartialIsoChecker(const Structure& a, const Structure& b);

  bool check(const std::vector<std::pair<Element, Element>>& pairs) const;

 private:
  struct Side {
    const Structure* s;
    struct Entry {
      int rel, tuple, distinct;
    };
    std::vector<std::vector<Entry>> incident;  // by universe position
  };
  static Side index(const Structure& s);
  static bool preserved(const Side& from, const Side& to,
                        const std::vector<std::pair<Element, Element>>& f);

  Side a_, b_;
};

}  // namespace ppw
