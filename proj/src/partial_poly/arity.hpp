#pragma once

#include <utility>
#include <vector>

#include "json.hpp"
#include "structures/structure.hpp"

namespace ppw {

// 1-based inclusive interval of coordinates.
using Interval = std::pair<int, int>;
using IntervalDivision = std::vector<Interval>;

// Throws unless the intervals are consecutive and cover [1, r] exactly.
void validate_division(const IntervalDivision& div, int r);
IntervalDivision default_division(int r, int ell);
IntervalDivision division_from_json(const nlohmann::json& j);
nlohmann::json division_to_json(const IntervalDivision& div);

// Drops coordinates i..j of every tuple.
TupleSet project_relation(const TupleSet& r, Interval iv, int arity);

// One relation "R#n" per symbol R and interval n. The division end bounds
// every arity; an interval starting past ar(R) gives an empty relation that
// keeps arity ar(R).
Structure star_operator(const Structure& c, const IntervalDivision& div);

// The star of the near-unanimity closure.
Structure full_reduction(const Structure& a, int ell, const IntervalDivision& div);

// Brute force over domain^arity: membership in r agrees with membership of
// every interval projection in the projected relation. Requires r closed
// under n^ell.
bool verify_arity_trick(const TupleSet& r, int arity, const std::vector<Element>& domain, int ell,
                        const IntervalDivision& div);

}  // namespace ppw
