#pragma once

#include <optional>

#include "structures/search.hpp"
#include "structures/structure.hpp"

namespace ppw {

std::optional<ElementMap> find_isomorphism(const Structure& a, const Structure& b,
                                           const std::optional<ClassConstraint>& classes = std::nullopt,
                                           const SearchConfig& cfg = {});

// Repeatedly retracts onto the image of an endomorphism that misses one
// element, until no such endomorphism exists.
Structure compute_core(const Structure& a, const SearchConfig& cfg = {});

}  // namespace ppw
