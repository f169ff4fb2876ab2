// Cached grid samples of the potential and its virial <grad V, x>.
#pragma once

#include <memory>

#include "fracground/grid_spectral.hpp"
#include "fracground/model.hpp"

namespace fracground::detail {

std::shared_ptr<const RealField> potential_on(const BoxGrid& g, const Potential& V, bool virial);

}  // namespace fracground::detail
