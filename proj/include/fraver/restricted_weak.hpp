#pragma once

#include <functional>
#include <span>

#include "fraver/kernels.hpp"
#include "fraver/measures.hpp"
#include "fraver/scaling.hpp"

namespace fraver {

/// Grid used for piece k; defaults to piece_grid over the measure's atoms.
using PieceGridPolicy = std::function<GridSpec(int k)>;

/// ||A_k chi_E||_{L^1(mu)} / mu(E) for each k, fitted against k with the
/// one-sided prediction d - s.
ScalingReport restricted_weak_check(const OperatorSpec& spec, const DiscreteMeasure& mu,
                                    std::span<const std::size_t> E, std::span<const int> k_range,
                                    double s, double tolerance = 0.3,
                                    const PieceGridPolicy& grid_for = {});

}  // namespace fraver
