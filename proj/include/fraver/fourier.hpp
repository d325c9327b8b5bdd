#pragma once

#include <complex>
#include <span>
#include <vector>

#include "fraver/dyadic.hpp"
#include "fraver/grid.hpp"
#include "fraver/measures.hpp"
#include "fraver/scaling.hpp"

namespace fraver {

/// Density of f mu on the grid: every atom is snapped to its nearest node
/// and contributes f * w / h^d there.
GridFunction rasterize(const DiscreteMeasure& mu, std::span<const double> f, const GridSpec& spec);

/// Exact sum_atoms f(x) w(x) e^{-2 pi i xi . x} for every xi.
std::vector<std::complex<double>> measure_fourier(const DiscreteMeasure& mu,
                                                  std::span<const double> f,
                                                  std::span<const Point> xi_set);

/// Largest k whose whole shell 2^k..2^{k+2} sits below the per-axis Nyquist
/// frequency; pieces up to this index are exact on the grid.
int max_resolved_index(const GridSpec& spec);
/// Smallest K with sum_{k<=K} rho_k = 1 on every grid frequency.
int max_piece_index(const GridSpec& spec);

/// The k-th Littlewood-Paley piece of f mu sampled on the grid: FFT of the
/// rasterised density, times rho_k, inverse FFT. Throws "nyquist" when the
/// shell lies entirely beyond the grid's frequencies.
GridFunction lp_piece(const DiscreteMeasure& mu, std::span<const double> f, int k,
                      const GridSpec& spec, const DyadicProfile& profile = {});

struct L2AverageResult {
  ScalingReport scaling;  // log2 ||(f mu)^||_{L2(B(0,R))} against log2 R
  double sup_ratio = 0.0;  // max_R norm / (R^{(d-s)/2} ||f||_{L2(mu)})
  double lattice_spacing = 0.0;
};

/// Integrates |(f mu)^|^2 over B(0, R) on the frequency lattice of spacing
/// 1 / (2 diam), for each R, and fits the growth against R^{(d-s)/2}.
L2AverageResult l2_average_ratio(const DiscreteMeasure& mu, std::span<const double> f,
                                 std::span<const double> radii, double s,
                                 double tolerance = 0.1);

}  // namespace fraver
