#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "fraver/dyadic.hpp"
#include "fraver/grid.hpp"
#include "fraver/kernels.hpp"
#include "fraver/measures.hpp"
#include "fraver/scaling.hpp"

namespace fraver {

/// Periodic convolution of atomic data with a fixed real multiplier on one
/// grid. Atoms are deposited on their nearest node (weight f * w), the
/// result is read back at the nodes nearest to the output points:
///   out = (1 / side^d) IDFT[m * DFT(deposit)].
/// Keeps its FFTW plans and buffers, so repeated applications are cheap.
/// Not safe for concurrent use of one instance.
class GridConvolution {
 public:
  GridConvolution(GridSpec grid, std::vector<double> multiplier_half);
  ~GridConvolution();
  GridConvolution(GridConvolution&&) noexcept;
  GridConvolution& operator=(GridConvolution&&) noexcept;

  std::vector<double> apply(const DiscreteMeasure& mu, std::span<const double> f,
                            std::span<const Point> out_points) const;
  const GridSpec& grid() const { return grid_; }
  std::span<const double> multiplier() const { return multiplier_; }

 private:
  struct Buffers;
  GridSpec grid_;
  std::vector<double> multiplier_;
  std::unique_ptr<Buffers> buf_;
};

/// Convolution for `spec` on `grid`; with `k` set the multiplier also
/// carries rho_k, giving the piece operator f -> A (f mu)_k.
GridConvolution make_convolution(const OperatorSpec& spec, const GridSpec& grid,
                                 std::optional<int> k = std::nullopt,
                                 const DyadicProfile& profile = {});

/// Box grid, centred on the data, large enough that periodic wraparound
/// never reaches an output point: side >= extent + reach for the annulus,
/// twice the extent for Riesz.
GridSpec padded_grid(const OperatorSpec& spec, const DiscreteMeasure& mu,
                     std::span<const Point> out_points, int per_axis);
/// Padded grid fine enough that the whole shell of rho_k sits below Nyquist.
GridSpec piece_grid(const OperatorSpec& spec, const DiscreteMeasure& mu,
                    std::span<const Point> out_points, int k,
                    std::size_t budget = kDefaultCellBudget);

struct ApplyOptions {
  std::size_t direct_budget = std::size_t{1} << 26;  // nonzero inputs x outputs
  int per_axis = 0;                                   // grid fallback, 0 = automatic
  bool force_grid = false;
  std::optional<GridSpec> grid;
};

/// (A_eps f)(x) = sum_atoms K(x - y) f(y) w(y) (direct sum), or the grid
/// convolution when the direct sum exceeds the budget. Level-set operators
/// are always summed directly.
std::vector<double> apply_operator(const OperatorSpec& spec, const DiscreteMeasure& mu,
                                   std::span<const double> f, std::span<const Point> out_points,
                                   const ApplyOptions& options = {});

/// A (f mu)_k at the output points.
std::vector<double> apply_Ak(const OperatorSpec& spec, const DiscreteMeasure& mu,
                             std::span<const double> f, int k, const GridSpec& grid,
                             std::span<const Point> out_points, const DyadicProfile& profile = {});

/// Shell-wise sup of |K^(xi)| (1 + |xi|)^alpha over 2^j <= |xi| < 2^{j+1},
/// j = j_min..j_max, fitted against j. Predicted slope 0, one-sided.
ScalingReport multiplier_sobolev_check(const OperatorSpec& spec, double alpha,
                                       const GridSpec& grid, int j_min = 1, int j_max = 6,
                                       double tolerance = 0.1);

/// sum u conj(v) w.
std::complex<double> pairing(const DiscreteMeasure& mu, std::span<const std::complex<double>> u,
                             std::span<const std::complex<double>> v);
double pairing(const DiscreteMeasure& mu, std::span<const double> u, std::span<const double> v);

/// <A (f mu)_k, (g mu)_j> in L^2(R^d), computed on the frequency side:
/// side^{-d} sum K^ rho_k rho_j F_f conj(F_g).
std::complex<double> piece_pairing_frequency(const OperatorSpec& spec, const DiscreteMeasure& mu,
                                             std::span<const double> f, std::span<const double> g,
                                             int k, int j, const GridSpec& grid,
                                             const DyadicProfile& profile = {});

struct DisjointnessResult {
  std::vector<int> j_values;
  std::vector<int> k_values;
  std::vector<std::vector<double>> magnitude;  // [j][k]
  int band = 2;                                 // |j - k| <= band is on-band
  double on_band_max = 0.0;
  double off_band_max = 0.0;
  bool off_band_vanishes = false;
  bool off_band_below_on_band = true;
  std::optional<ScalingReport> off_band_fit;  // log2 |entry| vs max(j, k), |j - k| > band
  std::string verdict = "inconclusive";
};

DisjointnessResult disjointness_decay(const OperatorSpec& spec, const DiscreteMeasure& mu,
                                      std::span<const double> f, std::span<const double> g,
                                      std::span<const int> j_range, std::span<const int> k_range,
                                      const GridSpec& grid, double slope_bound = -4.0);

nlohmann::json to_json(const DisjointnessResult& r);

}  // namespace fraver
