#include "fraver/restricted_weak.hpp"

#include <cmath>

#include "fraver/fourier.hpp"
#include "fraver/norms.hpp"
#include "fraver/operators.hpp"

namespace fraver {

ScalingReport restricted_weak_check(const OperatorSpec& spec, const DiscreteMeasure& mu,
                                    std::span<const std::size_t> E, std::span<const int> k_range,
                                    double s, double tolerance, const PieceGridPolicy& grid_for) {
  std::vector<double> chi(mu.size(), 0.0);
  for (std::size_t i : E) {
    if (i >= mu.size()) throw Error("index", "atom index out of range");
    chi[i] = 1.0;
  }
  const double mass_E = lp_norm(mu, chi, 1.0);
  if (!(mass_E > 0.0)) throw Error("empty set", "E carries no mass");
  const std::vector<Point> atoms = atom_points(mu);
  std::vector<std::pair<double, double>> samples;
  for (int k : k_range) {
    const GridSpec grid = grid_for ? grid_for(k) : piece_grid(spec, mu, atoms, k);
    if (k > max_resolved_index(grid))
      throw Error("nyquist", "piece k=" + std::to_string(k) + " is not resolved on its grid");
    const std::vector<double> image = apply_Ak(spec, mu, chi, k, grid, atoms);
    samples.emplace_back(k, std::log2(lp_norm(mu, image, 1.0) / mass_E));
  }
  return scaling_fit(std::move(samples), mu.dim() - s, tolerance, ClaimKind::upper_bound, "k_index");
}

}  // namespace fraver
