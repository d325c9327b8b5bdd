#pragma once

#include <span>

namespace fraver {

/// Smooth radial cutoff phi (1 on |eta| <= 1, 0 on |eta| >= 2, built from
/// the exp(-theta / t) transition) and the telescoping dyadic bumps
///   rho_0(xi) = phi(xi / 2),   rho_k(xi) = phi(xi / 2^{k+1}) - phi(xi / 2^k),
/// so rho_k is supported in 2^k <= |xi| <= 2^{k+2} and
/// sum_{k <= K} rho_k = phi(xi / 2^{K+1}) exactly.
struct DyadicProfile {
  double theta = 1.0;
  int k_max = 12;

  double cutoff(double t) const;
  double bump_radial(int k, double r) const;
};

double dyadic_bump(const DyadicProfile& profile, int k, std::span<const double> xi);

}  // namespace fraver
