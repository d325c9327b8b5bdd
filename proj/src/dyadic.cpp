#include "fraver/dyadic.hpp"

#include <cmath>

#include "fraver/common.hpp"

namespace fraver {

double DyadicProfile::cutoff(double t) const {
  if (t <= 1.0) return 1.0;
  if (t >= 2.0) return 0.0;
  const double a = std::exp(-theta / (2.0 - t));
  const double b = std::exp(-theta / (t - 1.0));
  return a / (a + b);
}

double DyadicProfile::bump_radial(int k, double r) const {
  if (k < 0) throw Error("index", "dyadic index must be nonnegative");
  if (k == 0) return cutoff(r / 2.0);
  return cutoff(std::ldexp(r, -(k + 1))) - cutoff(std::ldexp(r, -k));
}

double dyadic_bump(const DyadicProfile& profile, int k, std::span<const double> xi) {
  double r2 = 0.0;
  for (double v : xi) r2 += v * v;
  return profile.bump_radial(k, std::sqrt(r2));
}

}  // namespace fraver
