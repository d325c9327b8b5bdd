#include "fraver/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fraver {

namespace {

void check_values(const DiscreteMeasure& mu, std::span<const double> f) {
  if (f.size() != mu.size()) throw Error("length mismatch", "need one f value per atom");
}

double radius(const Point& xi, int dim) {
  double r2 = 0.0;
  for (int i = 0; i < dim; ++i) r2 += xi[i] * xi[i];
  return std::sqrt(r2);
}

}  // namespace

GridFunction rasterize(const DiscreteMeasure& mu, std::span<const double> f, const GridSpec& spec) {
  check_values(mu, f);
  if (spec.dim != mu.dim()) throw Error("dimension", "grid and measure dimensions differ");
  spec.validate();
  GridFunction g(spec, SpaceTag::physical);
  const double inv_cell = 1.0 / std::pow(spec.spacing(), spec.dim);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const Atom& a = mu.atoms()[i];
    g.values[spec.nearest_node(a.x)] += f[i] * a.w * inv_cell;
  }
  return g;
}

std::vector<std::complex<double>> measure_fourier(const DiscreteMeasure& mu,
                                                  std::span<const double> f,
                                                  std::span<const Point> xi_set) {
  check_values(mu, f);
  std::vector<std::complex<double>> out(xi_set.size());
  const int dim = mu.dim();
  for (std::size_t m = 0; m < xi_set.size(); ++m) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const Atom& a = mu.atoms()[i];
      double dot = 0.0;
      for (int d = 0; d < dim; ++d) dot += xi_set[m][d] * a.x[d];
      acc += f[i] * a.w * std::polar(1.0, -2.0 * std::numbers::pi * dot);
    }
    out[m] = acc;
  }
  return out;
}

int max_resolved_index(const GridSpec& spec) {
  return static_cast<int>(std::floor(std::log2(spec.nyquist()))) - 2;
}

int max_piece_index(const GridSpec& spec) {
  const double corner = spec.nyquist() * std::sqrt(static_cast<double>(spec.dim));
  int k = 0;
  while (std::ldexp(1.0, k + 1) < corner) ++k;
  return k;
}

GridFunction lp_piece(const DiscreteMeasure& mu, std::span<const double> f, int k,
                      const GridSpec& spec, const DyadicProfile& profile) {
  if (k < 0) throw Error("index", "dyadic index must be nonnegative");
  if (k > max_piece_index(spec))
    throw Error("nyquist", "piece k=" + std::to_string(k) + " lies beyond the grid frequencies");
  GridFunction spectrum = forward_fft(rasterize(mu, f, spec));
  for (std::size_t m = 0; m < spectrum.values.size(); ++m)
    spectrum.values[m] *= profile.bump_radial(k, radius(spec.frequency(m), spec.dim));
  return inverse_fft(spectrum);
}

L2AverageResult l2_average_ratio(const DiscreteMeasure& mu, std::span<const double> f,
                                 std::span<const double> radii, double s, double tolerance) {
  check_values(mu, f);
  if (radii.empty()) throw Error("empty radii", "need at least one radius");
  for (double R : radii)
    if (R < 1.0) throw Error("radius", "averaging radii must be >= 1");
  const int dim = mu.dim();
  const double diam = std::max(mu.diameter(), 0.5);
  const double step = 1.0 / (2.0 * diam);
  const double r_max = *std::max_element(radii.begin(), radii.end());
  const int M = static_cast<int>(std::floor(r_max / step));
  const int width = 2 * M + 1;
  const std::size_t lattice = static_cast<std::size_t>(std::pow(width, dim));
  if (lattice * mu.size() > std::size_t{1} << 34)
    throw Error("budget", "frequency integration exceeds the evaluation budget");

  // Separable phases: table[d][(m + M) * n + i] = e^{-2 pi i m step x_i[d]}.
  const std::size_t n = mu.size();
  std::vector<std::vector<std::complex<double>>> table(dim, std::vector<std::complex<double>>(width * n));
  for (int d = 0; d < dim; ++d)
    for (int m = -M; m <= M; ++m)
      for (std::size_t i = 0; i < n; ++i)
        table[d][(m + M) * n + i] = std::polar(1.0, -2.0 * std::numbers::pi * m * step * mu.atoms()[i].x[d]);

  std::vector<std::pair<double, double>> radial;  // (|xi|, |F(xi)|^2)
  std::vector<std::complex<double>> partial(n), partial2(n);
  for (std::size_t i = 0; i < n; ++i) partial[i] = f[i] * mu.atoms()[i].w;
  const double cell = std::pow(step, dim);

  auto emit = [&](double r, const std::vector<std::complex<double>>& coeff, int d) {
    for (int m = -M; m <= M; ++m) {
      const double rr = std::sqrt(r * r + (m * step) * (m * step));
      if (rr > r_max) continue;
      const auto* t = &table[d][(m + M) * n];
      std::complex<double> acc{0.0, 0.0};
      for (std::size_t i = 0; i < n; ++i) acc += coeff[i] * t[i];
      radial.emplace_back(rr, std::norm(acc));
    }
  };

  if (dim == 1) {
    emit(0.0, partial, 0);
  } else if (dim == 2) {
    for (int m0 = -M; m0 <= M; ++m0) {
      const double r0 = std::abs(m0 * step);
      if (r0 > r_max) continue;
      const auto* t = &table[0][(m0 + M) * n];
      for (std::size_t i = 0; i < n; ++i) partial2[i] = partial[i] * t[i];
      emit(r0, partial2, 1);
    }
  } else {
    std::vector<std::complex<double>> partial3(n);
    for (int m0 = -M; m0 <= M; ++m0) {
      const double r0 = std::abs(m0 * step);
      if (r0 > r_max) continue;
      const auto* t0 = &table[0][(m0 + M) * n];
      for (std::size_t i = 0; i < n; ++i) partial2[i] = partial[i] * t0[i];
      for (int m1 = -M; m1 <= M; ++m1) {
        const double r1 = std::hypot(r0, m1 * step);
        if (r1 > r_max) continue;
        const auto* t1 = &table[1][(m1 + M) * n];
        for (std::size_t i = 0; i < n; ++i) partial3[i] = partial2[i] * t1[i];
        emit(r1, partial3, 2);
      }
    }
  }

  double f_l2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) f_l2 += f[i] * f[i] * mu.atoms()[i].w;
  f_l2 = std::sqrt(f_l2);
  if (!(f_l2 > 0.0)) throw Error("zero function", "f must not vanish identically");

  std::sort(radial.begin(), radial.end());
  std::vector<double> sorted_r(radii.begin(), radii.end());
  std::sort(sorted_r.begin(), sorted_r.end());
  std::vector<std::pair<double, double>> samples;
  L2AverageResult out;
  out.lattice_spacing = step;
  double acc = 0.0;
  std::size_t next = 0;
  for (double R : sorted_r) {
    while (next < radial.size() && radial[next].first <= R) acc += radial[next++].second;
    const double norm = std::sqrt(acc * cell);
    samples.emplace_back(std::log2(R), std::log2(norm));
    out.sup_ratio = std::max(out.sup_ratio, norm / (std::pow(R, (dim - s) / 2.0) * f_l2));
  }
  out.scaling = scaling_fit(std::move(samples), (dim - s) / 2.0, tolerance, ClaimKind::upper_bound,
                            "log2_R");
  return out;
}

}  // namespace fraver
