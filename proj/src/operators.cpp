#include "fraver/operators.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "fraver/fourier.hpp"

namespace fraver {

namespace {

double radius(const Point& xi, int dim) {
  double r2 = 0.0;
  for (int i = 0; i < dim; ++i) r2 += xi[i] * xi[i];
  return std::sqrt(r2);
}

void check_values(const DiscreteMeasure& mu, std::span<const double> f) {
  if (f.size() != mu.size()) throw Error("length mismatch", "need one f value per atom");
}

int largest_per_axis(int dim, std::size_t budget) {
  int n = 8;
  while (std::pow(2.0 * n, dim) <= static_cast<double>(budget)) n *= 2;
  return n;
}

// Half-spectrum index of the full-spectrum index `flat` (conjugate-symmetric
// partner when the last coordinate is past N/2).
std::size_t half_index(const GridSpec& g, std::size_t flat) {
  const int n = g.per_axis;
  std::array<int, kMaxDim> idx{};
  for (int i = g.dim - 1; i >= 0; --i) {
    idx[i] = static_cast<int>(flat % n);
    flat /= n;
  }
  if (idx[g.dim - 1] > n / 2)
    for (int i = 0; i < g.dim; ++i) idx[i] = (n - idx[i]) % n;
  std::size_t out = 0;
  for (int i = 0; i + 1 < g.dim; ++i) out = out * n + idx[i];
  return out * (n / 2 + 1) + idx[g.dim - 1];
}

}  // namespace

struct GridConvolution::Buffers {
  double* real = nullptr;
  fftw_complex* cplx = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  ~Buffers() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    fftw_free(real);
    fftw_free(cplx);
  }
};

GridConvolution::GridConvolution(GridSpec grid, std::vector<double> multiplier_half)
    : grid_(grid), multiplier_(std::move(multiplier_half)), buf_(std::make_unique<Buffers>()) {
  grid_.validate();
  if (multiplier_.size() != half_spectrum_size(grid_))
    throw Error("length mismatch", "multiplier does not match the half spectrum");
  buf_->real = fftw_alloc_real(grid_.cells());
  buf_->cplx = fftw_alloc_complex(half_spectrum_size(grid_));
  int n[3] = {grid_.per_axis, grid_.per_axis, grid_.per_axis};
  buf_->forward = fftw_plan_dft_r2c(grid_.dim, n, buf_->real, buf_->cplx, FFTW_ESTIMATE);
  buf_->backward = fftw_plan_dft_c2r(grid_.dim, n, buf_->cplx, buf_->real, FFTW_ESTIMATE);
  const double scale = 1.0 / std::pow(grid_.side, grid_.dim);
  for (double& m : multiplier_) m *= scale;
}

GridConvolution::~GridConvolution() = default;
GridConvolution::GridConvolution(GridConvolution&&) noexcept = default;
GridConvolution& GridConvolution::operator=(GridConvolution&&) noexcept = default;

std::vector<double> GridConvolution::apply(const DiscreteMeasure& mu, std::span<const double> f,
                                           std::span<const Point> out_points) const {
  check_values(mu, f);
  if (mu.dim() != grid_.dim) throw Error("dimension", "grid and measure dimensions differ");
  std::fill(buf_->real, buf_->real + grid_.cells(), 0.0);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const Atom& a = mu.atoms()[i];
    if (f[i] != 0.0) buf_->real[grid_.nearest_node(a.x)] += f[i] * a.w;
  }
  fftw_execute(buf_->forward);
  for (std::size_t m = 0; m < multiplier_.size(); ++m) {
    buf_->cplx[m][0] *= multiplier_[m];
    buf_->cplx[m][1] *= multiplier_[m];
  }
  fftw_execute(buf_->backward);
  std::vector<double> out(out_points.size());
  for (std::size_t i = 0; i < out_points.size(); ++i) out[i] = buf_->real[grid_.nearest_node(out_points[i])];
  return out;
}

GridConvolution make_convolution(const OperatorSpec& spec, const GridSpec& grid, std::optional<int> k,
                                 const DyadicProfile& profile) {
  if (!spec.is_convolution()) throw Error("not a convolution", "level-set operators have no multiplier");
  if (spec.dim != grid.dim) throw Error("dimension", "grid and operator dimensions differ");
  grid.validate();
  std::vector<double> m = kernel_multiplier_half(spec, grid);
  if (k) {
    if (*k < 0) throw Error("index", "dyadic index must be nonnegative");
    if (*k > max_piece_index(grid))
      throw Error("nyquist", "piece k=" + std::to_string(*k) + " lies beyond the grid frequencies");
    for (std::size_t i = 0; i < m.size(); ++i)
      m[i] *= profile.bump_radial(*k, radius(half_spectrum_frequency(grid, i), grid.dim));
  }
  return GridConvolution(grid, std::move(m));
}

GridSpec padded_grid(const OperatorSpec& spec, const DiscreteMeasure& mu,
                     std::span<const Point> out_points, int per_axis) {
  const int dim = mu.dim();
  Box box = mu.bounding_box();
  for (const Point& p : out_points)
    for (int i = 0; i < dim; ++i) {
      box.lo[i] = std::min(box.lo[i], p[i]);
      box.hi[i] = std::max(box.hi[i], p[i]);
    }
  double extent = 0.0;
  for (int i = 0; i < dim; ++i) extent = std::max(extent, box.hi[i] - box.lo[i]);
  double side;
  if (std::holds_alternative<AnnulusOp>(spec.variant))
    side = 1.05 * (extent + spec.kernel_reach()) + 0.05;
  else if (std::holds_alternative<RieszOp>(spec.variant))
    side = std::max(2.1 * extent, 1.0) + 0.05;
  else
    side = extent + 1.0;
  GridSpec g;
  g.dim = dim;
  g.per_axis = per_axis;
  g.side = side;
  for (int i = 0; i < dim; ++i) g.origin[i] = 0.5 * (box.lo[i] + box.hi[i]) - side / 2.0;
  return g;
}

GridSpec piece_grid(const OperatorSpec& spec, const DiscreteMeasure& mu,
                    std::span<const Point> out_points, int k, std::size_t budget) {
  GridSpec g = padded_grid(spec, mu, out_points, 8);
  const double needed = std::ldexp(1.0, k + 2) * 2.0 * g.side;
  int n = mu.dim() <= 2 ? 512 : 64;
  while (n < needed) n *= 2;
  if (n > largest_per_axis(mu.dim(), budget))
    throw Error("nyquist", "piece k=" + std::to_string(k) + " needs a grid beyond the cell budget");
  g.per_axis = n;
  return g;
}

std::vector<double> apply_operator(const OperatorSpec& spec, const DiscreteMeasure& mu,
                                   std::span<const double> f, std::span<const Point> out_points,
                                   const ApplyOptions& options) {
  spec.validate();
  check_values(mu, f);
  if (spec.dim != mu.dim()) throw Error("dimension", "operator and measure dimensions differ");
  const int dim = mu.dim();
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (f[i] != 0.0 && mu.atoms()[i].w != 0.0) support.push_back(i);
  std::vector<double> out(out_points.size(), 0.0);
  if (support.empty()) return out;

  const double pairs = static_cast<double>(support.size()) * static_cast<double>(out_points.size());
  const bool direct = !options.force_grid && pairs <= static_cast<double>(options.direct_budget);
  if (const auto* l = std::get_if<LevelSetOp>(&spec.variant)) {
    if (!direct) throw Error("budget", "level-set operators are summed directly; budget exceeded");
    for (std::size_t m = 0; m < out_points.size(); ++m) {
      double acc = 0.0;
      for (std::size_t i : support) {
        const Atom& a = mu.atoms()[i];
        acc += levelset_kernel(*l, out_points[m], a.x, dim) * f[i] * a.w;
      }
      out[m] = acc;
    }
    return out;
  }
  if (direct) {
    Point z{};
    for (std::size_t m = 0; m < out_points.size(); ++m) {
      double acc = 0.0;
      for (std::size_t i : support) {
        const Atom& a = mu.atoms()[i];
        for (int d = 0; d < dim; ++d) z[d] = out_points[m][d] - a.x[d];
        acc += kernel_value(spec, z) * f[i] * a.w;
      }
      out[m] = acc;
    }
    return out;
  }

  GridSpec grid;
  if (options.grid) {
    grid = *options.grid;
  } else {
    int n = options.per_axis;
    if (n == 0) {
      const GridSpec probe = padded_grid(spec, mu, out_points, 8);
      const double per_eps = std::holds_alternative<AnnulusOp>(spec.variant) ? 4.0 : 2.0;
      n = 8;
      while (n * spec.epsilon() < per_eps * probe.side) n *= 2;
      n = std::min(n, largest_per_axis(dim, kDefaultCellBudget));
    }
    grid = padded_grid(spec, mu, out_points, n);
  }
  return make_convolution(spec, grid).apply(mu, f, out_points);
}

std::vector<double> apply_Ak(const OperatorSpec& spec, const DiscreteMeasure& mu,
                             std::span<const double> f, int k, const GridSpec& grid,
                             std::span<const Point> out_points, const DyadicProfile& profile) {
  spec.validate();
  check_values(mu, f);
  if (spec.is_convolution()) return make_convolution(spec, grid, k, profile).apply(mu, f, out_points);

  const auto& op = std::get<LevelSetOp>(spec.variant);
  const GridFunction piece = lp_piece(mu, f, k, grid, profile);
  const double pairs = static_cast<double>(grid.cells()) * static_cast<double>(out_points.size());
  if (pairs > std::ldexp(1.0, 28)) throw Error("budget", "level-set piece sum exceeds the budget");
  const double cell = std::pow(grid.spacing(), grid.dim);
  std::vector<double> out(out_points.size(), 0.0);
  for (std::size_t n = 0; n < piece.values.size(); ++n) {
    const double v = piece.values[n].real();
    if (v == 0.0) continue;
    const Point z = grid.node_position(n);
    for (std::size_t m = 0; m < out_points.size(); ++m)
      out[m] += levelset_kernel(op, out_points[m], z, grid.dim) * v * cell;
  }
  return out;
}

ScalingReport multiplier_sobolev_check(const OperatorSpec& spec, double alpha, const GridSpec& grid,
                                       int j_min, int j_max, double tolerance) {
  if (!spec.is_convolution()) throw Error("not a convolution", "level-set operators have no multiplier");
  if (std::ldexp(1.0, j_max + 1) > grid.nyquist())
    throw Error("nyquist", "frequency shells exceed the grid's Nyquist frequency");
  const auto radial = sampled_multiplier_radial(spec, grid);
  std::vector<double> sup(j_max - j_min + 1, 0.0);
  for (const auto& [r, v] : radial) {
    if (r < std::ldexp(1.0, j_min) || r >= std::ldexp(1.0, j_max + 1)) continue;
    const int j = static_cast<int>(std::floor(std::log2(r)));
    if (j < j_min || j > j_max) continue;
    sup[j - j_min] = std::max(sup[j - j_min], v * std::pow(1.0 + r, alpha));
  }
  std::vector<std::pair<double, double>> samples;
  for (int j = j_min; j <= j_max; ++j) samples.emplace_back(j, std::log2(sup[j - j_min]));
  return scaling_fit(std::move(samples), 0.0, tolerance, ClaimKind::upper_bound, "k_index");
}

std::complex<double> pairing(const DiscreteMeasure& mu, std::span<const std::complex<double>> u,
                             std::span<const std::complex<double>> v) {
  if (u.size() != mu.size() || v.size() != mu.size())
    throw Error("length mismatch", "need one value per atom");
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t i = 0; i < mu.size(); ++i) acc += u[i] * std::conj(v[i]) * mu.atoms()[i].w;
  return acc;
}

double pairing(const DiscreteMeasure& mu, std::span<const double> u, std::span<const double> v) {
  if (u.size() != mu.size() || v.size() != mu.size())
    throw Error("length mismatch", "need one value per atom");
  double acc = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) acc += u[i] * v[i] * mu.atoms()[i].w;
  return acc;
}

namespace {

// K^ on every DFT index of the grid (full layout).
std::vector<double> full_multiplier(const OperatorSpec& spec, const GridSpec& grid) {
  const std::vector<double> half = kernel_multiplier_half(spec, grid);
  std::vector<double> out(grid.cells());
  for (std::size_t m = 0; m < out.size(); ++m) out[m] = half[half_index(grid, m)];
  return out;
}

struct SpectralData {
  std::vector<double> multiplier;
  std::vector<double> abs_xi;
  GridFunction ff;
  GridFunction fg;
};

SpectralData spectral_data(const OperatorSpec& spec, const DiscreteMeasure& mu, std::span<const double> f,
                           std::span<const double> g, const GridSpec& grid) {
  SpectralData s;
  s.multiplier = full_multiplier(spec, grid);
  s.abs_xi.resize(grid.cells());
  for (std::size_t m = 0; m < s.abs_xi.size(); ++m) s.abs_xi[m] = radius(grid.frequency(m), grid.dim);
  s.ff = forward_fft(rasterize(mu, f, grid));
  s.fg = forward_fft(rasterize(mu, g, grid));
  return s;
}

std::complex<double> spectral_pairing(const SpectralData& s, const GridSpec& grid, int k, int j,
                                      const DyadicProfile& profile) {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t m = 0; m < s.abs_xi.size(); ++m) {
    const double w = profile.bump_radial(k, s.abs_xi[m]);
    if (w == 0.0) continue;
    const double v = profile.bump_radial(j, s.abs_xi[m]);
    if (v == 0.0) continue;
    acc += s.multiplier[m] * w * v * s.ff.values[m] * std::conj(s.fg.values[m]);
  }
  return acc / std::pow(grid.side, grid.dim);
}

}  // namespace

std::complex<double> piece_pairing_frequency(const OperatorSpec& spec, const DiscreteMeasure& mu,
                                             std::span<const double> f, std::span<const double> g,
                                             int k, int j, const GridSpec& grid,
                                             const DyadicProfile& profile) {
  check_values(mu, f);
  check_values(mu, g);
  const SpectralData s = spectral_data(spec, mu, f, g, grid);
  return spectral_pairing(s, grid, k, j, profile);
}

DisjointnessResult disjointness_decay(const OperatorSpec& spec, const DiscreteMeasure& mu,
                                      std::span<const double> f, std::span<const double> g,
                                      std::span<const int> j_range, std::span<const int> k_range,
                                      const GridSpec& grid, double slope_bound) {
  spec.validate();
  check_values(mu, f);
  check_values(mu, g);
  if (j_range.empty() || k_range.empty()) throw Error("index", "empty index range");
  const int top = std::max(*std::max_element(j_range.begin(), j_range.end()),
                           *std::max_element(k_range.begin(), k_range.end()));
  if (top > max_resolved_index(grid))
    throw Error("nyquist", "index " + std::to_string(top) + " exceeds the resolved range of the grid");

  DisjointnessResult r;
  r.j_values.assign(j_range.begin(), j_range.end());
  r.k_values.assign(k_range.begin(), k_range.end());
  r.magnitude.assign(r.j_values.size(), std::vector<double>(r.k_values.size(), 0.0));
  const DyadicProfile profile;

  if (spec.is_convolution()) {
    const SpectralData s = spectral_data(spec, mu, f, g, grid);
    for (std::size_t a = 0; a < r.j_values.size(); ++a)
      for (std::size_t b = 0; b < r.k_values.size(); ++b)
        r.magnitude[a][b] = std::abs(spectral_pairing(s, grid, r.k_values[b], r.j_values[a], profile));
  } else {
    const auto& op = std::get<LevelSetOp>(spec.variant);
    const std::size_t cells = grid.cells();
    if (static_cast<double>(cells) * static_cast<double>(cells) > std::ldexp(1.0, 28))
      throw Error("budget", "level-set disjointness needs a smaller grid");
    const double cell = std::pow(grid.spacing(), grid.dim);
    std::vector<Point> nodes(cells);
    for (std::size_t n = 0; n < cells; ++n) nodes[n] = grid.node_position(n);
    auto piece_real = [&](std::span<const double> h, int idx) {
      const GridFunction p = lp_piece(mu, h, idx, grid, profile);
      std::vector<double> v(cells);
      for (std::size_t n = 0; n < cells; ++n) v[n] = p.values[n].real();
      return v;
    };
    std::vector<std::vector<double>> g_pieces;
    for (int j : r.j_values) g_pieces.push_back(piece_real(g, j));
    for (std::size_t b = 0; b < r.k_values.size(); ++b) {
      const std::vector<double> fk = piece_real(f, r.k_values[b]);
      std::vector<double> afk(cells, 0.0);
      for (std::size_t n = 0; n < cells; ++n) {
        if (fk[n] == 0.0) continue;
        for (std::size_t m = 0; m < cells; ++m)
          afk[m] += levelset_kernel(op, nodes[m], nodes[n], grid.dim) * fk[n] * cell;
      }
      for (std::size_t a = 0; a < r.j_values.size(); ++a) {
        double acc = 0.0;
        for (std::size_t m = 0; m < cells; ++m) acc += afk[m] * g_pieces[a][m] * cell;
        r.magnitude[a][b] = std::abs(acc);
      }
    }
  }

  std::vector<std::pair<double, double>> samples;
  bool any_off = false;
  for (std::size_t a = 0; a < r.j_values.size(); ++a)
    for (std::size_t b = 0; b < r.k_values.size(); ++b) {
      const int j = r.j_values[a], k = r.k_values[b];
      const double v = r.magnitude[a][b];
      if (std::abs(j - k) <= r.band) {
        r.on_band_max = std::max(r.on_band_max, v);
      } else {
        any_off = true;
        r.off_band_max = std::max(r.off_band_max, v);
        if (v > 0.0) samples.emplace_back(std::max(j, k), std::log2(v));
      }
    }
  r.off_band_below_on_band = r.off_band_max <= r.on_band_max;
  r.off_band_vanishes = any_off && r.off_band_max <= 1e-12 * r.on_band_max;
  if (!r.off_band_vanishes && samples.size() >= 4) {
    try {
      r.off_band_fit = scaling_fit(samples, slope_bound, 0.0, ClaimKind::upper_bound, "k_index");
    } catch (const Error&) {
    }
  }
  if (!r.off_band_below_on_band || (r.off_band_fit && r.off_band_fit->verdict == "violated"))
    r.verdict = "violated";
  else if (r.off_band_vanishes || (r.off_band_fit && r.off_band_fit->verdict == "consistent"))
    r.verdict = "consistent";
  return r;
}

nlohmann::json to_json(const DisjointnessResult& r) {
  nlohmann::json j = {{"j_values", r.j_values},
                      {"k_values", r.k_values},
                      {"magnitude", r.magnitude},
                      {"band", r.band},
                      {"on_band_max", r.on_band_max},
                      {"off_band_max", r.off_band_max},
                      {"off_band_vanishes", r.off_band_vanishes},
                      {"off_band_below_on_band", r.off_band_below_on_band},
                      {"verdict", r.verdict}};
  j["off_band_fit"] = r.off_band_fit ? to_json(*r.off_band_fit) : nlohmann::json(nullptr);
  return j;
}

}  // namespace fraver
