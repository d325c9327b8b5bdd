#include "fraver/kernels.hpp"

#include <fftw3.h>

#include <cmath>
#include <limits>
#include <numbers>

namespace fraver {

namespace {

constexpr double kPi = std::numbers::pi;

double norm_of(const Point& z, int from, int to) {
  double acc = 0.0;
  for (int i = from; i < to; ++i) acc += z[i] * z[i];
  return std::sqrt(acc);
}

// Fourier transform of the indicator of the radius-R ball in R^m at |xi| = rho.
double ball_ft(int m, double R, double rho) {
  const double x = 2.0 * kPi * R * rho;
  if (m == 2) {
    if (x < 1e-4) return kPi * R * R * (1.0 - x * x / 8.0);
    return R * std::cyl_bessel_j(1.0, x) / rho;
  }
  const double vol = 4.0 / 3.0 * kPi * R * R * R;
  if (x < 1e-2) return vol * (1.0 - x * x / 10.0 + x * x * x * x / 280.0);
  return vol * 3.0 * (std::sin(x) - x * std::cos(x)) / (x * x * x);
}

// Fourier transform of 1{|t| <= 1}.
double interval_ft(double xi) {
  if (std::abs(xi) < 1e-12) return 2.0;
  return std::sin(2.0 * kPi * xi) / (kPi * xi);
}

double psi_bump(double r) {
  const double u = (r - 1.0) / 0.75;
  if (std::abs(u) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

std::size_t signed_offset_point(const GridSpec& g, std::size_t flat, Point& z) {
  const double h = g.spacing();
  std::size_t rest = flat;
  for (int i = g.dim - 1; i >= 0; --i) {
    z[i] = h * dft_index_to_signed(static_cast<int>(rest % g.per_axis), g.per_axis);
    rest /= g.per_axis;
  }
  return flat;
}

// h^d * DFT of the periodically centred samples of K, half spectrum, complex.
std::vector<std::complex<double>> sampled_kernel_spectrum(const OperatorSpec& spec,
                                                          const GridSpec& g) {
  const std::size_t cells = g.cells();
  double* real = fftw_alloc_real(cells);
  const std::size_t half = half_spectrum_size(g);
  fftw_complex* cplx = fftw_alloc_complex(half);
  int n[3] = {g.per_axis, g.per_axis, g.per_axis};
  fftw_plan plan = fftw_plan_dft_r2c(g.dim, n, real, cplx, FFTW_ESTIMATE);
  Point z{};
  for (std::size_t i = 0; i < cells; ++i) {
    signed_offset_point(g, i, z);
    real[i] = kernel_value(spec, z);
  }
  fftw_execute(plan);
  const double cell = std::pow(g.spacing(), g.dim);
  std::vector<std::complex<double>> out(half);
  for (std::size_t i = 0; i < half; ++i) out[i] = cell * std::complex<double>(cplx[i][0], cplx[i][1]);
  fftw_destroy_plan(plan);
  fftw_free(real);
  fftw_free(cplx);
  return out;
}

void check_resolution(const OperatorSpec& spec, const GridSpec& g) {
  const double h = g.spacing();
  if (std::holds_alternative<AnnulusOp>(spec.variant) && spec.epsilon() < 4.0 * h)
    throw Error("underresolved", "annulus thickness below 4 grid spacings");
  if (std::holds_alternative<RieszOp>(spec.variant) && spec.epsilon() < 2.0 * h)
    throw Error("underresolved", "Riesz truncation radius below 2 grid spacings");
}

}  // namespace

void OperatorSpec::validate() const {
  if (dim < 1 || dim > 3) throw Error("dimension", "operator dimension must be 1..3");
  if (!(epsilon() > 0.0)) throw Error("epsilon", "epsilon must be positive");
  if (const auto* a = std::get_if<AnnulusOp>(&variant)) {
    if (a->k_sphere < 1 || a->k_sphere > dim - 1)
      throw Error("k_sphere", "sphere dimension must satisfy 1 <= k <= d-1");
  } else if (const auto* r = std::get_if<RieszOp>(&variant)) {
    if (!(r->alpha > 0.0 && r->alpha < dim)) throw Error("alpha", "Riesz alpha must lie in (0, d)");
  } else {
    const auto& l = std::get<LevelSetOp>(variant);
    if (!levelset_registered(l.phi_id, l.psi_id))
      throw Error("unregistered", "unknown level-set function " + l.phi_id + "/" + l.psi_id);
  }
}

double OperatorSpec::epsilon() const {
  return std::visit([](const auto& v) { return v.epsilon; }, variant);
}

double OperatorSpec::kernel_reach() const {
  if (const auto* a = std::get_if<AnnulusOp>(&variant)) {
    const double r = 1.0 + a->epsilon / 2.0;
    return std::sqrt(r * r + (dim - a->k_sphere - 1));
  }
  return std::numeric_limits<double>::infinity();
}

std::string OperatorSpec::name() const {
  if (std::holds_alternative<AnnulusOp>(variant)) return "annulus";
  if (std::holds_alternative<RieszOp>(variant)) return "riesz";
  return "levelset";
}

OperatorSpec annulus_operator(int dim, int k_sphere, double epsilon) {
  OperatorSpec s{AnnulusOp{k_sphere, epsilon}, dim};
  s.validate();
  return s;
}

OperatorSpec riesz_operator(int dim, double alpha, double epsilon) {
  OperatorSpec s{RieszOp{alpha, epsilon}, dim};
  s.validate();
  return s;
}

OperatorSpec levelset_operator(int dim, std::string phi_id, std::string psi_id, double epsilon) {
  OperatorSpec s{LevelSetOp{std::move(phi_id), std::move(psi_id), epsilon}, dim};
  s.validate();
  return s;
}

nlohmann::json to_json(const OperatorSpec& s) {
  nlohmann::json j = {{"variant", s.name()}, {"dim", s.dim}, {"epsilon", s.epsilon()}};
  if (const auto* a = std::get_if<AnnulusOp>(&s.variant)) j["k_sphere"] = a->k_sphere;
  if (const auto* r = std::get_if<RieszOp>(&s.variant)) j["alpha"] = r->alpha;
  if (const auto* l = std::get_if<LevelSetOp>(&s.variant)) {
    j["phi_id"] = l->phi_id;
    j["psi_id"] = l->psi_id;
  }
  return j;
}

OperatorSpec operator_spec_from_json(const nlohmann::json& j) {
  const std::string v = j.at("variant").get<std::string>();
  const int dim = j.at("dim").get<int>();
  const double eps = j.at("epsilon").get<double>();
  if (v == "annulus") return annulus_operator(dim, j.value("k_sphere", dim - 1), eps);
  if (v == "riesz") return riesz_operator(dim, j.at("alpha").get<double>(), eps);
  if (v == "levelset")
    return levelset_operator(dim, j.at("phi_id").get<std::string>(),
                             j.value("psi_id", std::string("one")), eps);
  throw Error("schema", "unknown operator variant " + v);
}

double MollifierSpec::normalisation() {
  static const double c = [] {
    // Composite Simpson on (-1, 1); the integrand is flat at the ends.
    const int n = 20000;
    const double h = 2.0 / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double t = -1.0 + i * h;
      const double v = std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0;
      acc += v * (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0));
    }
    return 1.0 / (acc * h / 3.0);
  }();
  return c;
}

double MollifierSpec::operator()(double t) const {
  const double u = t / scale;
  if (std::abs(u) >= 1.0) return 0.0;
  return normalisation() * std::exp(-1.0 / (1.0 - u * u)) / scale;
}

double kernel_value(const OperatorSpec& spec, const Point& z) {
  if (const auto* a = std::get_if<AnnulusOp>(&spec.variant)) {
    const int m = a->k_sphere + 1;
    const double r = norm_of(z, 0, m);
    if (!(r > 1.0 - a->epsilon / 2.0 && r < 1.0 + a->epsilon / 2.0)) return 0.0;
    for (int i = m; i < spec.dim; ++i)
      if (std::abs(z[i]) > 1.0) return 0.0;
    return 1.0 / a->epsilon;
  }
  if (const auto* r = std::get_if<RieszOp>(&spec.variant)) {
    const double n = std::max(norm_of(z, 0, spec.dim), r->epsilon);
    return std::pow(n, -(spec.dim - r->alpha));
  }
  throw Error("not a convolution", "level-set operators have no convolution kernel");
}

double levelset_phi(const std::string& id, const Point& x, const Point& y, int dim) {
  if (id == "dot-product") {
    double dot = 0.0;
    for (int i = 0; i < dim; ++i) dot += x[i] * y[i];
    return dot - 1.0;
  }
  if (id == "sphere") return squared_distance(x, y, dim) - 1.0;
  if (id == "paraboloid") {
    double q = 0.0;
    for (int i = 0; i + 1 < dim; ++i) q += (y[i] - x[i]) * (y[i] - x[i]);
    return y[dim - 1] - q - x[dim - 1];
  }
  throw Error("unregistered", "unknown phi_id " + id);
}

double levelset_psi(const std::string& id, const Point& x, const Point& y, int dim) {
  if (id == "one") return 1.0;
  if (id == "away-origin") return psi_bump(norm_of(x, 0, dim)) * psi_bump(norm_of(y, 0, dim));
  throw Error("unregistered", "unknown psi_id " + id);
}

bool levelset_registered(const std::string& phi_id, const std::string& psi_id) {
  const bool phi = phi_id == "dot-product" || phi_id == "sphere" || phi_id == "paraboloid";
  const bool psi = psi_id == "one" || psi_id == "away-origin";
  return phi && psi;
}

double levelset_kernel(const LevelSetOp& op, const Point& x, const Point& y, int dim) {
  const double t = levelset_phi(op.phi_id, x, y, dim) / op.epsilon;
  if (std::abs(t) >= 1.0) return 0.0;
  const double psi = levelset_psi(op.psi_id, x, y, dim);
  if (psi == 0.0) return 0.0;
  return MollifierSpec{}(t) * psi / op.epsilon;
}

GridFunction annulus_kernel(int dim, int k_sphere, double epsilon, const GridSpec& spec) {
  const OperatorSpec op = annulus_operator(dim, k_sphere, epsilon);
  if (spec.dim != dim) throw Error("dimension", "grid and kernel dimensions differ");
  spec.validate();
  check_resolution(op, spec);
  GridFunction g(spec, SpaceTag::physical);
  for (std::size_t n = 0; n < g.values.size(); ++n) {
    Point z = spec.node_position(n);
    for (int i = 0; i < dim; ++i) z[i] -= spec.origin[i] + spec.side / 2.0;
    g.values[n] = kernel_value(op, z);
  }
  return g;
}

GridFunction riesz_kernel(int dim, double alpha, double epsilon, const GridSpec& spec) {
  const OperatorSpec op = riesz_operator(dim, alpha, epsilon);
  if (spec.dim != dim) throw Error("dimension", "grid and kernel dimensions differ");
  spec.validate();
  check_resolution(op, spec);
  GridFunction g(spec, SpaceTag::physical);
  for (std::size_t n = 0; n < g.values.size(); ++n) {
    Point z = spec.node_position(n);
    for (int i = 0; i < dim; ++i) z[i] -= spec.origin[i] + spec.side / 2.0;
    g.values[n] = kernel_value(op, z);
  }
  return g;
}

double annulus_multiplier(int dim, int k_sphere, double epsilon, const Point& xi) {
  const int m = k_sphere + 1;
  const double rho = norm_of(xi, 0, m);
  double v = (ball_ft(m, 1.0 + epsilon / 2.0, rho) - ball_ft(m, 1.0 - epsilon / 2.0, rho)) / epsilon;
  for (int i = m; i < dim; ++i) v *= interval_ft(xi[i]);
  return v;
}

std::size_t half_spectrum_size(const GridSpec& grid) {
  std::size_t n = static_cast<std::size_t>(grid.per_axis / 2 + 1);
  for (int i = 0; i + 1 < grid.dim; ++i) n *= static_cast<std::size_t>(grid.per_axis);
  return n;
}

Point half_spectrum_frequency(const GridSpec& grid, std::size_t flat) {
  Point f{};
  const int last = grid.per_axis / 2 + 1;
  f[grid.dim - 1] = static_cast<double>(flat % last) / grid.side;
  flat /= last;
  for (int i = grid.dim - 2; i >= 0; --i) {
    f[i] = dft_index_to_signed(static_cast<int>(flat % grid.per_axis), grid.per_axis) / grid.side;
    flat /= grid.per_axis;
  }
  return f;
}

std::vector<double> kernel_multiplier_half(const OperatorSpec& spec, const GridSpec& grid) {
  spec.validate();
  const std::size_t half = half_spectrum_size(grid);
  std::vector<double> out(half);
  if (const auto* a = std::get_if<AnnulusOp>(&spec.variant)) {
    for (std::size_t i = 0; i < half; ++i)
      out[i] = annulus_multiplier(spec.dim, a->k_sphere, a->epsilon, half_spectrum_frequency(grid, i));
    return out;
  }
  if (!spec.is_convolution()) throw Error("not a convolution", "level-set operators have no multiplier");
  check_resolution(spec, grid);
  const auto spectrum = sampled_kernel_spectrum(spec, grid);
  for (std::size_t i = 0; i < half; ++i) out[i] = spectrum[i].real();
  return out;
}

std::vector<std::pair<double, double>> sampled_multiplier_radial(const OperatorSpec& spec,
                                                                 const GridSpec& grid) {
  spec.validate();
  if (!spec.is_convolution()) throw Error("not a convolution", "level-set operators have no multiplier");
  grid.validate();
  check_resolution(spec, grid);
  const auto spectrum = sampled_kernel_spectrum(spec, grid);
  std::vector<std::pair<double, double>> out(spectrum.size());
  for (std::size_t i = 0; i < spectrum.size(); ++i)
    out[i] = {norm_of(half_spectrum_frequency(grid, i), 0, grid.dim), std::abs(spectrum[i])};
  return out;
}

}  // namespace fraver
