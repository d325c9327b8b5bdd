#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "fraver/fourier.hpp"
#include "fraver/measures.hpp"
#include "fraver/operators.hpp"
#include "fraver/restricted_weak.hpp"

using namespace fraver;

namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
double simpson(F&& f, double a, double b, int n = 4000) {
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// Radial integral of the annulus indicator against the plane-wave average.
double annulus_ft_oracle(int m, double eps, double rho) {
  auto shell = [&](double r) {
    if (m == 2) return 2.0 * kPi * r * std::cyl_bessel_j(0.0, 2.0 * kPi * r * rho);
    const double x = 2.0 * kPi * r * rho;
    return 4.0 * kPi * r * r * (x < 1e-9 ? 1.0 : std::sin(x) / x);
  };
  return simpson(shell, 1.0 - eps / 2.0, 1.0 + eps / 2.0) / eps;
}

DiscreteMeasure snapped(const DiscreteMeasure& mu, const GridSpec& g) {
  std::vector<Atom> atoms;
  for (const Atom& a : mu.atoms()) atoms.push_back({g.node_position(g.nearest_node(a.x)), a.w});
  return DiscreteMeasure(mu.dim(), atoms, "snapped", mu.resolution());
}

DiscreteMeasure cantor_square(int depth) {
  const auto c = make_cantor(1.0 / 3.0, depth, 1.0);
  return product_measure(c, c);
}

}  // namespace

TEST_CASE("operator spec validation") {
  CHECK_NOTHROW(annulus_operator(2, 1, 0.1).validate());
  CHECK_THROWS_AS(annulus_operator(2, 2, 0.1).validate(), Error);
  CHECK_THROWS_AS(annulus_operator(2, 1, 0.0).validate(), Error);
  CHECK_THROWS_AS(riesz_operator(2, 2.0, 0.1).validate(), Error);
  CHECK_THROWS_AS(levelset_operator(2, "torus", "one", 0.1).validate(), Error);
  CHECK(annulus_operator(3, 1, 0.2).kernel_reach() == doctest::Approx(std::sqrt(1.1 * 1.1 + 1.0)));
  CHECK(std::isinf(riesz_operator(2, 1.0, 0.1).kernel_reach()));
  for (const auto& spec : {annulus_operator(3, 2, 0.05), riesz_operator(3, 1.5, 0.01),
                           levelset_operator(2, "paraboloid", "away-origin", 0.2)}) {
    const auto back = operator_spec_from_json(to_json(spec));
    CHECK(back.name() == spec.name());
    CHECK(back.dim == spec.dim);
    CHECK(back.epsilon() == spec.epsilon());
  }
}

TEST_CASE("kernel values") {
  const auto a = annulus_operator(2, 1, 0.1);
  CHECK(kernel_value(a, {1.0, 0.0, 0.0}) == doctest::Approx(10.0));
  CHECK(kernel_value(a, {0.0, 1.04, 0.0}) == doctest::Approx(10.0));
  CHECK(kernel_value(a, {0.0, 1.06, 0.0}) == 0.0);
  CHECK(kernel_value(a, {0.5, 0.0, 0.0}) == 0.0);
  const auto a3 = annulus_operator(3, 1, 0.1);
  CHECK(kernel_value(a3, {0.6, 0.8, 0.9}) == doctest::Approx(10.0));
  CHECK(kernel_value(a3, {0.6, 0.8, 1.1}) == 0.0);
  const auto r = riesz_operator(2, 0.5, 0.01);
  CHECK(kernel_value(r, {0.5, 0.0, 0.0}) == doctest::Approx(std::pow(0.5, -1.5)));
  CHECK(kernel_value(r, {0.0, 0.0, 0.0}) == doctest::Approx(std::pow(0.01, -1.5)));
  CHECK_THROWS_AS(kernel_value(levelset_operator(2, "sphere", "one", 0.1), {1, 0, 0}), Error);
}

TEST_CASE("mollifier has unit mass and compact support") {
  for (double scale : {1.0, 0.25, 3.0}) {
    const MollifierSpec m{scale};
    CHECK(simpson([&](double t) { return m(t); }, -scale, scale, 20000) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(m(scale) == 0.0);
    CHECK(m(-1.01 * scale) == 0.0);
  }
}

TEST_CASE("level-set catalog") {
  const Point x{0.6, 0.8, 0.0}, y{0.0, 0.0, 0.0};
  CHECK(levelset_phi("sphere", x, y, 2) == doctest::Approx(0.0).scale(1.0));
  CHECK(levelset_phi("dot-product", x, x, 2) == doctest::Approx(0.0).scale(1.0));
  CHECK(levelset_phi("paraboloid", {0, 0, 0}, {0.5, 0.25, 0}, 2) == doctest::Approx(0.0).scale(1.0));
  CHECK(levelset_psi("one", x, y, 2) == 1.0);
  CHECK(levelset_psi("away-origin", x, y, 2) == 0.0);
  CHECK(levelset_psi("away-origin", x, x, 2) == doctest::Approx(1.0));
  const LevelSetOp op{"sphere", "one", 0.1};
  CHECK(levelset_kernel(op, x, y, 2) == doctest::Approx(MollifierSpec{}(0.0) / 0.1));
  CHECK(levelset_kernel(op, {2, 0, 0}, y, 2) == 0.0);
  CHECK_FALSE(levelset_registered("sphere", "none"));
}

TEST_CASE("annulus multiplier against radial quadrature") {
  for (double eps : {0.2, 0.05}) {
    for (double rho : {0.0, 0.3, 1.7, 5.2, 20.0}) {
      const Point xi2{rho * 0.6, rho * 0.8, 0.0};
      CHECK(annulus_multiplier(2, 1, eps, xi2) == doctest::Approx(annulus_ft_oracle(2, eps, rho)).epsilon(1e-7).scale(1e-6));
      const Point xi3{0.0, rho, 0.0};
      CHECK(annulus_multiplier(3, 2, eps, xi3) == doctest::Approx(annulus_ft_oracle(3, eps, rho)).epsilon(1e-7).scale(1e-6));
    }
  }
  // Extra flat coordinate: the interval [-1, 1] factor.
  const double flat = annulus_multiplier(3, 1, 0.1, {0.4, 0.0, 0.3});
  const double interval = simpson([](double t) { return std::cos(2.0 * kPi * 0.3 * t); }, -1.0, 1.0);
  CHECK(flat == doctest::Approx(annulus_ft_oracle(2, 0.1, 0.4) * interval).epsilon(1e-7));
  // Zero frequency is the kernel mass.
  CHECK(annulus_multiplier(2, 1, 0.1, {0, 0, 0}) == doctest::Approx(2.0 * kPi));
}

TEST_CASE("sampled annulus multiplier approximates the closed form") {
  GridSpec g;
  g.dim = 2;
  g.per_axis = 1024;
  g.side = 4.0;
  const auto spec = annulus_operator(2, 1, 0.125);
  const auto radial = sampled_multiplier_radial(spec, g);
  // Low frequencies only, where the staircase error is small.
  for (std::size_t i = 0; i < radial.size(); i += 97) {
    const auto [r, v] = radial[i];
    if (r > 2.0) continue;
    CHECK(std::abs(v - std::abs(annulus_ft_oracle(2, 0.125, r))) <= 0.05 * 2.0 * kPi);
  }
  g.per_axis = 64;
  CHECK_THROWS_AS(annulus_kernel(2, 1, 0.125, g), Error);
}

TEST_CASE("kernel grids are centred") {
  GridSpec g;
  g.dim = 2;
  g.per_axis = 256;
  g.side = 4.0;
  g.origin = {-2.0, -2.0, 0.0};
  const GridFunction k = annulus_kernel(2, 1, 0.125, g);
  CHECK(k.values[g.nearest_node({1.0, 0.0, 0.0})].real() == doctest::Approx(8.0));
  // The box centre carries the capped value eps^{-(d - alpha)}.
  const GridFunction r = riesz_kernel(2, 1.0, 0.125, g);
  CHECK(r.values[g.nearest_node({0.0, 0.0, 0.0})].real() == doctest::Approx(8.0));
}

TEST_CASE("riesz grid convolution equals the direct sum on snapped atoms") {
  const auto mu0 = cantor_square(4);
  const auto spec = riesz_operator(2, 1.0, 0.05);
  const auto pts0 = atom_points(mu0);
  const GridSpec g = padded_grid(spec, mu0, pts0, 256);
  const auto mu = snapped(mu0, g);
  const auto pts = atom_points(mu);
  std::vector<double> f(mu.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::sin(1.0 + i);
  ApplyOptions direct;
  direct.direct_budget = std::size_t{1} << 40;
  const auto a = apply_operator(spec, mu, f, pts, direct);
  ApplyOptions grid;
  grid.force_grid = true;
  grid.grid = g;
  const auto b = apply_operator(spec, mu, f, pts, grid);
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-9 * scale);
}

TEST_CASE("annulus grid convolution tracks the direct sum on lebesgue data") {
  const auto mu = make_lebesgue_cube(2, 64, 1.0, 1.0);
  const auto spec = annulus_operator(2, 1, 0.125);
  const std::vector<Point> pts{{0.5, 0.5, 0}, {0.1, 0.9, 0}, {0.3, 0.2, 0}};
  const std::vector<double> ones(mu.size(), 1.0);
  ApplyOptions direct;
  direct.direct_budget = std::size_t{1} << 40;
  const auto a = apply_operator(spec, mu, ones, pts, direct);
  ApplyOptions grid;
  grid.force_grid = true;
  grid.per_axis = 1024;
  const auto b = apply_operator(spec, mu, ones, pts, grid);
  const double scale = std::max(std::abs(a[1]), std::abs(a[2]));
  CHECK(scale > 0.1);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(std::abs(b[i] - a[i]) <= 0.05 * scale);
  // Exact oracle for the centre: the annulus around (1/2, 1/2) misses the unit square.
  CHECK(a[0] == 0.0);
}

TEST_CASE("direct operator is symmetric and linear") {
  const auto mu = cantor_square(3);
  const auto pts = atom_points(mu);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> N;
  std::vector<double> f(mu.size()), g(mu.size());
  for (auto& v : f) v = N(rng);
  for (auto& v : g) v = N(rng);
  for (const auto& spec : {riesz_operator(2, 0.5, 0.02), levelset_operator(2, "sphere", "one", 0.2)}) {
    const auto Af = apply_operator(spec, mu, f, pts);
    const auto Ag = apply_operator(spec, mu, g, pts);
    CHECK(pairing(mu, Af, g) == doctest::Approx(pairing(mu, f, Ag)).epsilon(1e-10));
    std::vector<double> h(mu.size());
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = 2.0 * f[i] - 3.0 * g[i];
    const auto Ah = apply_operator(spec, mu, h, pts);
    for (std::size_t i = 0; i < h.size(); ++i)
      CHECK(Ah[i] == doctest::Approx(2.0 * Af[i] - 3.0 * Ag[i]).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("pieces sum back to the operator on one grid") {
  const auto mu = cantor_square(5);
  const auto pts = atom_points(mu);
  const auto spec = annulus_operator(2, 1, 0.0625);
  const GridSpec g = padded_grid(spec, mu, pts, 256);
  std::vector<double> f(mu.size(), 1.0);
  const auto whole = make_convolution(spec, g).apply(mu, f, pts);
  std::vector<double> sum(pts.size(), 0.0);
  for (int k = 0; k <= max_piece_index(g); ++k) {
    const auto part = apply_Ak(spec, mu, f, k, g, pts);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += part[i];
  }
  double scale = 0.0;
  for (double v : whole) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < sum.size(); ++i) CHECK(std::abs(sum[i] - whole[i]) <= 1e-10 * scale);
  CHECK_THROWS_AS(make_convolution(spec, g, max_piece_index(g) + 1), Error);
}

TEST_CASE("piece grids") {
  const auto mu = cantor_square(4);
  const auto pts = atom_points(mu);
  const auto spec = annulus_operator(2, 1, 0.0625);
  const GridSpec pad = padded_grid(spec, mu, pts, 64);
  CHECK(pad.side >= mu.max_extent() + spec.kernel_reach());
  for (int k = 0; k <= 7; ++k) {
    const GridSpec g = piece_grid(spec, mu, pts, k);
    CHECK(k <= max_resolved_index(g));
  }
  CHECK_THROWS_AS(piece_grid(spec, mu, pts, 12), Error);
}

TEST_CASE("multiplier decay check") {
  GridSpec g;
  g.dim = 2;
  g.per_axis = 1024;
  g.side = 8.0;
  const auto spec = annulus_operator(2, 1, 0.0625);
  const auto ok = multiplier_sobolev_check(spec, 0.5, g, 1, 5, 0.1);
  CHECK(ok.verdict == "consistent");
  const auto bad = multiplier_sobolev_check(spec, 1.5, g, 1, 5, 0.1);
  CHECK(bad.verdict == "violated");
  CHECK_THROWS_AS(multiplier_sobolev_check(spec, 0.5, g, 1, 7), Error);
}

TEST_CASE("piece pairings") {
  const auto mu = cantor_square(5);
  const auto spec = annulus_operator(2, 1, 0.0625);
  const auto pts = atom_points(mu);
  const GridSpec g = padded_grid(spec, mu, pts, 256);
  const std::vector<double> ones(mu.size(), 1.0);
  for (int k = 0; k <= 4; ++k)
    for (int j = k; j <= 4; ++j) {
      const auto v = piece_pairing_frequency(spec, mu, ones, ones, k, j, g);
      CHECK(std::abs(v.imag()) <= 1e-12 * (1.0 + std::abs(v)));
      const auto w = piece_pairing_frequency(spec, mu, ones, ones, j, k, g);
      CHECK(std::abs(v - w) <= 1e-12 * (1.0 + std::abs(v)));
      if (std::abs(j - k) >= 2) CHECK(v == std::complex<double>(0.0, 0.0));
    }
}

TEST_CASE("disjointness on a small grid") {
  const auto mu = cantor_square(5);
  const auto spec = annulus_operator(2, 1, 0.0625);
  const auto pts = atom_points(mu);
  const GridSpec g = padded_grid(spec, mu, pts, 512);
  const std::vector<double> ones(mu.size(), 1.0);
  const std::vector<int> range{0, 1, 2, 3, 4};
  REQUIRE(max_resolved_index(g) >= 4);
  const auto res = disjointness_decay(spec, mu, ones, ones, range, range, g);
  CHECK(res.off_band_vanishes);
  CHECK(res.off_band_below_on_band);
  CHECK(res.on_band_max > 0.0);
  CHECK(res.verdict == "consistent");
  for (std::size_t a = 0; a < range.size(); ++a)
    for (std::size_t b = 0; b < range.size(); ++b)
      if (std::abs(range[a] - range[b]) > res.band) CHECK(res.magnitude[a][b] == 0.0);
}

TEST_CASE("restricted weak check") {
  const auto mu = cantor_square(5);
  const auto spec = annulus_operator(2, 1, 0.0625);
  std::vector<std::size_t> E;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (squared_distance(mu.atoms()[i].x, mu.atoms()[0].x, 2) <= 0.125 * 0.125) E.push_back(i);
  const std::vector<int> ks{2, 3, 4, 5};
  const double s = 2.0 * std::log(2.0) / std::log(3.0);
  const auto r = restricted_weak_check(spec, mu, E, ks, s, 0.3);
  CHECK(r.samples.size() == 4);
  CHECK(r.abscissa_kind == "k_index");
  CHECK(r.verdict == "consistent");
  CHECK_THROWS_AS(restricted_weak_check(spec, mu, std::span<const std::size_t>{}, ks, s), Error);
}
