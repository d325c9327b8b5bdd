#include "doctest.h"

#include <cmath>
#include <random>

#include "fraver/common.hpp"
#include "fraver/diagram.hpp"

using namespace fraver;

namespace {

double abscissa(const RieszRegion& r, const std::string& kind) {
  for (const auto& e : r.endpoints)
    if (e.kind == kind) return e.abscissa;
  FAIL("missing endpoint " << kind);
  return 0.0;
}

bool has_endpoint(const RieszRegion& r, const std::string& kind) {
  for (const auto& e : r.endpoints)
    if (e.kind == kind) return true;
  return false;
}

}  // namespace

TEST_CASE("classical triangle vertex") {
  for (int d : {2, 3}) {
    const auto r = endpoints_main(d, d, (d - 1) / 2.0, false);
    REQUIRE(r.valid);
    CHECK(std::abs(abscissa(r, "Lp-Lp'") - double(d) / (d + 1)) <= 1e-12);
  }
  const auto r3 = endpoints_main(3, 3.0, 1.0, false);
  CHECK(std::abs(abscissa(r3, "Lp-Lp'") - 0.75) <= 1e-12);
}

TEST_CASE("riesz endpoints by hand") {
  const auto r = endpoints_second(2, 1.5, 1.0);
  REQUIRE(r.valid);
  CHECK(abscissa(r, "Lp-Lp'") == doctest::Approx(2.0 / 3.0));
  CHECK(abscissa(r, "Lp-L2") == doctest::Approx(5.0 / 6.0));
  CHECK_FALSE(has_endpoint(r, "Lp-Lp"));
  const auto full = endpoints_second(2, 2.0, 1.0);
  CHECK(abscissa(full, "Lp-L2") == doctest::Approx(1.0));
  // s = d - alpha sits on the degeneracy guard.
  CHECK_FALSE(endpoints_second(2, 1.0, 1.0).valid);
}

TEST_CASE("annulus endpoint formulas") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const int d = 2 + t % 2;
    const double alpha = 0.1 + 0.8 * U(rng) * (d - 1);
    const double s = d - alpha + 1e-3 + U(rng) * (alpha - 1e-3);
    const auto r = endpoints_main(d, s, alpha, true);
    REQUIRE(r.valid);
    const double dual = (2 * s + 2 * alpha - 2 * d + 1) / (2 * s + 2 * alpha - 2 * d + 2);
    const double to2 = (3 * s + 2 * alpha - 2 * d) / (2 * s);
    const double same = (s + 2 * alpha - d) / (2 * alpha);
    CHECK(abscissa(r, "Lp-Lp'") == doctest::Approx(std::min(dual, 1.0)).epsilon(1e-12));
    CHECK(abscissa(r, "Lp-L2") == doctest::Approx(std::min(to2, 1.0)).epsilon(1e-12));
    CHECK(abscissa(r, "Lp-Lp") == doctest::Approx(std::min(same, 1.0)).epsilon(1e-12));
    CHECK_FALSE(has_endpoint(endpoints_main(d, s, alpha, false), "Lp-Lp"));
  }
  CHECK_FALSE(endpoints_main(2, 1.4, 0.5, true).valid);
  CHECK_THROWS_AS(endpoints_main(2, 1.8, 0.0, true), Error);
}

TEST_CASE("sharpness lines by hand") {
  const auto m = sharpness_line_main(2, 2.0, 1);
  CHECK(m.sloped.bound(1.0 / 3.0) == doctest::Approx(2.0 / 3.0));
  CHECK(m.vertical == doctest::Approx(1.0));
  CHECK(sharpness_line_main(3, 2.5, 2).vertical == doctest::Approx(0.75));
  CHECK_THROWS_AS(sharpness_line_main(2, 1.0, 1), Error);

  CHECK(sharpness_line_second(2, 1.5, 1.0).bound(2.0 / 3.0) == doctest::Approx(1.0));
  CHECK(sharpness_line_second(2, 1.1, 1.0).bound(0.0) == doctest::Approx(0.1 / 1.1));
  CHECK_THROWS_AS(sharpness_line_second(2, 1.0, 1.0), Error);
}

TEST_CASE("second sharpness line meets the L2 endpoint") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const int d = 2 + t % 2;
    const double alpha = 0.05 + U(rng) * (d - 0.1);
    const double s = std::max(d - alpha, 0.0) + 1e-3 + U(rng) * (d - std::max(d - alpha, 0.0) - 1e-3);
    CHECK(std::abs(sharpness_line_second(d, s, alpha).bound(0.5) - (3 * s + 2 * alpha - 2 * d) / (2 * s)) <= 1e-12);
  }
}

TEST_CASE("membership examples") {
  const auto r = endpoints_main(2, 2.0, 0.5, false);
  CHECK(in_region(r, {0.5, 0.5}));
  // The stated endpoint is excluded.
  CHECK_FALSE(in_region(r, {2.0 / 3.0, 1.0 / 3.0}));
  CHECK_FALSE(in_region(r, {1.0, 0.0}));
  CHECK(in_region(r, {0.6, 0.41}));
  CHECK(in_region(r, {0.2, 0.9}));
  const auto bad = endpoints_main(2, 1.4, 0.5, false);
  CHECK_THROWS_AS(in_region(bad, {0.5, 0.5}), Error);
  for (double s : {1.6, 1.8, 1.95}) CHECK_FALSE(in_region(endpoints_main(2, s, 0.5, true), {1.0, 0.0}));
}

TEST_CASE("region invariants on a lattice") {
  struct Triple {
    int d;
    double s, alpha;
  };
  const Triple triples[] = {{2, 2.0, 0.5}, {2, 1.7, 0.5}, {2, 1.6, 1.0}, {3, 2.5, 1.0}, {3, 2.9, 1.0}, {3, 2.2, 1.5}};
  for (const auto& [d, s, alpha] : triples) {
    for (const auto& region : {endpoints_main(d, s, alpha, true), endpoints_second(d, s, alpha)}) {
      REQUIRE(region.valid);
      CHECK(in_region(region, {0.5, 0.5}));
      // Convexity: consecutive turns are all left turns.
      const auto& v = region.vertices;
      for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % v.size()];
        const auto& c = v[(i + 2) % v.size()];
        CHECK((b.inv_p - a.inv_p) * (c.inv_q - a.inv_q) - (b.inv_q - a.inv_q) * (c.inv_p - a.inv_p) > 0.0);
      }
      for (int i = 0; i <= 100; ++i)
        for (int j = 0; j <= 100; ++j) {
          const RieszPoint p{i / 100.0, j / 100.0};
          const bool in = in_region(region, p);
          CHECK(in == in_region(region, {1.0 - p.inv_q, 1.0 - p.inv_p}));
          if (in && j < 100) CHECK(in_region(region, {p.inv_p, (j + 1) / 100.0}));
        }
    }
  }
}

TEST_CASE("main region sits inside the sharpness lines") {
  // k = 2 alpha integer, s > d - 1.
  struct Triple {
    int d;
    double s, alpha;
  };
  const Triple triples[] = {{2, 2.0, 0.5}, {2, 1.7, 0.5}, {2, 1.55, 0.5}, {3, 2.5, 1.0}, {3, 2.9, 0.5}};
  for (const auto& [d, s, alpha] : triples) {
    const auto region = endpoints_main(d, s, alpha, false);
    const auto line = sharpness_line_main(d, s, static_cast<int>(2 * alpha));
    for (int i = 0; i <= 100; ++i)
      for (int j = 0; j <= 100; ++j) {
        const RieszPoint p{i / 100.0, j / 100.0};
        if (!in_region(region, p)) continue;
        CHECK(p.inv_p <= line.sloped.bound(p.inv_q) + 1e-12);
        CHECK(p.inv_p <= line.vertical + 1e-12);
      }
  }
}

TEST_CASE("second region sits inside its sharpness line") {
  const double triples[][3] = {{2, 1.5, 1.0}, {2, 1.26, 1.0}, {3, 2.5, 1.0}, {3, 2.2, 1.5}};
  for (const auto& t : triples) {
    const int d = static_cast<int>(t[0]);
    const auto region = endpoints_second(d, t[1], t[2]);
    const auto line = sharpness_line_second(d, t[1], t[2]);
    for (int i = 0; i <= 100; ++i)
      for (int j = 0; j <= 100; ++j) {
        const RieszPoint p{i / 100.0, j / 100.0};
        if (in_region(region, p)) CHECK(p.inv_p <= line.bound(p.inv_q) + 1e-12);
      }
  }
}

TEST_CASE("region json") {
  const auto r = endpoints_main(2, 2.0, 0.5, true);
  const auto j = to_json(r);
  CHECK(j["valid"] == true);
  CHECK(j["vertices"].size() == r.vertices.size());
  CHECK(j["boundary_included"].size() == r.vertices.size());
  CHECK(j["endpoints"].size() == 3);
}
