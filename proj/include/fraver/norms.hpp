#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "fraver/measures.hpp"
#include "json.hpp"

namespace fraver {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// (sum |f|^p w)^{1/p}; p = infinity gives max |f| over atoms with w > 0.
double lp_norm(const DiscreteMeasure& mu, std::span<const double> f, double p);

/// f -> A f with f given at the input atoms, A f at the output atoms.
using LinearMap = std::function<std::vector<double>(std::span<const double>)>;

struct TestFunction {
  std::string witness;
  std::vector<double> values;
};

struct FamilyOptions {
  int centers = 4;          // seeded atom centres for ball indicators
  int slabs = 3;            // slab indicators along the first axis
  int random_signs = 4;
  double min_radius = 0.0;  // 0: four times the atomic resolution
};

/// Ball indicators at seeded atom centres with dyadic radii 2^{-j} down to
/// the minimum radius, slab indicators, random sign vectors and the constant 1.
std::vector<TestFunction> default_test_family(const DiscreteMeasure& mu, std::uint64_t seed,
                                              const FamilyOptions& options = {});

struct NormEstimate {
  double p = 2.0;
  double q = 2.0;
  double value = 0.0;
  std::string method = "test-family";  // or "power-iteration"
  std::string witness;
};

struct PowerIterationResult {
  double value = 0.0;
  std::vector<double> history;  // ||A v_n||_{L^2} for unit v_n
  std::vector<double> vector;
  int iterations = 0;
  bool converged = false;
};

/// Power iteration in L^2(mu). Iterates A itself when `adjoint` is empty
/// (A self-adjoint on L^2(mu)), otherwise the normal operator A* A.
PowerIterationResult power_iteration(const LinearMap& apply, const DiscreteMeasure& mu,
                                     std::vector<double> start, int max_iterations = 40,
                                     double rel_tol = 1e-8, const LinearMap& adjoint = {});

struct NormOptions {
  bool power_iteration = true;
  int max_iterations = 40;
  double rel_tol = 1e-8;
  LinearMap adjoint;  // empty: treat A as self-adjoint
};

/// Empirical lower bounds on ||A||_{L^p(mu_in) -> L^q(mu_out)} for every
/// requested (p, q), from one pass over the family. For (2, 2) with
/// mu_in == mu_out, power iteration starts from the best family member and
/// the larger of the two values is kept.
std::vector<NormEstimate> estimate_norms(const LinearMap& apply, const DiscreteMeasure& mu_in,
                                         const DiscreteMeasure& mu_out,
                                         std::span<const std::pair<double, double>> pq,
                                         std::span<const TestFunction> family,
                                         const NormOptions& options = {});

NormEstimate op_norm_estimate(const LinearMap& apply, const DiscreteMeasure& mu_in,
                              const DiscreteMeasure& mu_out, double p, double q,
                              std::span<const TestFunction> family,
                              const NormOptions& options = {});

nlohmann::json to_json(const NormEstimate& e);

}  // namespace fraver
