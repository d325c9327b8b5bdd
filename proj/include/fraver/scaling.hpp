#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace fraver {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;
};

/// Ordinary least squares y ~ slope * x + intercept. r2 is 1 for exactly
/// constant ordinates.
LinearFit least_squares(std::span<const std::pair<double, double>> samples);

enum class ClaimKind {
  two_sided,    // |slope - predicted| <= tolerance
  upper_bound,  // slope <= predicted + tolerance  (the "<~ 2^{k e}" claims)
  lower_bound,  // slope >= predicted - tolerance
};

/// Verdict object of every scaling experiment: a log-log (or log-k) fit
/// with an optional predicted exponent.
struct ScalingReport {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;
  std::vector<std::pair<double, double>> samples;
  std::string abscissa_kind;  // "log2_eps" | "k_index" | "log2_R"
  std::optional<double> predicted_slope;
  ClaimKind claim = ClaimKind::two_sided;
  double tolerance = 0.3;
  std::string verdict = "inconclusive";
  bool degenerate = false;
};

/// Fits the samples and assigns the verdict. Needs >= 4 samples whose
/// abscissae span at least 3 units. Non-finite ordinates (log of a zero
/// quantity) produce a degenerate, inconclusive report instead of a fit.
ScalingReport scaling_fit(std::vector<std::pair<double, double>> samples,
                          std::optional<double> predicted_slope, double tolerance,
                          ClaimKind claim, std::string abscissa_kind);

std::string verdict_for(double slope, std::optional<double> predicted, double tolerance,
                        ClaimKind claim);

nlohmann::json to_json(const ScalingReport& r);
ScalingReport scaling_report_from_json(const nlohmann::json& j);

/// JSON number, or null when not finite.
nlohmann::json finite_or_null(double v);

}  // namespace fraver
