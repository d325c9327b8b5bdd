#include "fraver/scaling.hpp"

#include <algorithm>
#include <cmath>

#include "fraver/common.hpp"

namespace fraver {

LinearFit least_squares(std::span<const std::pair<double, double>> samples) {
  const double n = static_cast<double>(samples.size());
  if (samples.size() < 2) throw Error("too few samples", "least squares needs >= 2 samples");
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : samples) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : samples) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0) throw Error("too few samples", "abscissae are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy <= 1e-300) {
    fit.r2 = 1.0;
  } else {
    double sse = 0.0;
    for (const auto& [x, y] : samples) {
      const double e = y - (fit.slope * x + fit.intercept);
      sse += e * e;
    }
    fit.r2 = std::clamp(1.0 - sse / syy, 0.0, 1.0);
  }
  return fit;
}

std::string verdict_for(double slope, std::optional<double> predicted, double tolerance,
                        ClaimKind claim) {
  if (!predicted || !std::isfinite(slope)) return "inconclusive";
  bool ok = false;
  switch (claim) {
    case ClaimKind::two_sided: ok = std::abs(slope - *predicted) <= tolerance; break;
    case ClaimKind::upper_bound: ok = slope <= *predicted + tolerance; break;
    case ClaimKind::lower_bound: ok = slope >= *predicted - tolerance; break;
  }
  return ok ? "consistent" : "violated";
}

ScalingReport scaling_fit(std::vector<std::pair<double, double>> samples,
                          std::optional<double> predicted_slope, double tolerance,
                          ClaimKind claim, std::string abscissa_kind) {
  if (samples.size() < 4) throw Error("too few samples", "scaling fit needs >= 4 samples");
  double lo = samples.front().first, hi = lo;
  for (const auto& s : samples) {
    lo = std::min(lo, s.first);
    hi = std::max(hi, s.first);
  }
  if (hi - lo < 3.0 - 1e-12)
    throw Error("too few samples", "samples must span at least 3 dyadic steps");

  ScalingReport r;
  r.predicted_slope = predicted_slope;
  r.claim = claim;
  r.tolerance = tolerance;
  r.abscissa_kind = std::move(abscissa_kind);
  const bool finite = std::all_of(samples.begin(), samples.end(),
                                  [](const auto& s) { return std::isfinite(s.second); });
  r.samples = std::move(samples);
  if (!finite) {
    r.degenerate = true;
    r.slope = -std::numeric_limits<double>::infinity();
    r.intercept = std::numeric_limits<double>::quiet_NaN();
    r.r2 = 0.0;
    r.verdict = "inconclusive";
    return r;
  }
  const LinearFit fit = least_squares(r.samples);
  r.slope = fit.slope;
  r.intercept = fit.intercept;
  r.r2 = fit.r2;
  r.verdict = verdict_for(r.slope, predicted_slope, tolerance, claim);
  return r;
}

nlohmann::json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

namespace {

const char* claim_name(ClaimKind c) {
  switch (c) {
    case ClaimKind::two_sided: return "two_sided";
    case ClaimKind::upper_bound: return "upper_bound";
    case ClaimKind::lower_bound: return "lower_bound";
  }
  return "two_sided";
}

}  // namespace

nlohmann::json to_json(const ScalingReport& r) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& [x, y] : r.samples) samples.push_back({x, finite_or_null(y)});
  return {{"slope", finite_or_null(r.slope)},
          {"intercept", finite_or_null(r.intercept)},
          {"r2", r.r2},
          {"samples", samples},
          {"abscissa_kind", r.abscissa_kind},
          {"predicted_slope", r.predicted_slope ? nlohmann::json(*r.predicted_slope) : nlohmann::json()},
          {"claim", claim_name(r.claim)},
          {"tolerance", r.tolerance},
          {"verdict", r.verdict},
          {"degenerate", r.degenerate}};
}

ScalingReport scaling_report_from_json(const nlohmann::json& j) {
  ScalingReport r;
  const auto num = [](const nlohmann::json& v) {
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
  };
  r.slope = num(j.at("slope"));
  r.intercept = num(j.at("intercept"));
  r.r2 = j.at("r2").get<double>();
  for (const auto& s : j.at("samples")) r.samples.emplace_back(s.at(0).get<double>(), num(s.at(1)));
  r.abscissa_kind = j.at("abscissa_kind").get<std::string>();
  if (!j.at("predicted_slope").is_null()) r.predicted_slope = j.at("predicted_slope").get<double>();
  const std::string claim = j.value("claim", std::string("two_sided"));
  r.claim = claim == "upper_bound"   ? ClaimKind::upper_bound
            : claim == "lower_bound" ? ClaimKind::lower_bound
                                     : ClaimKind::two_sided;
  r.tolerance = j.at("tolerance").get<double>();
  r.verdict = j.at("verdict").get<std::string>();
  r.degenerate = j.value("degenerate", false);
  return r;
}

}  // namespace fraver
