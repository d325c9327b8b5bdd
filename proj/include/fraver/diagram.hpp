#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace fraver {

struct RieszPoint {
  double inv_p = 0.5;
  double inv_q = 0.5;
};

struct RieszEndpoint {
  std::string kind;  // "Lp-Lp'", "Lp-L2", "Lp-Lp"
  double abscissa = 0.5;
  RieszPoint point;
  bool clamped = false;
};

/// Convex polygon in the (1/p, 1/q) square. Edge i joins vertices i and
/// i + 1 (cyclically); vertices listed counter-clockwise.
struct RieszRegion {
  std::vector<RieszPoint> vertices;
  std::vector<bool> boundary_included;
  std::vector<RieszPoint> excluded;  // open vertices, stated endpoints and their mirrors
  std::vector<RieszEndpoint> endpoints;
  std::string description;
  bool valid = false;
  bool clamped = false;
};

/// Region generated by the annulus-operator endpoints (the L^p -> L^p one only with
/// the lower bound), (1/2, 1/2), the mirror (x, y) -> (1 - y, 1 - x),
/// vertical closure and its mirror image (closure towards 1/p = 0).
/// Invalid when s <= d - alpha.
RieszRegion endpoints_main(int d, double s, double alpha, bool with_lower_bound);
RieszRegion endpoints_second(int d, double s, double alpha);

/// 1/p <= intercept + slope * (1/q).
struct SlopedLine {
  double intercept = 0.0;
  double slope = 0.0;
  double bound(double inv_q) const { return intercept + slope * inv_q; }
};

struct SharpnessMain {
  SlopedLine sloped;
  double vertical = 1.0;  // 1/p <= vertical
};

SharpnessMain sharpness_line_main(int d, double s, int k_sphere);
SlopedLine sharpness_line_second(int d, double s, double alpha);

bool in_region(const RieszRegion& region, const RieszPoint& point, double tol = 1e-12);

nlohmann::json to_json(const RieszRegion& r);
nlohmann::json to_json(const SlopedLine& l);
nlohmann::json to_json(const SharpnessMain& l);

}  // namespace fraver
