#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fraver/measures.hpp"

namespace fraver {

/// kd-tree over the atoms with per-node mass, answering closed-ball mass
/// queries mu[B(c, r)] without visiting fully covered or disjoint nodes.
class BallMassIndex {
 public:
  explicit BallMassIndex(const DiscreteMeasure& mu);

  double mass_in_ball(const Point& center, double radius) const;

 private:
  struct Node {
    Box box;
    double mass = 0.0;
    std::size_t begin = 0, end = 0;  // range into order_
    int left = -1, right = -1;
  };

  int build(std::size_t begin, std::size_t end);
  double query(int node, const Point& c, double r2) const;

  int dim_;
  std::vector<Atom> atoms_;  // permuted copy, leaves are contiguous
  std::vector<Node> nodes_;
};

struct FrostmanReport {
  double s_exponent = 0.0;
  double c_upper = 0.0;
  std::optional<double> c_lower;
  double r_min = 0.0;
  double r_max = 0.0;
  /// (log r, log sup_x mu[B(x, r)]) with natural logarithms.
  std::vector<std::pair<double, double>> samples;
  double fit_r2 = 0.0;
  bool reliable = true;  // false when fit_r2 < 0.9
};

/// Geometric radii from 10x the atomic resolution up to half the largest
/// bounding-box side.
std::vector<double> default_radii(const DiscreteMeasure& mu, int count = 12);

/// Fits mu[B(x,r)] <= C r^s with the sup (and inf, for the lower constant)
/// taken over ball centers at atom locations.
FrostmanReport frostman_fit(const DiscreteMeasure& mu, std::span<const double> radii);

nlohmann::json to_json(const FrostmanReport& r);

}  // namespace fraver
