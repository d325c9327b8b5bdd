#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fraver/measures.hpp"

namespace fraver {

struct Ball {
  Point center{};
  double radius = 0.0;
};

struct CoverResult {
  std::vector<Ball> balls;
  std::vector<std::size_t> center_atoms;  // atom index of each selected center
  double mass_sum = 0.0;                  // sum of radius^s over selected balls
};

/// Greedy Vitali selection over candidate balls B(x, delta_max), x in E:
/// candidates are visited by radius descending then atom index ascending,
/// and a ball is kept when it is disjoint from every ball kept so far.
/// The 5x enlargements of the kept balls cover E.
CoverResult vitali_cover(const DiscreteMeasure& mu, std::span<const std::size_t> subset,
                         double delta_max, double s);

bool balls_pairwise_disjoint(std::span<const Ball> balls, int dim);
/// True when every atom of E lies in some ball enlarged by `factor`.
bool enlarged_balls_cover(const DiscreteMeasure& mu, std::span<const std::size_t> subset,
                          std::span<const Ball> balls, double factor);

}  // namespace fraver
