#include "fraver/cover.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace fraver {

namespace {

using CellKey = std::array<long long, kMaxDim>;

CellKey cell_of(const Point& x, double cell, int dim) {
  CellKey k{};
  for (int i = 0; i < dim; ++i) k[i] = static_cast<long long>(std::floor(x[i] / cell));
  return k;
}

// Calls fn(index) for every stored entry in the 3^dim block around `key`.
template <class Fn>
void for_neighbors(const std::map<CellKey, std::vector<std::size_t>>& grid, const CellKey& key,
                   int dim, Fn&& fn) {
  const int span = dim >= 1 ? 3 : 1;
  const int total = dim == 1 ? 3 : dim == 2 ? 9 : 27;
  for (int n = 0; n < total; ++n) {
    CellKey k = key;
    int rest = n;
    for (int i = 0; i < dim; ++i) {
      k[i] += rest % span - 1;
      rest /= span;
    }
    const auto it = grid.find(k);
    if (it == grid.end()) continue;
    for (std::size_t idx : it->second) fn(idx);
  }
}

}  // namespace

CoverResult vitali_cover(const DiscreteMeasure& mu, std::span<const std::size_t> subset,
                         double delta_max, double s) {
  if (subset.empty()) throw Error("empty set", "Vitali cover of an empty atom set");
  if (!(delta_max > 0.0)) throw Error("radius", "delta_max must be positive");
  double mass = 0.0;
  for (std::size_t i : subset) {
    if (i >= mu.size()) throw Error("index", "atom index out of range");
    mass += mu.atoms()[i].w;
  }
  if (!(mass > 0.0)) throw Error("empty set", "E has zero mu-mass");

  // All candidates share the radius, so the order reduces to atom index.
  std::vector<std::size_t> order(subset.begin(), subset.end());
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());

  const int dim = mu.dim();
  const double cell = 2.0 * delta_max;
  std::map<CellKey, std::vector<std::size_t>> kept;
  CoverResult out;
  for (std::size_t idx : order) {
    const Point& x = mu.atoms()[idx].x;
    const CellKey key = cell_of(x, cell, dim);
    bool clear = true;
    for_neighbors(kept, key, dim, [&](std::size_t j) {
      if (std::sqrt(squared_distance(out.balls[j].center, x, dim)) <= 2.0 * delta_max) clear = false;
    });
    if (!clear) continue;
    kept[key].push_back(out.balls.size());
    out.balls.push_back({x, delta_max});
    out.center_atoms.push_back(idx);
  }
  out.mass_sum = static_cast<double>(out.balls.size()) * std::pow(delta_max, s);
  return out;
}

bool balls_pairwise_disjoint(std::span<const Ball> balls, int dim) {
  for (std::size_t i = 0; i < balls.size(); ++i)
    for (std::size_t j = i + 1; j < balls.size(); ++j)
      if (!(std::sqrt(squared_distance(balls[i].center, balls[j].center, dim)) >
            balls[i].radius + balls[j].radius))
        return false;
  return true;
}

bool enlarged_balls_cover(const DiscreteMeasure& mu, std::span<const std::size_t> subset,
                          std::span<const Ball> balls, double factor) {
  const int dim = mu.dim();
  for (std::size_t idx : subset) {
    const Point& x = mu.atoms()[idx].x;
    const bool covered = std::any_of(balls.begin(), balls.end(), [&](const Ball& b) {
      return std::sqrt(squared_distance(b.center, x, dim)) <= factor * b.radius;
    });
    if (!covered) return false;
  }
  return true;
}

}  // namespace fraver
