#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fraver/common.hpp"
#include "json.hpp"

namespace fraver {

struct Atom {
  Point x{};
  double w = 0.0;
};

struct Box {
  Point lo{};
  Point hi{};
};

/// Finite atomic approximation of a compactly supported Borel measure.
///
/// `resolution` is the length scale below which the atomic truncation
/// stops resembling the limiting measure (Cantor interval length, grid
/// spacing, ...). Scaling claims are only made at radii well above it.
class DiscreteMeasure {
 public:
  DiscreteMeasure(int dim, std::vector<Atom> atoms, std::string label,
                  double resolution);

  int dim() const noexcept { return dim_; }
  std::span<const Atom> atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  const Box& bounding_box() const noexcept { return box_; }
  const std::string& label() const noexcept { return label_; }
  double resolution() const noexcept { return resolution_; }
  double total_mass() const noexcept { return mass_; }

  /// Diagonal of the bounding box.
  double diameter() const;
  /// Largest side of the bounding box.
  double max_extent() const;

  DiscreteMeasure translated(const Point& shift) const;
  DiscreteMeasure scaled(double factor) const;
  DiscreteMeasure with_label(std::string label) const;
  /// Sub-measure on the given atom indices (weights unchanged).
  DiscreteMeasure restricted(std::span<const std::size_t> indices) const;

 private:
  int dim_;
  std::vector<Atom> atoms_;
  Box box_;
  std::string label_;
  double resolution_;
  double mass_ = 0.0;
};

DiscreteMeasure make_cantor(double ratio, int depth, double mass);
DiscreteMeasure make_lebesgue_cube(int dim, int per_axis, double side, double mass);
DiscreteMeasure make_dirac(std::span<const double> point);
DiscreteMeasure product_measure(const DiscreteMeasure& a, const DiscreteMeasure& b);
/// Sum of two measures living in the same ambient space.
DiscreteMeasure measure_sum(const DiscreteMeasure& a, const DiscreteMeasure& b);

/// Mass of atoms satisfying a predicate on their position.
template <class Pred>
double mass_where(const DiscreteMeasure& mu, Pred&& pred) {
  double m = 0.0;
  for (const Atom& a : mu.atoms())
    if (pred(a.x)) m += a.w;
  return m;
}

std::vector<Point> atom_points(const DiscreteMeasure& mu);

nlohmann::json to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const nlohmann::json& j);

}  // namespace fraver
