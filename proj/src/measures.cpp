#include "fraver/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fraver {

namespace {

Box compute_box(int dim, std::span<const Atom> atoms) {
  Box b;
  for (int i = 0; i < dim; ++i) {
    b.lo[i] = std::numeric_limits<double>::infinity();
    b.hi[i] = -std::numeric_limits<double>::infinity();
  }
  for (const Atom& a : atoms) {
    for (int i = 0; i < dim; ++i) {
      b.lo[i] = std::min(b.lo[i], a.x[i]);
      b.hi[i] = std::max(b.hi[i], a.x[i]);
    }
  }
  return b;
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(int dim, std::vector<Atom> atoms,
                                 std::string label, double resolution)
    : dim_(dim), atoms_(std::move(atoms)), label_(std::move(label)),
      resolution_(resolution) {
  if (dim_ < 1 || dim_ > kMaxDim)
    throw Error("dimension", "measures live in R^1..R^3, got d=" + std::to_string(dim_));
  if (atoms_.empty()) throw Error("empty measure", "at least one atom is required");
  for (const Atom& a : atoms_) {
    if (!(a.w >= 0.0) || !std::isfinite(a.w))
      throw Error("weight", "atom weights must be finite and nonnegative");
    for (int i = 0; i < kMaxDim; ++i)
      if (!std::isfinite(a.x[i])) throw Error("point", "atom coordinates must be finite");
    mass_ += a.w;
  }
  if (!(mass_ > 0.0)) throw Error("weight", "total mass must be positive");
  box_ = compute_box(dim_, atoms_);
}

double DiscreteMeasure::diameter() const {
  double acc = 0.0;
  for (int i = 0; i < dim_; ++i) acc += (box_.hi[i] - box_.lo[i]) * (box_.hi[i] - box_.lo[i]);
  return std::sqrt(acc);
}

double DiscreteMeasure::max_extent() const {
  double e = 0.0;
  for (int i = 0; i < dim_; ++i) e = std::max(e, box_.hi[i] - box_.lo[i]);
  return e;
}

DiscreteMeasure DiscreteMeasure::translated(const Point& shift) const {
  std::vector<Atom> out(atoms_.begin(), atoms_.end());
  for (Atom& a : out)
    for (int i = 0; i < dim_; ++i) a.x[i] += shift[i];
  return DiscreteMeasure(dim_, std::move(out), label_, resolution_);
}

DiscreteMeasure DiscreteMeasure::scaled(double factor) const {
  if (!(factor > 0.0)) throw Error("scale", "scale factor must be positive");
  std::vector<Atom> out(atoms_.begin(), atoms_.end());
  for (Atom& a : out)
    for (int i = 0; i < dim_; ++i) a.x[i] *= factor;
  return DiscreteMeasure(dim_, std::move(out), label_, resolution_ * factor);
}

DiscreteMeasure DiscreteMeasure::with_label(std::string label) const {
  DiscreteMeasure copy = *this;
  copy.label_ = std::move(label);
  return copy;
}

DiscreteMeasure DiscreteMeasure::restricted(std::span<const std::size_t> indices) const {
  std::vector<Atom> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= atoms_.size()) throw Error("index", "atom index out of range");
    out.push_back(atoms_[i]);
  }
  if (out.empty()) throw Error("empty set", "restriction to an empty index set");
  return DiscreteMeasure(dim_, std::move(out), label_ + "|E", resolution_);
}

DiscreteMeasure make_cantor(double ratio, int depth, double mass) {
  if (!(ratio > 0.0 && ratio < 0.5))
    throw Error("ratio", "Cantor ratio must lie in (0, 1/2)");
  if (depth < 1) throw Error("depth", "Cantor depth must be >= 1");
  if (!(mass > 0.0)) throw Error("mass", "mass must be positive");
  // Left endpoints of the level-`depth` intervals, built level by level.
  std::vector<double> left{0.0};
  double length = 1.0;
  for (int level = 0; level < depth; ++level) {
    std::vector<double> next;
    next.reserve(left.size() * 2);
    const double child = length * ratio;
    for (double a : left) {
      next.push_back(a);
      next.push_back(a + length - child);
    }
    left = std::move(next);
    length *= ratio;
  }
  const double w = mass / static_cast<double>(left.size());
  std::vector<Atom> atoms(left.size());
  for (std::size_t i = 0; i < left.size(); ++i) {
    atoms[i].x[0] = left[i];
    atoms[i].w = w;
  }
  return DiscreteMeasure(1, std::move(atoms),
                         "cantor(r=" + std::to_string(ratio) + ",depth=" + std::to_string(depth) + ")",
                         length);
}

DiscreteMeasure make_lebesgue_cube(int dim, int per_axis, double side, double mass) {
  if (dim < 1 || dim > 3) throw Error("dimension", "Lebesgue cube needs dim in {1,2,3}");
  if (per_axis < 2) throw Error("per_axis", "need at least 2 cells per axis");
  if (!(side > 0.0) || !(mass > 0.0)) throw Error("mass", "side and mass must be positive");
  const double h = side / per_axis;
  std::size_t count = 1;
  for (int i = 0; i < dim; ++i) count *= static_cast<std::size_t>(per_axis);
  const double w = mass / static_cast<double>(count);
  std::vector<Atom> atoms(count);
  for (std::size_t n = 0; n < count; ++n) {
    std::size_t rest = n;
    // Last axis varies fastest.
    for (int i = dim - 1; i >= 0; --i) {
      atoms[n].x[i] = (static_cast<double>(rest % per_axis) + 0.5) * h;
      rest /= per_axis;
    }
    atoms[n].w = w;
  }
  return DiscreteMeasure(dim, std::move(atoms),
                         "lebesgue(d=" + std::to_string(dim) + ",n=" + std::to_string(per_axis) + ")",
                         h);
}

DiscreteMeasure make_dirac(std::span<const double> point) {
  if (point.empty() || point.size() > kMaxDim)
    throw Error("dimension", "Dirac point must have 1..3 coordinates");
  Atom a;
  for (std::size_t i = 0; i < point.size(); ++i) a.x[i] = point[i];
  a.w = 1.0;
  return DiscreteMeasure(static_cast<int>(point.size()), {a}, "dirac", 0.0);
}

DiscreteMeasure product_measure(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  const int dim = a.dim() + b.dim();
  if (dim > kMaxDim) throw Error("dimension", "product dimension exceeds 3");
  std::vector<Atom> atoms;
  atoms.reserve(a.size() * b.size());
  for (const Atom& p : a.atoms()) {
    for (const Atom& q : b.atoms()) {
      Atom c;
      for (int i = 0; i < a.dim(); ++i) c.x[i] = p.x[i];
      for (int i = 0; i < b.dim(); ++i) c.x[a.dim() + i] = q.x[i];
      c.w = p.w * q.w;
      atoms.push_back(c);
    }
  }
  return DiscreteMeasure(dim, std::move(atoms), a.label() + " x " + b.label(),
                         std::max(a.resolution(), b.resolution()));
}

DiscreteMeasure measure_sum(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (a.dim() != b.dim()) throw Error("dimension", "summands must share the ambient dimension");
  std::vector<Atom> atoms(a.atoms().begin(), a.atoms().end());
  atoms.insert(atoms.end(), b.atoms().begin(), b.atoms().end());
  return DiscreteMeasure(a.dim(), std::move(atoms), a.label() + " + " + b.label(),
                         std::max(a.resolution(), b.resolution()));
}

std::vector<Point> atom_points(const DiscreteMeasure& mu) {
  std::vector<Point> pts;
  pts.reserve(mu.size());
  for (const Atom& a : mu.atoms()) pts.push_back(a.x);
  return pts;
}

nlohmann::json to_json(const DiscreteMeasure& mu) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const Atom& a : mu.atoms()) {
    nlohmann::json x = nlohmann::json::array();
    for (int i = 0; i < mu.dim(); ++i) x.push_back(a.x[i]);
    atoms.push_back({x, a.w});
  }
  nlohmann::json lo = nlohmann::json::array(), hi = nlohmann::json::array();
  for (int i = 0; i < mu.dim(); ++i) {
    lo.push_back(mu.bounding_box().lo[i]);
    hi.push_back(mu.bounding_box().hi[i]);
  }
  return {{"dim", mu.dim()},
          {"label", mu.label()},
          {"resolution", mu.resolution()},
          {"total_mass", mu.total_mass()},
          {"bounding_box", {{"lo", lo}, {"hi", hi}}},
          {"atoms", atoms}};
}

DiscreteMeasure measure_from_json(const nlohmann::json& j) {
  const int dim = j.at("dim").get<int>();
  std::vector<Atom> atoms;
  for (const auto& entry : j.at("atoms")) {
    Atom a;
    const auto& x = entry.at(0);
    if (static_cast<int>(x.size()) != dim) throw Error("schema", "atom coordinate count != dim");
    for (int i = 0; i < dim; ++i) a.x[i] = x.at(i).get<double>();
    a.w = entry.at(1).get<double>();
    atoms.push_back(a);
  }
  return DiscreteMeasure(dim, std::move(atoms), j.value("label", std::string{}),
                         j.value("resolution", 0.0));
}

}  // namespace fraver
