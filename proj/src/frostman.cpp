#include "fraver/frostman.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fraver/scaling.hpp"

namespace fraver {

namespace {
constexpr std::size_t kLeafSize = 16;
}

BallMassIndex::BallMassIndex(const DiscreteMeasure& mu)
    : dim_(mu.dim()), atoms_(mu.atoms().begin(), mu.atoms().end()) {
  nodes_.reserve(2 * atoms_.size() / kLeafSize + 2);
  build(0, atoms_.size());
}

int BallMassIndex::build(std::size_t begin, std::size_t end) {
  Node node;
  node.begin = begin;
  node.end = end;
  for (int i = 0; i < dim_; ++i) {
    node.box.lo[i] = atoms_[begin].x[i];
    node.box.hi[i] = atoms_[begin].x[i];
  }
  for (std::size_t n = begin; n < end; ++n) {
    node.mass += atoms_[n].w;
    for (int i = 0; i < dim_; ++i) {
      node.box.lo[i] = std::min(node.box.lo[i], atoms_[n].x[i]);
      node.box.hi[i] = std::max(node.box.hi[i], atoms_[n].x[i]);
    }
  }
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  if (end - begin <= kLeafSize) return id;

  int axis = 0;
  for (int i = 1; i < dim_; ++i)
    if (node.box.hi[i] - node.box.lo[i] > node.box.hi[axis] - node.box.lo[axis]) axis = i;
  if (node.box.hi[axis] == node.box.lo[axis]) return id;  // coincident atoms
  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(atoms_.begin() + begin, atoms_.begin() + mid, atoms_.begin() + end,
                   [axis](const Atom& a, const Atom& b) { return a.x[axis] < b.x[axis]; });
  const int l = build(begin, mid);
  const int r = build(mid, end);
  nodes_[id].left = l;
  nodes_[id].right = r;
  return id;
}

double BallMassIndex::query(int id, const Point& c, double r2) const {
  const Node& node = nodes_[id];
  double dmin = 0.0, dmax = 0.0;
  for (int i = 0; i < dim_; ++i) {
    const double lo = node.box.lo[i] - c[i];
    const double hi = c[i] - node.box.hi[i];
    const double gap = std::max({lo, hi, 0.0});
    dmin += gap * gap;
    const double far = std::max(std::abs(node.box.lo[i] - c[i]), std::abs(node.box.hi[i] - c[i]));
    dmax += far * far;
  }
  if (dmin > r2) return 0.0;
  if (dmax <= r2) return node.mass;
  if (node.left < 0) {
    double m = 0.0;
    for (std::size_t n = node.begin; n < node.end; ++n)
      if (squared_distance(atoms_[n].x, c, dim_) <= r2) m += atoms_[n].w;
    return m;
  }
  return query(node.left, c, r2) + query(node.right, c, r2);
}

double BallMassIndex::mass_in_ball(const Point& center, double radius) const {
  return query(0, center, radius * radius);
}

std::vector<double> default_radii(const DiscreteMeasure& mu, int count) {
  double hi = 0.5 * mu.max_extent();
  if (!(hi > 0.0)) hi = 1.0;
  double lo = 10.0 * mu.resolution();
  if (!(lo > 0.0)) lo = 1e-3 * hi;
  if (lo >= hi / 2.0) lo = hi / 4.0;
  std::vector<double> radii(count);
  for (int i = 0; i < count; ++i)
    radii[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
  return radii;
}

FrostmanReport frostman_fit(const DiscreteMeasure& mu, std::span<const double> radii) {
  if (radii.empty()) throw Error("empty radii", "frostman_fit needs a radius list");
  if (radii.size() < 4) throw Error("too few samples", "frostman_fit needs at least 4 radii");
  for (double r : radii)
    if (!(r > 0.0)) throw Error("radius", "radii must be positive");

  const BallMassIndex index(mu);
  FrostmanReport rep;
  rep.r_min = *std::min_element(radii.begin(), radii.end());
  rep.r_max = *std::max_element(radii.begin(), radii.end());

  std::vector<double> sup(radii.size(), 0.0), inf(radii.size(), 0.0);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    double hi = 0.0, lo = std::numeric_limits<double>::infinity();
    for (const Atom& a : mu.atoms()) {
      if (a.w <= 0.0) continue;
      const double m = index.mass_in_ball(a.x, radii[i]);
      hi = std::max(hi, m);
      lo = std::min(lo, m);
    }
    sup[i] = hi;
    inf[i] = lo;
    rep.samples.emplace_back(std::log(radii[i]), std::log(hi));
  }
  const LinearFit fit = least_squares(rep.samples);
  rep.s_exponent = fit.slope;
  rep.fit_r2 = fit.r2;
  rep.reliable = fit.r2 >= 0.9;
  double cu = 0.0, cl = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double scale = std::pow(radii[i], rep.s_exponent);
    cu = std::max(cu, sup[i] / scale);
    cl = std::min(cl, inf[i] / scale);
  }
  rep.c_upper = cu;
  if (cl > 0.0 && std::isfinite(cl)) rep.c_lower = cl;
  return rep;
}

nlohmann::json to_json(const FrostmanReport& r) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& [x, y] : r.samples) samples.push_back({x, y});
  return {{"s_exponent", r.s_exponent},
          {"c_upper", r.c_upper},
          {"c_lower", r.c_lower ? nlohmann::json(*r.c_lower) : nlohmann::json()},
          {"radius_range", {r.r_min, r.r_max}},
          {"samples", samples},
          {"fit_r2", r.fit_r2},
          {"reliability", r.reliable ? "reliable" : "unreliable"}};
}

}  // namespace fraver
