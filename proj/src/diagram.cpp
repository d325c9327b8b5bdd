#include "fraver/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fraver/common.hpp"

namespace fraver {

namespace {

constexpr double kSame = 1e-12;

struct Source {
  RieszPoint p;
  bool excluded;
};

bool same(const RieszPoint& a, const RieszPoint& b, double tol = kSame) {
  return std::abs(a.inv_p - b.inv_p) <= tol && std::abs(a.inv_q - b.inv_q) <= tol;
}

double cross(const RieszPoint& o, const RieszPoint& a, const RieszPoint& b) {
  return (a.inv_p - o.inv_p) * (b.inv_q - o.inv_q) - (a.inv_q - o.inv_q) * (b.inv_p - o.inv_p);
}

RieszPoint mirror(const RieszPoint& p) { return {1.0 - p.inv_q, 1.0 - p.inv_p}; }

RieszEndpoint make_endpoint(const std::string& kind, double value) {
  RieszEndpoint e;
  e.kind = kind;
  e.clamped = value > 1.0;
  e.abscissa = std::min(value, 1.0);
  if (kind == "Lp-Lp'") e.point = {e.abscissa, 1.0 - e.abscissa};
  else if (kind == "Lp-L2") e.point = {e.abscissa, 0.5};
  else e.point = {e.abscissa, e.abscissa};
  return e;
}

bool on_segment(const RieszPoint& a, const RieszPoint& b, const RieszPoint& p) {
  const double len = std::hypot(b.inv_p - a.inv_p, b.inv_q - a.inv_q);
  if (std::abs(cross(a, b, p)) > kSame * std::max(len, 1.0)) return false;
  const double t = (p.inv_p - a.inv_p) * (b.inv_p - a.inv_p) + (p.inv_q - a.inv_q) * (b.inv_q - a.inv_q);
  return t >= -kSame && t <= len * len + kSame;
}

// Hull of (1/2, 1/2), the endpoints, their mirrors, the lifts to 1/q = 1
// and the mirrored lifts to 1/p = 0; lifts of open points stay open. An
// edge is closed when some closed source point lies on it; its vertices
// are open when only open sources sit there.
void build_region(RieszRegion& r) {
  std::vector<Source> pts{{{0.5, 0.5}, false}};
  for (const RieszEndpoint& e : r.endpoints) {
    pts.push_back({e.point, true});
    pts.push_back({mirror(e.point), true});
  }
  const std::size_t base = pts.size();
  for (std::size_t i = 0; i < base; ++i) {
    pts.push_back({{pts[i].p.inv_p, 1.0}, pts[i].excluded});
    pts.push_back({{0.0, pts[i].p.inv_q}, pts[i].excluded});
  }
  pts.push_back({{0.0, 1.0}, false});

  std::vector<Source> uniq;
  for (const Source& s : pts) {
    auto it = std::find_if(uniq.begin(), uniq.end(), [&](const Source& u) { return same(u.p, s.p); });
    if (it == uniq.end()) uniq.push_back(s);
    else it->excluded = it->excluded && s.excluded;
  }
  std::vector<Source> sorted = uniq;
  std::sort(sorted.begin(), sorted.end(), [](const Source& a, const Source& b) {
    return a.p.inv_p < b.p.inv_p || (a.p.inv_p == b.p.inv_p && a.p.inv_q < b.p.inv_q);
  });

  // Andrew's monotone chain, counter-clockwise, collinear points dropped.
  std::vector<Source> hull;
  auto push_chain = [&](auto begin, auto end) {
    const std::size_t floor = hull.size();
    for (auto it = begin; it != end; ++it) {
      while (hull.size() >= floor + 2 && cross(hull[hull.size() - 2].p, hull.back().p, it->p) <= kSame)
        hull.pop_back();
      hull.push_back(*it);
    }
    hull.pop_back();
  };
  push_chain(sorted.begin(), sorted.end());
  push_chain(sorted.rbegin(), sorted.rend());

  for (const Source& s : hull) {
    r.vertices.push_back(s.p);
    if (s.excluded) r.excluded.push_back(s.p);
  }
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const RieszPoint& a = hull[i].p;
    const RieszPoint& b = hull[(i + 1) % hull.size()].p;
    bool closed = false;
    for (const Source& s : uniq) closed = closed || (!s.excluded && on_segment(a, b, s.p));
    r.boundary_included.push_back(closed);
  }
  // Stated endpoints and their mirrors stay open wherever they touch the boundary.
  for (const Source& s : uniq) {
    const bool stated = std::any_of(r.endpoints.begin(), r.endpoints.end(), [&](const RieszEndpoint& e) {
      return same(e.point, s.p) || same(mirror(e.point), s.p);
    });
    if (stated && s.excluded &&
        std::none_of(r.excluded.begin(), r.excluded.end(), [&](const RieszPoint& x) { return same(x, s.p); }))
      r.excluded.push_back(s.p);
  }
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0)) throw Error("alpha", "alpha must be positive");
}

std::string describe(const char* name, int d, double s, double alpha) {
  std::ostringstream o;
  o << name << " region, d=" << d << ", s=" << s << ", alpha=" << alpha;
  return o.str();
}

}  // namespace

RieszRegion endpoints_main(int d, double s, double alpha, bool with_lower_bound) {
  check_alpha(alpha);
  if (d < 2) throw Error("dimension", "d must be at least 2");
  RieszRegion r;
  const double g = s + alpha - d;
  r.endpoints.push_back(make_endpoint("Lp-Lp'", (2.0 * g + 1.0) / (2.0 * g + 2.0)));
  r.endpoints.push_back(make_endpoint("Lp-L2", (3.0 * s + 2.0 * alpha - 2.0 * d) / (2.0 * s)));
  if (with_lower_bound)
    r.endpoints.push_back(make_endpoint("Lp-Lp", (s + 2.0 * alpha - d) / (2.0 * alpha)));
  r.description = describe(with_lower_bound ? "main (with lower bound)" : "main", d, s, alpha);
  for (const auto& e : r.endpoints) r.clamped = r.clamped || e.clamped;
  r.valid = s > d - alpha;
  if (r.valid) build_region(r);
  else r.description += " (invalid: s <= d - alpha)";
  return r;
}

RieszRegion endpoints_second(int d, double s, double alpha) {
  check_alpha(alpha);
  if (d < 2) throw Error("dimension", "d must be at least 2");
  RieszRegion r;
  r.endpoints.push_back(make_endpoint("Lp-Lp'", (2.0 * s + alpha - d) / (2.0 * s)));
  r.endpoints.push_back(make_endpoint("Lp-L2", (3.0 * s + 2.0 * alpha - 2.0 * d) / (2.0 * s)));
  r.description = describe("second", d, s, alpha);
  for (const auto& e : r.endpoints) r.clamped = r.clamped || e.clamped;
  r.valid = s > d - alpha;
  if (r.valid) build_region(r);
  else r.description += " (invalid: s <= d - alpha)";
  return r;
}

SharpnessMain sharpness_line_main(int d, double s, int k_sphere) {
  if (!(s > d - 1)) throw Error("threshold", "the sloped line needs s > d - 1");
  if (k_sphere < 1) throw Error("k_sphere", "sphere dimension must be >= 1");
  const double t = s - d + k_sphere;
  SharpnessMain m;
  m.sloped = {t / (t + 1.0), (s - d + 1.0) / (t + 1.0)};
  m.vertical = t / k_sphere;
  return m;
}

SlopedLine sharpness_line_second(int d, double s, double alpha) {
  check_alpha(alpha);
  if (!(s > d - alpha)) throw Error("threshold", "the line needs s > d - alpha");
  return {(s - d + alpha) / s, 1.0};
}

bool in_region(const RieszRegion& region, const RieszPoint& point, double tol) {
  if (!region.valid) throw Error("invalid region", "region is not valid");
  const auto& v = region.vertices;
  bool on_open_edge = false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const RieszPoint& a = v[i];
    const RieszPoint& b = v[(i + 1) % v.size()];
    const double len = std::hypot(b.inv_p - a.inv_p, b.inv_q - a.inv_q);
    const double c = cross(a, b, point) / len;
    if (c < -tol) return false;
    if (c <= tol && !region.boundary_included[i]) on_open_edge = true;
  }
  if (on_open_edge) return false;
  // Open points only matter on the boundary; inside they are interpolated.
  bool on_boundary = false;
  for (std::size_t i = 0; i < v.size(); ++i)
    on_boundary = on_boundary || on_segment(v[i], v[(i + 1) % v.size()], point);
  if (on_boundary)
    for (const RieszPoint& e : region.excluded)
      if (same(e, point, tol)) return false;
  return true;
}

nlohmann::json to_json(const RieszRegion& r) {
  auto pt = [](const RieszPoint& p) { return nlohmann::json::array({p.inv_p, p.inv_q}); };
  nlohmann::json j;
  j["description"] = r.description;
  j["valid"] = r.valid;
  j["clamped"] = r.clamped;
  j["vertices"] = nlohmann::json::array();
  for (const auto& p : r.vertices) j["vertices"].push_back(pt(p));
  j["boundary_included"] = r.boundary_included;
  j["excluded"] = nlohmann::json::array();
  for (const auto& p : r.excluded) j["excluded"].push_back(pt(p));
  j["endpoints"] = nlohmann::json::array();
  for (const auto& e : r.endpoints)
    j["endpoints"].push_back(
        {{"kind", e.kind}, {"abscissa", e.abscissa}, {"point", pt(e.point)}, {"clamped", e.clamped}});
  return j;
}

nlohmann::json to_json(const SlopedLine& l) { return {{"intercept", l.intercept}, {"slope", l.slope}}; }

nlohmann::json to_json(const SharpnessMain& l) {
  return {{"sloped", to_json(l.sloped)}, {"vertical", l.vertical}};
}

}  // namespace fraver
