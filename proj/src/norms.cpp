#include "fraver/norms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace fraver {

double lp_norm(const DiscreteMeasure& mu, std::span<const double> f, double p) {
  if (f.size() != mu.size()) throw Error("length mismatch", "need one f value per atom");
  if (!(p >= 1.0)) throw Error("exponent", "p must be >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
      if (mu.atoms()[i].w > 0.0) m = std::max(m, std::abs(f[i]));
    return m;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += std::pow(std::abs(f[i]), p) * mu.atoms()[i].w;
  return std::pow(acc, 1.0 / p);
}

std::vector<TestFunction> default_test_family(const DiscreteMeasure& mu, std::uint64_t seed,
                                              const FamilyOptions& options) {
  std::mt19937_64 rng(seed);
  const std::size_t n = mu.size();
  const int dim = mu.dim();
  double r_min = options.min_radius;
  if (r_min <= 0.0) r_min = 4.0 * mu.resolution();
  if (r_min <= 0.0) r_min = 1e-3 * std::max(mu.diameter(), 1.0);
  const double r_top = std::exp2(std::ceil(std::log2(std::max(mu.diameter(), r_min))));

  std::vector<TestFunction> family;
  family.push_back({"constant 1", std::vector<double>(n, 1.0)});

  for (int c = 0; c < options.centers; ++c) {
    const std::size_t idx = rng() % n;
    const Point& x = mu.atoms()[idx].x;
    for (double r = r_top; r >= r_min; r /= 2.0) {
      std::vector<double> v(n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        if (squared_distance(mu.atoms()[i].x, x, dim) <= r * r) v[i] = 1.0;
      std::ostringstream w;
      w << "ball(atom=" << idx << ",r=" << r << ")";
      family.push_back({w.str(), std::move(v)});
    }
  }

  for (int s = 0; s < options.slabs; ++s) {
    const std::size_t idx = rng() % n;
    const double c = mu.atoms()[idx].x[0];
    const double half = std::max(r_top * std::exp2(-2.0 - 2.0 * s), r_min);
    std::vector<double> v(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(mu.atoms()[i].x[0] - c) <= half) v[i] = 1.0;
    std::ostringstream w;
    w << "slab(x0=" << c << ",half_width=" << half << ")";
    family.push_back({w.str(), std::move(v)});
  }

  for (int s = 0; s < options.random_signs; ++s) {
    std::vector<double> v(n);
    for (double& x : v) x = (rng() & 1U) ? 1.0 : -1.0;
    family.push_back({"random signs #" + std::to_string(s), std::move(v)});
  }
  return family;
}

PowerIterationResult power_iteration(const LinearMap& apply, const DiscreteMeasure& mu,
                                     std::vector<double> start, int max_iterations, double rel_tol,
                                     const LinearMap& adjoint) {
  PowerIterationResult r;
  double norm = lp_norm(mu, start, 2.0);
  if (!(norm > 0.0)) throw Error("zero vector", "power iteration needs a nonzero start vector");
  for (double& x : start) x /= norm;
  std::vector<double> v = std::move(start);
  for (int it = 0; it < max_iterations; ++it) {
    std::vector<double> w = apply(v);
    const double value = lp_norm(mu, w, 2.0);
    r.history.push_back(value);
    r.iterations = it + 1;
    if (!(value > 0.0)) break;
    if (adjoint) {
      w = adjoint(w);
      norm = lp_norm(mu, w, 2.0);
      if (!(norm > 0.0)) break;
    } else {
      norm = value;
    }
    for (double& x : w) x /= norm;
    v = std::move(w);
    if (r.history.size() >= 2) {
      const double prev = r.history[r.history.size() - 2];
      if (std::abs(value - prev) <= rel_tol * value) {
        r.converged = true;
        break;
      }
    }
  }
  r.value = *std::max_element(r.history.begin(), r.history.end());
  r.vector = std::move(v);
  return r;
}

std::vector<NormEstimate> estimate_norms(const LinearMap& apply, const DiscreteMeasure& mu_in,
                                         const DiscreteMeasure& mu_out,
                                         std::span<const std::pair<double, double>> pq,
                                         std::span<const TestFunction> family,
                                         const NormOptions& options) {
  if (family.empty()) throw Error("empty family", "test family is empty");
  std::vector<NormEstimate> out;
  for (const auto& [p, q] : pq) out.push_back({p, q, 0.0, "test-family", ""});
  std::vector<const TestFunction*> best(pq.size(), nullptr);
  bool any = false;
  for (const TestFunction& t : family) {
    std::vector<double> in_norm(pq.size());
    bool usable = false;
    for (std::size_t c = 0; c < pq.size(); ++c) {
      in_norm[c] = lp_norm(mu_in, t.values, pq[c].first);
      usable = usable || in_norm[c] > 0.0;
    }
    if (!usable) continue;
    any = true;
    const std::vector<double> image = apply(t.values);
    for (std::size_t c = 0; c < pq.size(); ++c) {
      if (!(in_norm[c] > 0.0)) continue;
      const double ratio = lp_norm(mu_out, image, pq[c].second) / in_norm[c];
      if (!best[c] || ratio > out[c].value) {
        out[c].value = ratio;
        out[c].witness = t.witness;
        best[c] = &t;
      }
    }
  }
  if (!any) throw Error("empty family", "every test function has zero norm");

  if (options.power_iteration && &mu_in == &mu_out) {
    for (std::size_t c = 0; c < pq.size(); ++c) {
      if (pq[c].first != 2.0 || pq[c].second != 2.0 || !best[c]) continue;
      const PowerIterationResult pi = power_iteration(apply, mu_in, best[c]->values,
                                                      options.max_iterations, options.rel_tol,
                                                      options.adjoint);
      if (pi.value >= out[c].value) {
        out[c].value = pi.value;
        out[c].method = "power-iteration";
        out[c].witness = "power iteration from " + best[c]->witness + " (" +
                         std::to_string(pi.iterations) + " steps)";
      }
    }
  }
  return out;
}

NormEstimate op_norm_estimate(const LinearMap& apply, const DiscreteMeasure& mu_in,
                              const DiscreteMeasure& mu_out, double p, double q,
                              std::span<const TestFunction> family, const NormOptions& options) {
  const std::pair<double, double> pair{p, q};
  return estimate_norms(apply, mu_in, mu_out, std::span(&pair, 1), family, options).front();
}

nlohmann::json to_json(const NormEstimate& e) {
  auto exponent = [](double v) { return std::isinf(v) ? nlohmann::json("inf") : nlohmann::json(v); };
  return {{"p", exponent(e.p)},
          {"q", exponent(e.q)},
          {"value", e.value},
          {"method", e.method},
          {"witness", e.witness}};
}

}  // namespace fraver
