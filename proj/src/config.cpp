#include "fraver/config.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <set>

namespace fraver {

namespace {

double exponent_from_json(const nlohmann::json& v) {
  if (v.is_string() && (v == "inf" || v == "infinity")) return std::numeric_limits<double>::infinity();
  return v.get<double>();
}

nlohmann::json exponent_to_json(double v) {
  return std::isinf(v) ? nlohmann::json("inf") : nlohmann::json(v);
}

bool is_dyadic(double x) {
  const double l = std::log2(x);
  return std::abs(l - std::round(l)) < 1e-12;
}

}  // namespace

std::string canonical_recipe(const std::string& name) {
  std::string out;
  for (std::size_t i = 0; i < name.size();) {
    // U+00D7 (multiplication sign) is 0xC3 0x97 in UTF-8.
    if (i + 1 < name.size() && static_cast<unsigned char>(name[i]) == 0xC3 &&
        static_cast<unsigned char>(name[i + 1]) == 0x97) {
      out += '-';
      i += 2;
    } else {
      out += name[i++];
    }
  }
  static const std::set<std::string> known{"cantor", "cantor2", "cantor-lebesgue", "lebesgue",
                                           "dirac", "cantor-dirac-lebesgue"};
  if (!known.count(out)) throw Error("config", "unknown measure recipe '" + name + "'");
  return out;
}

void ExperimentConfig::validate() const {
  if (d < 1 || d > 3) throw Error("config", "d must be 1, 2 or 3");
  if (!(alpha > 0.0)) throw Error("config", "alpha must be positive");
  if (k_sphere < 1) throw Error("config", "k_sphere must be >= 1");
  if (eps_list.empty()) throw Error("config", "eps_list is empty");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0) || !is_dyadic(eps_list[i]))
      throw Error("config", "eps_list entries must be positive powers of two");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
      throw Error("config", "eps_list must be strictly decreasing");
  }
  for (std::size_t i = 0; i < k_range.size(); ++i) {
    if (k_range[i] < 0) throw Error("config", "k_range entries must be nonnegative");
    if (i > 0 && k_range[i] <= k_range[i - 1]) throw Error("config", "k_range must be increasing");
  }
  if (per_axis != 0 && (per_axis < 8 || !std::has_single_bit(static_cast<unsigned>(per_axis))))
    throw Error("config", "grid per_axis must be a power of two >= 8");
  if (!(cantor_ratio > 0.0 && cantor_ratio < 0.5)) throw Error("config", "cantor_ratio must lie in (0, 1/2)");
  if (depth < 0) throw Error("config", "depth must be >= 0");
  if (operator_variant != "annulus" && operator_variant != "riesz")
    throw Error("config", "operator must be 'annulus' or 'riesz'");
  if (!(epsilon > 0.0)) throw Error("config", "epsilon must be positive");
  if (!(p >= 1.0) || !(q >= 1.0)) throw Error("config", "p and q must be >= 1");
  for (const auto& [a, b] : inv_pq)
    if (a < 0.0 || a > 1.0 || b < 0.0 || b > 1.0) throw Error("config", "inv_pq entries must lie in [0,1]");
  if (!(tolerance > 0.0)) throw Error("config", "tolerance must be positive");
  canonical_recipe(measure_recipe);
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error("config", "config must be a JSON object");
  static const std::set<std::string> keys{
      "name",         "d",     "s_target", "alpha",  "k_sphere", "eps_list",  "k_range",
      "grid",         "measure_recipe", "cantor_ratio", "depth", "operator", "epsilon",
      "p",            "q",     "inv_pq",   "seed",   "tolerance", "measure_file"};
  for (const auto& [k, v] : j.items())
    if (!keys.count(k)) throw Error("config", "unknown key '" + k + "'");
  ExperimentConfig c;
  try {
    c.name = j.value("name", c.name);
    c.d = j.value("d", c.d);
    if (j.contains("s_target") && !j["s_target"].is_null()) c.s_target = j["s_target"].get<double>();
    c.alpha = j.value("alpha", c.alpha);
    c.k_sphere = j.value("k_sphere", c.k_sphere);
    if (j.contains("eps_list")) c.eps_list = j["eps_list"].get<std::vector<double>>();
    if (j.contains("k_range")) c.k_range = j["k_range"].get<std::vector<int>>();
    if (j.contains("grid")) {
      const auto& g = j["grid"];
      if (g.is_number_integer()) c.per_axis = g.get<int>();
      else c.per_axis = g.value("per_axis", 0);
    }
    c.measure_recipe = j.value("measure_recipe", c.measure_recipe);
    c.cantor_ratio = j.value("cantor_ratio", c.cantor_ratio);
    c.depth = j.value("depth", c.depth);
    c.operator_variant = j.value("operator", c.operator_variant);
    c.epsilon = j.value("epsilon", c.epsilon);
    if (j.contains("p")) c.p = exponent_from_json(j["p"]);
    if (j.contains("q")) c.q = exponent_from_json(j["q"]);
    if (j.contains("inv_pq"))
      for (const auto& e : j["inv_pq"]) c.inv_pq.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    c.seed = j.value("seed", c.seed);
    c.tolerance = j.value("tolerance", c.tolerance);
    c.measure_file = j.value("measure_file", c.measure_file);
  } catch (const nlohmann::json::exception& e) {
    throw Error("config", e.what());
  }
  c.measure_recipe = canonical_recipe(c.measure_recipe);
  c.validate();
  return c;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j = {{"name", c.name},
                      {"d", c.d},
                      {"s_target", c.s_target ? nlohmann::json(*c.s_target) : nlohmann::json(nullptr)},
                      {"alpha", c.alpha},
                      {"k_sphere", c.k_sphere},
                      {"eps_list", c.eps_list},
                      {"k_range", c.k_range},
                      {"grid", {{"per_axis", c.per_axis}}},
                      {"measure_recipe", c.measure_recipe},
                      {"cantor_ratio", c.cantor_ratio},
                      {"depth", c.depth},
                      {"operator", c.operator_variant},
                      {"epsilon", c.epsilon},
                      {"p", exponent_to_json(c.p)},
                      {"q", exponent_to_json(c.q)},
                      {"seed", c.seed},
                      {"tolerance", c.tolerance},
                      {"measure_file", c.measure_file}};
  j["inv_pq"] = nlohmann::json::array();
  for (const auto& [a, b] : c.inv_pq) j["inv_pq"].push_back({a, b});
  return j;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("config", "cannot open " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error("config", std::string("malformed JSON: ") + e.what());
  }
  return config_from_json(j);
}

int depth_for_eps(double ratio, double eps, double span) {
  int depth = 1;
  while (span * std::pow(ratio, depth) > eps / 10.0) ++depth;
  return depth;
}

DiscreteMeasure build_recipe(const ExperimentConfig& c, int depth) {
  const std::string recipe = canonical_recipe(c.measure_recipe);
  auto cantor = [&] { return make_cantor(c.cantor_ratio, depth, 1.0); };
  if (recipe == "cantor") {
    if (c.d != 1) throw Error("config", "recipe cantor needs d = 1");
    return cantor();
  }
  if (recipe == "cantor2") {
    if (c.d != 2) throw Error("config", "recipe cantor2 needs d = 2");
    const auto a = cantor();
    return product_measure(a, a).with_label("cantor2(r=" + std::to_string(c.cantor_ratio) +
                                            ",depth=" + std::to_string(depth) + ")");
  }
  if (recipe == "lebesgue") return make_lebesgue_cube(c.d, 1 << depth, 1.0, 1.0);
  if (recipe == "dirac") {
    const std::vector<double> origin(c.d, 0.0);
    return make_dirac(origin);
  }
  if (recipe == "cantor-lebesgue") {
    if (c.d < 2) throw Error("config", "recipe cantor-lebesgue needs d >= 2");
    int n = 8;
    while (n < 256 && n * std::pow(c.cantor_ratio, depth) < 1.0) n *= 2;
    return product_measure(cantor(), make_lebesgue_cube(c.d - 1, n, 1.0, 1.0));
  }
  // cantor-dirac-lebesgue: C x delta (x L) on the axis plus a Lebesgue block
  // one unit above it.
  if (c.d < 2) throw Error("config", "recipe cantor-dirac-lebesgue needs d >= 2");
  const std::vector<double> zero{0.0};
  DiscreteMeasure line = product_measure(cantor(), make_dirac(zero));
  if (c.d == 3) line = product_measure(line, make_lebesgue_cube(1, 64, 1.0, 1.0));
  // Odd cell count puts a row of atoms exactly at height 1.
  DiscreteMeasure block = make_lebesgue_cube(c.d, 33, 0.1, 1.0);
  Point shift{};
  shift[1] = 0.95;
  return measure_sum(line, block.translated(shift));
}

}  // namespace fraver
