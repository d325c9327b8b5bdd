#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fraver/measures.hpp"
#include "json.hpp"

namespace fraver {

struct ExperimentConfig {
  std::string name = "default";
  int d = 2;
  std::optional<double> s_target;
  double alpha = 0.5;
  int k_sphere = 1;
  std::vector<double> eps_list{0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625};
  std::vector<int> k_range{2, 3, 4, 5, 6, 7};
  int per_axis = 0;  // 0: chosen per experiment
  std::string measure_recipe = "cantor2";
  double cantor_ratio = 1.0 / 3.0;
  int depth = 0;  // 0: chosen per experiment or per eps by the resolution rule
  std::string operator_variant = "annulus";
  double epsilon = 0.015625;
  double p = 2.0;
  double q = 2.0;
  std::vector<std::pair<double, double>> inv_pq;  // (1/p, 1/q) pairs for the sharpness runs
  std::uint64_t seed = 1;
  double tolerance = 0.3;
  std::string measure_file;

  void validate() const;
};

/// Unknown keys and malformed values throw Error("config", ...).
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);
ExperimentConfig load_config(const std::string& path);

/// Recipe names are normalised: "cantor×lebesgue" and "cantor-lebesgue" are
/// the same recipe.
std::string canonical_recipe(const std::string& name);

/// Smallest Cantor depth whose atoms sit at scale <= eps / 10 (the Cantor
/// factor spanning [0, span]).
int depth_for_eps(double ratio, double eps, double span = 1.0);

/// The measure named by the recipe. cantor: C; cantor2: C x C;
/// cantor-lebesgue: C x L^{d-1}; lebesgue: cube [0,1]^d; dirac: the origin;
/// cantor-dirac-lebesgue: C x delta x L^{d-2} glued to a Lebesgue block.
DiscreteMeasure build_recipe(const ExperimentConfig& c, int depth);

}  // namespace fraver
