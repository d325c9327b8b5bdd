// fraver: command-line front end for the experiment suites.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fraver/experiments.hpp"

namespace {

struct Common {
  std::string config;
  std::string out = "fraver-out";
  std::optional<std::uint64_t> seed;
  std::optional<int> grid;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "experiment config (JSON)");
  cmd->add_option("--out", c.out, "output directory")->capture_default_str();
  cmd->add_option("--seed", c.seed, "seed for randomized test families");
  cmd->add_option("--grid", c.grid, "grid points per axis");
}

fraver::ExperimentConfig resolve(const Common& c) {
  fraver::ExperimentConfig cfg = c.config.empty() ? fraver::ExperimentConfig{} : fraver::load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (c.grid) cfg.per_axis = *c.grid;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of Frostman-measure estimates for averaging operators"};
  app.require_subcommand(1);
  Common common;
  using Runner = fraver::ExperimentReport (*)(const fraver::ExperimentConfig&);
  Runner chosen = nullptr;

  auto group = [&](const std::string& name, const std::string& help,
                   std::initializer_list<std::pair<std::string, Runner>> actions) {
    CLI::App* cmd = app.add_subcommand(name, help);
    if (actions.size() == 1 && actions.begin()->first.empty()) {
      add_common(cmd, common);
      cmd->callback([&chosen, run = actions.begin()->second] { chosen = run; });
      return;
    }
    cmd->require_subcommand(1);
    for (const auto& [sub, run] : actions) {
      CLI::App* leaf = cmd->add_subcommand(sub);
      add_common(leaf, common);
      leaf->callback([&chosen, run = run] { chosen = run; });
    }
  };

  group("measure", "build or audit a measure",
        {{"build", fraver::run_measure_build}, {"check", fraver::run_measure_check}});
  group("lemma", "L2-averaging, essential disjointness and ball-cover lemmas",
        {{"l2avg", fraver::run_l2_average},
         {"disjoint", fraver::run_disjointness},
         {"cover", fraver::run_cover},
         {"all", fraver::run_lemma_suite}});
  group("pieces", "piece-norm scalings", {{"", fraver::run_piece_norms}});
  group("sharp", "sharpness constructions",
        {{"main", fraver::run_sharpness_main},
         {"threshold", fraver::run_threshold_s},
         {"second", fraver::run_sharpness_second}});
  group("diagram", "Riesz diagram regions and sharpness lines", {{"", fraver::run_diagram}});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const fraver::ExperimentConfig cfg = resolve(common);
    fraver::ExperimentReport report = chosen(cfg);
    fraver::write_report(report, common.out);
    std::cout << report.experiment << ": " << report.verdict << " (" << common.out << "/report.json)\n";
    return fraver::exit_code_for(report);
  } catch (const fraver::Error& e) {
    std::cerr << "fraver: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "fraver: " << e.what() << '\n';
    return 2;
  }
}
