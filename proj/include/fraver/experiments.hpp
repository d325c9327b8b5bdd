#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fraver/config.hpp"
#include "fraver/scaling.hpp"
#include "json.hpp"

namespace fraver {

/// Two-column table written as <out>/<name>.csv.
struct CsvTable {
  std::string name;
  std::string x_label;
  std::string y_label;
  std::vector<std::pair<double, double>> rows;
};

struct ExperimentReport {
  std::string experiment;
  nlohmann::json config;
  std::map<std::string, double> measured_exponents;
  std::vector<std::pair<std::string, ScalingReport>> scalings;
  nlohmann::json details = nlohmann::json::object();
  std::vector<std::string> flags;
  std::vector<std::string> errors;
  std::string verdict = "inconclusive";
  double runtime_seconds = 0.0;
  std::vector<CsvTable> tables;
  std::vector<std::pair<std::string, nlohmann::json>> json_files;  // extra <out>/<name>
  std::vector<std::string> artifacts;  // filled by write_report
};

/// "violated" if any part is violated, "consistent" if all are, otherwise
/// "inconclusive".
std::string combine_verdicts(const std::vector<std::string>& verdicts);

ExperimentReport run_measure_build(const ExperimentConfig& c);
ExperimentReport run_measure_check(const ExperimentConfig& c);
ExperimentReport run_l2_average(const ExperimentConfig& c);
ExperimentReport run_disjointness(const ExperimentConfig& c);
ExperimentReport run_cover(const ExperimentConfig& c);
ExperimentReport run_lemma_suite(const ExperimentConfig& c);
ExperimentReport run_piece_norms(const ExperimentConfig& c);
ExperimentReport run_sharpness_main(const ExperimentConfig& c);
ExperimentReport run_threshold_s(const ExperimentConfig& c);
ExperimentReport run_sharpness_second(const ExperimentConfig& c);
ExperimentReport run_diagram(const ExperimentConfig& c);

nlohmann::json to_json(const ExperimentReport& r);

/// Writes every table and extra JSON file, then report.json.
void write_report(ExperimentReport& r, const std::filesystem::path& out_dir);
void write_csv(const std::filesystem::path& path, const std::string& x_label,
               const std::string& y_label, const std::vector<std::pair<double, double>>& rows);

/// 1 when the verdict is "violated", 0 otherwise.
int exit_code_for(const ExperimentReport& r);

}  // namespace fraver
