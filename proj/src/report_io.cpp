#include <fstream>
#include <iomanip>

#include "fraver/experiments.hpp"

namespace fraver {

std::string combine_verdicts(const std::vector<std::string>& verdicts) {
  bool all = !verdicts.empty();
  for (const std::string& v : verdicts) {
    if (v == "violated") return "violated";
    all = all && v == "consistent";
  }
  return all ? "consistent" : "inconclusive";
}

nlohmann::json to_json(const ExperimentReport& r) {
  nlohmann::json j;
  j["experiment"] = r.experiment;
  j["config"] = r.config;
  j["measured_exponents"] = nlohmann::json::object();
  for (const auto& [k, v] : r.measured_exponents) j["measured_exponents"][k] = finite_or_null(v);
  j["scalings"] = nlohmann::json::object();
  for (const auto& [k, v] : r.scalings) j["scalings"][k] = to_json(v);
  j["scaling"] = r.scalings.empty() ? nlohmann::json(nullptr) : to_json(r.scalings.front().second);
  j["details"] = r.details;
  j["flags"] = r.flags;
  j["errors"] = r.errors;
  j["verdict"] = r.verdict;
  j["runtime_seconds"] = r.runtime_seconds;
  j["artifacts"] = r.artifacts;
  return j;
}

void write_csv(const std::filesystem::path& path, const std::string& x_label,
               const std::string& y_label, const std::vector<std::pair<double, double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io", "cannot write " + path.string());
  out << x_label << ',' << y_label << '\n';
  out << std::setprecision(17);
  for (const auto& [x, y] : rows) out << x << ',' << y << '\n';
}

void write_report(ExperimentReport& r, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  r.artifacts.clear();
  for (const CsvTable& t : r.tables) {
    const std::string file = t.name + ".csv";
    write_csv(out_dir / file, t.x_label, t.y_label, t.rows);
    r.artifacts.push_back(file);
  }
  for (const auto& [name, doc] : r.json_files) {
    std::ofstream out(out_dir / name, std::ios::binary);
    if (!out) throw Error("io", "cannot write " + (out_dir / name).string());
    out << doc.dump(2) << '\n';
    r.artifacts.push_back(name);
  }
  std::ofstream out(out_dir / "report.json", std::ios::binary);
  if (!out) throw Error("io", "cannot write report.json");
  out << to_json(r).dump(2) << '\n';
}

int exit_code_for(const ExperimentReport& r) { return r.verdict == "violated" ? 1 : 0; }

}  // namespace fraver
