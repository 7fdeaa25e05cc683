#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace wr {

// Exit-code contract of the scenario runner.
inline constexpr int kExitPass = 0;
inline constexpr int kExitAssertionFailed = 1;
inline constexpr int kExitSchemaError = 2;

struct ScenarioCheck {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string note;
};

struct ScenarioResult {
    std::string name, kind;
    bool pass = false;
    int exit_code = kExitPass;
    std::vector<ScenarioCheck> checks;
    std::vector<std::string> artifacts; // files written under the output dir
    std::string error;

    nlohmann::json to_json() const;
};

// Validates the scenario document against the shipped schema rules, runs
// it, and writes report.json plus CSV artifacts into out_dir.
ScenarioResult run_scenario_json(const nlohmann::json& doc, const std::string& out_dir);
ScenarioResult run_scenario_file(const std::string& path, const std::string& out_dir);

// One row of the 1-D dimension table.
struct OneDTableRow {
    std::string domain;
    double tau = 0.0;
    double extent = 1.0;
    int dim = 0, dim_D = 0, dim_N = 0;
};

std::vector<OneDTableRow> table_1d(const std::vector<std::pair<std::string, std::pair<double, double>>>& rows);

// CSV with '.' decimal separator, LF line endings, 17 significant digits.
std::string table_1d_csv(const std::vector<OneDTableRow>& rows);
std::string format_double(double v);

// Writes content to path (creating directories), returns the path.
std::string write_text_file(const std::string& path, const std::string& content);

} // namespace wr
