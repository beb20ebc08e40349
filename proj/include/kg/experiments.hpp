#ifndef KG_EXPERIMENTS_HPP
#define KG_EXPERIMENTS_HPP

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace kg {

using json = nlohmann::ordered_json;

struct Check {
  std::string name;
  double value = 0.0;
  double lo = 0.0;  // inclusive bounds; a passing check has lo <= value <= hi
  double hi = 0.0;
  bool pass = false;
};

struct CsvFile {
  std::string name;     // file name, e.g. "free_decay.csv"
  std::string content;  // header line + rows
};

struct ExperimentResult {
  std::string id;
  json config;
  json data;
  std::vector<Check> checks;
  std::vector<CsvFile> csv;
  bool pass() const;
};

// Registered experiment names (the CLI subcommands except `suite`).
const std::vector<std::string>& experiment_names();

// Built-in canonical config of one experiment.
json default_config(const std::string& experiment);

// Merge a user config over the defaults. Unknown keys and type mismatches are
// rejected with the offending path; hypothesis checks run eagerly.
json resolve_config(const std::string& experiment, const json& user);

ExperimentResult run_experiment(const std::string& experiment, const json& config);

// The acceptance battery: (instance id, experiment, config overrides).
struct SuiteEntry {
  std::string instance;
  std::string experiment;
  json overrides;
};

const std::vector<SuiteEntry>& suite_entries();

// ---------------------------------------------------------------------------
// report writing (deterministic: volatile timings go to a sidecar text file)

void write_experiment_report(const std::filesystem::path& dir,
                             const ExperimentResult& result);

json summarize(const std::vector<ExperimentResult>& results);

// Writes summary.json, manifest.json (artifact list with content hashes) and
// timings.txt under out_dir; the artifact list covers every file previously
// written below out_dir.
void write_summary(const std::filesystem::path& out_dir, const json& summary,
                   const std::vector<std::pair<std::string, double>>& timings);

std::string format_double(double v);

}  // namespace kg

#endif
