// Experiment runner: every scan and measurement as a subcommand, JSON config
// in, CSV + JSON out. Exit codes: 0 all checks pass, 1 a threshold check
// failed, 2 config or hypothesis error, 3 numerical failure.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

#include "kg/errors.hpp"
#include "kg/experiments.hpp"
#include "kg/util.hpp"

namespace {

kg::json load_config(const std::string& path) {
  if (path.empty()) return kg::json::object();
  std::ifstream in(path);
  if (!in) throw kg::InvalidConfigError("cannot open config file: " + path);
  kg::json j;
  try {
    in >> j;
  } catch (const std::exception& ex) {
    throw kg::InvalidConfigError(std::string("config parse error: ") + ex.what());
  }
  return j;
}

int run_one(const std::string& experiment, const std::string& config_path,
            const std::string& out_dir, bool strict) {
  const kg::json cfg = kg::resolve_config(experiment, load_config(config_path));
  const auto t0 = std::chrono::steady_clock::now();
  kg::ExperimentResult result = kg::run_experiment(experiment, cfg);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::filesystem::path dir = out_dir.empty()
                                        ? std::filesystem::path("out") / experiment
                                        : std::filesystem::path(out_dir);
  kg::write_experiment_report(dir, result);
  kg::write_summary(dir, kg::summarize({result}), {{experiment, seconds}});

  for (const auto& c : result.checks)
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << " = "
              << kg::format_double(c.value) << " (bounds [" << kg::format_double(c.lo)
              << ", " << kg::format_double(c.hi) << "])\n";
  (void)strict;
  return result.pass() ? 0 : 1;
}

int run_suite(const std::string& out_dir, bool strict) {
  const std::filesystem::path dir = out_dir.empty() ? std::filesystem::path("out/suite") : std::filesystem::path(out_dir);
  std::vector<kg::ExperimentResult> results;
  std::vector<std::pair<std::string, double>> timings;
  for (const auto& entry : kg::suite_entries()) {
    const kg::json cfg = kg::resolve_config(entry.experiment, entry.overrides);
    const auto t0 = std::chrono::steady_clock::now();
    kg::ExperimentResult result = kg::run_experiment(entry.experiment, cfg);
    result.id = entry.instance;
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    timings.emplace_back(entry.instance, seconds);
    kg::write_experiment_report(dir / entry.instance, result);
    for (const auto& c : result.checks)
      std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << entry.instance << ": " << c.name
                << " = " << kg::format_double(c.value) << "\n";
    results.push_back(std::move(result));
  }
  const kg::json summary = kg::summarize(results);
  kg::write_summary(dir, summary, timings);
  std::cout << (summary["overall_pass"].get<bool>() ? "suite: PASS\n" : "suite: FAIL\n");
  (void)strict;
  return summary["overall_pass"].get<bool>() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kglab: numerical experiments for weighted-norm dispersive decay "
               "of the radial 3D Klein-Gordon equation"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int threads = 1;
  bool strict = false;
  app.add_option("--config", config_path, "JSON config file")->capture_default_str();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads for sweeps")->capture_default_str();
  app.add_flag("--strict", strict, "treat warnings as failures");

  std::string chosen;
  for (const auto& name : kg::experiment_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->callback([&chosen, name]() { chosen = name; });
  }
  CLI::App* suite = app.add_subcommand("suite", "run the acceptance battery");
  suite->callback([&chosen]() { chosen = "suite"; });

  CLI11_PARSE(app, argc, argv);
  kg::set_thread_count(threads);

  try {
    if (chosen == "suite") return run_suite(out_dir, strict);
    return run_one(chosen, config_path, out_dir, strict);
  } catch (const kg::InvalidConfigError& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return 2;
  } catch (const kg::NumericalFailureError& ex) {
    std::cerr << "numerical failure: " << ex.what() << " (last gap " << ex.last_gap
              << ")\n";
    return 3;
  } catch (const kg::Error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 3;
  }
}
