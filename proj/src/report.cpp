#include "kg/experiments.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>

namespace kg {

namespace {

uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

json checks_json(const std::vector<Check>& checks) {
  json arr = json::array();
  for (const auto& c : checks)
    arr.push_back(json{{"name", c.name}, {"value", c.value}, {"lo", c.lo},
                       {"hi", c.hi}, {"pass", c.pass}});
  return arr;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_experiment_report(const std::filesystem::path& dir,
                             const ExperimentResult& result) {
  std::filesystem::create_directories(dir);
  for (const auto& f : result.csv) write_file(dir / f.name, f.content);
  json report;
  report["id"] = result.id;
  report["config"] = result.config;
  report["data"] = result.data;
  report["checks"] = checks_json(result.checks);
  report["pass"] = result.pass();
  write_file(dir / "report.json", report.dump(2) + "\n");
}

json summarize(const std::vector<ExperimentResult>& results) {
  json summary;
  json entries = json::array();
  bool all = true;
  std::vector<std::string> failing;
  for (const auto& r : results) {
    entries.push_back(json{{"id", r.id}, {"pass", r.pass()}, {"checks", checks_json(r.checks)}});
    if (!r.pass()) {
      all = false;
      failing.push_back(r.id);
    }
  }
  summary["experiments"] = entries;
  summary["overall_pass"] = all;
  summary["failing"] = failing;
  return summary;
}

void write_summary(const std::filesystem::path& out_dir, const json& summary,
                   const std::vector<std::pair<std::string, double>>& timings) {
  std::filesystem::create_directories(out_dir);
  write_file(out_dir / "summary.json", summary.dump(2) + "\n");

  // timings are volatile; they live outside the deterministic artifacts
  std::string tt;
  for (const auto& [name, seconds] : timings) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", seconds);
    tt += name + " " + buf + " s\n";
  }
  write_file(out_dir / "timings.txt", tt);

  // manifest: sorted artifact list with content hashes (timings excluded)
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(out_dir)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = std::filesystem::relative(entry.path(), out_dir);
    if (rel == "timings.txt" || rel == "manifest.json") continue;
    files.push_back(rel);
  }
  std::sort(files.begin(), files.end());
  json manifest;
  json arts = json::array();
  for (const auto& rel : files) {
    std::ifstream in(out_dir / rel, std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    char hex[20];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(content)));
    arts.push_back(json{{"path", rel.generic_string()},
                        {"bytes", content.size()},
                        {"fnv1a64", hex}});
  }
  manifest["artifacts"] = arts;
  write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace kg
