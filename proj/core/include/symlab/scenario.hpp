#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "symlab/verify.hpp"

namespace symlab {

// Configuration failure (unreadable file, malformed JSON, bad literal,
// unknown reference).  The message carries the JSON field path of the
// offending element; the CLI maps this to exit code 2.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScenarioOptions {
  double h_override = 0;  // > 0 replaces the scenario grid spacing
  bool has_seed_override = false;
  std::uint64_t seed_override = 0;
  int threads = 1;  // worker threads for check execution (checks are pure)
};

// One executed check with its declared expectation.
struct ScenarioEntry {
  CheckReport report;
  std::string expected;  // declared verdict
  bool matched = false;  // to_string(report.verdict) == expected
};

struct ScenarioResult {
  std::vector<ScenarioEntry> entries;  // sorted by report name
  // Plot-data curves keyed by file stem ("flow_<name>",
  // "quotients_<name>"): (x, y) rows in plot order.
  std::map<std::string, std::vector<std::pair<double, double>>> curves;
  bool all_matched = false;
};

// Parse and execute a scenario given as JSON text; `source` names the input
// in diagnostics.  Throws ScenarioError on malformed input; a check that
// throws at run time instead yields a report with the `error` verdict.
ScenarioResult run_scenario(const std::string& json_text, const ScenarioOptions& opt,
                            const std::string& source);

// Convenience wrapper: read the file and run it.
ScenarioResult run_scenario_file(const std::string& path, const ScenarioOptions& opt);

// Write reports.json, summary.csv, timings.csv, and one CSV per plot curve
// into out_dir (created if absent).  Files are staged under a temporary name
// and renamed into place at the end, so readers never observe partial
// output.  reports.json and summary.csv are canonical: byte-identical across
// runs of the same scenario and seed; wall-clock timings are segregated into
// timings.csv.
void write_outputs(const ScenarioResult& r, const std::string& out_dir);

// 0 when every verdict matched its declared expectation, 1 otherwise.
int scenario_exit_code(const ScenarioResult& r);

// Bundled demo scenarios (compiled in): returns the JSON text, or an empty
// string for an unknown name.
std::string demo_scenario(const std::string& name);
std::vector<std::string> demo_names();

}  // namespace symlab
