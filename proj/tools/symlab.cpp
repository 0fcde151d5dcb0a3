#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "symlab/scenario.hpp"

namespace {

void add_run_options(CLI::App* c, std::string* out_dir, double* h_override,
                     std::uint64_t* seed, int* threads) {
  c->add_option("--out-dir", *out_dir,
                "Directory for reports.json, summary.csv, timings.csv and plot CSVs")
      ->capture_default_str();
  c->add_option("--h-override", *h_override, "Replace the scenario grid spacing")
      ->check(CLI::PositiveNumber);
  c->add_option("--seed", *seed, "Replace the scenario seed");
  c->add_option("--threads", *threads, "Worker threads for check execution")
      ->check(CLI::Range(1, 64))
      ->capture_default_str();
}

int report_and_write(const symlab::ScenarioResult& res, const std::string& out_dir) {
  symlab::write_outputs(res, out_dir);
  std::size_t matched = 0;
  for (const symlab::ScenarioEntry& e : res.entries) {
    matched += e.matched ? 1 : 0;
    std::cout << (e.matched ? "   ok " : " FAIL ") << e.report.name << ": "
              << to_string(e.report.verdict) << " (expected " << e.expected << ")\n";
  }
  std::cout << matched << "/" << res.entries.size() << " checks matched their expectation; "
            << "reports written to " << (out_dir.empty() ? "." : out_dir) << "\n";
  return symlab::scenario_exit_code(res);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symlab: rearrangement, convex-body, and gradient-energy checks on grid functions"};
  app.require_subcommand(1);

  std::string file;
  std::string demo_name;
  std::string out_dir = ".";
  double h_override = 0;
  std::uint64_t seed = 0;
  int threads = 1;

  CLI::App* run = app.add_subcommand("run", "Execute a scenario file");
  run->add_option("file", file, "Scenario JSON file")->required();
  add_run_options(run, &out_dir, &h_override, &seed, &threads);

  CLI::App* demo = app.add_subcommand("demo", "Execute a bundled demo scenario");
  demo->add_option("name", demo_name, "One of: content_identity, kschwarz_counterexample, polarization_flow, schwarz")
      ->required();
  add_run_options(demo, &out_dir, &h_override, &seed, &threads);

  CLI::App* list = app.add_subcommand("list-checks", "List the available check kinds");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const symlab::CheckInfo& c : symlab::list_checks())
        std::cout << c.key << "\n    " << c.summary << "\n";
      return 0;
    }
    symlab::ScenarioOptions opt;
    opt.h_override = h_override;
    opt.threads = threads;
    CLI::App* active = run->parsed() ? run : demo;
    if (active->count("--seed") > 0) {
      opt.has_seed_override = true;
      opt.seed_override = seed;
    }
    symlab::ScenarioResult res;
    if (run->parsed()) {
      res = symlab::run_scenario_file(file, opt);
    } else {
      const std::string text = symlab::demo_scenario(demo_name);
      if (text.empty()) {
        std::cerr << "error: unknown demo '" << demo_name << "'; known demos:";
        for (const std::string& n : symlab::demo_names()) std::cerr << ' ' << n;
        std::cerr << "\n";
        return 2;
      }
      res = symlab::run_scenario(text, opt, "demo:" + demo_name);
    }
    return report_and_write(res, out_dir);
  } catch (const symlab::ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
