// mctx: run, compare and sweep transmitter simulations from the command line.
//
// Exit codes: 0 ok, 1 usage, 2 invalid configuration or I/O failure,
// 3 comparison failed its thresholds.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "mctx/config.hpp"
#include "mctx/experiment.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitCompareFail = 3;

// Every experiment setting is collected as text and fed through
// apply_setting, so flags, --set and config files share one parser.
struct SpecOptions {
  std::optional<std::string> scenario;
  std::optional<std::string> config;
  std::vector<std::string> sets;
  std::vector<std::pair<std::string, std::optional<std::string>>> flags;
  bool no_receiver = false;
};

void add_spec_options(CLI::App& app, SpecOptions& o) {
  app.add_option("--scenario", o.scenario, "built-in scenario (see list-scenarios)");
  app.add_option("--config", o.config, "key = value file applied after the scenario")
      ->check(CLI::ExistingFile);
  app.add_option("--set", o.sets, "override any setting, key=value (repeatable)");

  // flag name -> setting key
  const std::vector<std::pair<std::string, std::string>> named{
      {"--model", "model"},       {"--k-ab", "k_AB"},     {"--n-mr", "N_MR"},
      {"--t-dis", "t_dis"},       {"--switch-times", "switch_times"},
      {"--duration", "duration"}, {"--stride", "stride"}, {"--seed", "seed"},
      {"--n-runs", "n_runs"},     {"--threads", "threads"}};
  o.flags.reserve(named.size() + mctx::system_config_keys().size());
  for (const auto& [flag, key] : named) o.flags.emplace_back(key, std::nullopt);
  for (const auto& key : mctx::system_config_keys()) o.flags.emplace_back(key, std::nullopt);

  std::size_t i = 0;
  for (const auto& [flag, key] : named) {
    app.add_option(flag, o.flags[i++].second, fmt::format("sets {}", key));
  }
  for (const auto& key : mctx::system_config_keys()) {
    app.add_option("--" + key, o.flags[i++].second, "SystemConfig field (SI units)");
  }
  app.add_flag("--no-receiver", o.no_receiver, "skip the receiver column");
}

mctx::ExperimentSpec resolve_spec(const SpecOptions& o) {
  mctx::ExperimentSpec spec;
  mctx::KeyValues file;
  if (o.config) file = mctx::read_key_value_file(*o.config);
  if (o.scenario) {
    spec = mctx::scenario_spec(*o.scenario);
  } else if (const auto it = file.find("scenario"); it != file.end()) {
    spec = mctx::scenario_spec(it->second);
  }
  for (const auto& [key, value] : file) {
    if (key != "scenario") mctx::apply_setting(spec, key, value);
  }
  for (const auto& [key, value] : o.flags) {
    if (value) mctx::apply_setting(spec, key, *value);
  }
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw mctx::ConfigError(fmt::format("--set '{}': expected key=value", kv));
    mctx::apply_setting(spec, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (o.no_receiver) spec.receiver = false;
  mctx::validate(spec);
  return spec;
}

void write_output(const mctx::TimeSeriesRecord& rec, const std::string& out) {
  if (out == "-") {
    mctx::write_csv(std::cout, rec);
    std::cout.flush();
    if (!std::cout) throw mctx::ConfigError("failed writing to stdout");
  } else {
    mctx::write_csv_file(out, rec);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nanoparticle transmitter simulations: deterministic models, particle ensembles, "
               "receiver response."};
  app.require_subcommand(1);

  SpecOptions run_opts;
  std::string run_out = "-";
  auto* run = app.add_subcommand("run", "run one experiment and write its CSV");
  add_spec_options(*run, run_opts);
  run->add_option("--out,-o", run_out, "output CSV path, '-' for stdout");

  std::string cmp_a, cmp_b;
  double max_rel_rmse = 0.05;
  std::optional<double> max_abs;
  std::vector<std::string> cmp_cols;
  auto* cmp = app.add_subcommand("compare", "compare a CSV against a reference CSV");
  cmp->add_option("a", cmp_a, "CSV under test")->required()->check(CLI::ExistingFile);
  cmp->add_option("reference", cmp_b, "reference CSV")->required()->check(CLI::ExistingFile);
  cmp->add_option("--max-rel-rmse", max_rel_rmse, "per-column relative RMSE threshold");
  cmp->add_option("--max-abs", max_abs, "per-column max absolute deviation threshold");
  cmp->add_option("--columns", cmp_cols, "columns to compare (default: all shared counts)")
      ->delimiter(',');

  SpecOptions sweep_opts;
  std::vector<std::string> grid_axes;
  std::string sweep_dir;
  unsigned jobs = 0;
  auto* swp = app.add_subcommand("sweep", "run a parameter grid");
  add_spec_options(*swp, sweep_opts);
  swp->add_option("--grid", grid_axes,
                  "axis key=v1,v2,... over k_AB, N_MR, t_dis, switch_times (';' between lists) "
                  "or a SystemConfig key (repeatable)")
      ->required();
  swp->add_option("--out-dir", sweep_dir, "directory for point CSVs and summary.csv")->required();
  swp->add_option("--jobs", jobs, "parallel grid points, 0 = all cores");

  auto* list = app.add_subcommand("list-scenarios", "print the built-in scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run) {
      write_output(mctx::run_experiment(resolve_spec(run_opts)), run_out);
    } else if (*cmp) {
      mctx::CompareOptions opt;
      opt.max_rel_rmse = max_rel_rmse;
      opt.max_abs = max_abs;
      opt.columns = cmp_cols;
      const auto report =
          mctx::compare(mctx::read_csv_file(cmp_a), mctx::read_csv_file(cmp_b), opt);
      std::cout << mctx::format_report(report);
      return report.pass ? 0 : kExitCompareFail;
    } else if (*swp) {
      mctx::SweepGrid grid;
      for (const auto& axis : grid_axes) mctx::add_grid_axis(grid, axis);
      const auto rows = mctx::sweep(resolve_spec(sweep_opts), grid, sweep_dir, jobs);
      std::cout << fmt::format("{} points written to {}\n", rows.size(), sweep_dir);
    } else if (*list) {
      for (const auto& s : mctx::builtin_scenarios()) {
        std::cout << fmt::format("{:<10} {:<10} {}\n", s.name, mctx::to_string(s.spec.model),
                                 s.description);
      }
      for (const auto& [alias, target] : mctx::scenario_aliases()) {
        std::cout << fmt::format("{:<10} alias of {}\n", alias, target);
      }
    }
  } catch (const mctx::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return 0;
}
