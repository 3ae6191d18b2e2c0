#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mctx/config.hpp"
#include "mctx/enzyme_tx.hpp"
#include "mctx/timeseries.hpp"
#include "mctx/waveform.hpp"

/// Experiment harness shared by the command-line tool and the tests:
/// named scenarios, single runs, model comparisons and parameter sweeps.
namespace mctx {

enum class ModelKind { Ideal, Practical, PbsIdeal, PbsEnzyme };

std::string to_string(ModelKind m);
/// Accepts "ideal", "practical", "pbs-ideal", "pbs-enzyme".
ModelKind parse_model(std::string_view name);
inline bool is_pbs(ModelKind m) { return m == ModelKind::PbsIdeal || m == ModelKind::PbsEnzyme; }
inline bool is_enzyme(ModelKind m) {
  return m == ModelKind::Practical || m == ModelKind::PbsEnzyme;
}

struct ExperimentSpec {
  std::string scenario = "custom";
  ModelKind model = ModelKind::Ideal;
  SystemConfig sys;
  std::vector<double> switch_times;  // alternating open/close, first opens
  double t_dis = 0;                  // ramp length of every switch [s]
  double duration = 10;              // [s]
  std::size_t stride = 100;          // steps per output row
  double k_AB = 0.1;
  int N_MR = 2;
  EnzymeRates rates;
  std::uint64_t seed = 1;
  int n_runs = 100;
  unsigned threads = 0;  // particle ensembles; 0 = all cores
  bool receiver = true;  // add the N_RX_<X> column

  bool operator==(const ExperimentSpec&) const = default;
};

void validate(const ExperimentSpec& spec);
PermeabilityWaveform make_waveform(const ExperimentSpec& spec);

struct Scenario {
  std::string name;
  std::string description;
  ExperimentSpec spec;
};

/// Built-in scenarios, in listing order.
const std::vector<Scenario>& builtin_scenarios();
/// Looks up a scenario or alias; throws ConfigError for unknown names.
ExperimentSpec scenario_spec(std::string_view name);
/// Alias -> canonical name pairs.
const std::map<std::string, std::string, std::less<>>& scenario_aliases();

/// Applies `key = value` entries: SystemConfig fields plus scenario, model,
/// k_AB, N_MR, t_dis, switch_times (comma separated), duration, stride,
/// seed, n_runs, threads, receiver. A `scenario` key is applied first and
/// resets everything else. Throws ConfigError for unknown keys or bad values.
void apply_key_values(ExperimentSpec& spec, const KeyValues& kv);
/// Single-entry version of apply_key_values (scenario keys excluded).
void apply_setting(ExperimentSpec& spec, std::string_view key, std::string_view value);

std::vector<double> parse_list(std::string_view key, std::string_view text);

/// Signal-molecule column names for a model: {inside, released, received}.
struct SignalColumns {
  std::string inside;
  std::string released;
  std::string received;
  std::string harvested;
};
SignalColumns signal_columns(ModelKind m);

/// How separable consecutive releases are at the receiver. A pulse is a
/// maximal run of rows whose received rate exceeds `threshold` x peak rate.
struct Distinguishability {
  double threshold = 0.25;
  std::size_t pulses = 0;
  double min_gap = 0;  // shortest below-threshold gap between pulses [s]
  double peak_rate = 0;
};
Distinguishability distinguishability(std::span<const double> t, std::span<const double> counts,
                                      double threshold = 0.25);

/// Runs the experiment and returns the trajectory with a metadata block holding
/// the resolved configuration, derived constants and receiver settings.
TimeSeriesRecord run_experiment(const ExperimentSpec& spec);

// --- comparison -----------------------------------------------------------

struct ColumnMetrics {
  std::string name;
  double rel_rmse = 0;  // RMSE(a - b) / RMS(b)
  double max_abs = 0;
  bool pass = true;
};

struct ComparisonReport {
  std::vector<ColumnMetrics> columns;
  std::size_t samples = 0;
  bool resampled = false;
  bool pass = true;
};

struct CompareOptions {
  double max_rel_rmse = 0.05;
  std::optional<double> max_abs;
  /// Empty: every count column present in both (t, rho and *_std excluded).
  std::vector<std::string> columns;
};

/// Compares `a` against the reference `b`. When the time grids differ, `b`
/// is linearly interpolated onto the rows of `a` inside the common range.
/// Throws ConfigError when the schemas share no comparable column or a
/// requested column is missing.
ComparisonReport compare(const TimeSeriesRecord& a, const TimeSeriesRecord& b,
                         const CompareOptions& opt = {});

std::string format_report(const ComparisonReport& r);

// --- sweeps ---------------------------------------------------------------

struct SweepGrid {
  std::vector<double> k_AB;
  std::vector<double> N_MR;
  std::vector<double> t_dis;
  std::vector<std::vector<double>> switch_times;
  std::map<std::string, std::vector<double>, std::less<>> system;  // SystemConfig keys

  std::size_t size() const;
};

inline constexpr std::size_t kMaxSweepPoints = 10000;

/// Parses "k_AB=0.01,0.1,1". switch_times takes ';'-separated lists of
/// comma-separated times.
void add_grid_axis(SweepGrid& grid, std::string_view assignment);

/// Grid points in row-major order (first axis varies slowest).
std::vector<ExperimentSpec> expand_grid(const ExperimentSpec& base, const SweepGrid& grid);

struct SweepSummaryRow {
  std::size_t index = 0;
  std::string file;
  ExperimentSpec spec;
  double plateau = 0;              // signal molecules inside at the end
  double time_to_equilibrium = 0;  // after the last closing, within 1% of plateau
  double produced = 0;             // signal molecules inside + released at the end
  double released = 0;
  std::vector<double> per_opening;  // released during each opening cycle
};

/// Metrics of one trajectory, as reported in the sweep summary.
SweepSummaryRow summarize(const ExperimentSpec& spec, const TimeSeriesRecord& rec);

/// Time after `t_close` at which the column enters and stays within
/// `tol` x |final value|.
double settle_time(std::span<const double> t, std::span<const double> x, double t_close,
                   double tol = 0.01);

/// Released counts accumulated from each opening to the next (last one to
/// the end of the record).
std::vector<double> per_opening_release(const PermeabilityWaveform& w, std::span<const double> t,
                                        std::span<const double> released);

/// Runs every grid point, writes `<dir>/point_<i>.csv` for each plus
/// `<dir>/summary.csv`, and returns the summary rows. Rejects grids larger
/// than kMaxSweepPoints.
std::vector<SweepSummaryRow> sweep(const ExperimentSpec& base, const SweepGrid& grid,
                                   const std::string& dir, unsigned threads = 0);

}  // namespace mctx
