#include "mctx/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

#include <fmt/format.h>

#include "mctx/ideal_tx.hpp"
#include "mctx/pbs.hpp"
#include "mctx/receiver.hpp"

namespace mctx {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename Int>
Int parse_integer(std::string_view key, std::string_view text) {
  text = trim(text);
  Int value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(fmt::format("{}: expected an integer, got '{}'", key, text));
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  throw ConfigError(fmt::format("{}: expected true/false, got '{}'", key, text));
}

int as_count(std::string_view key, double v) {
  if (!(v >= 0) || v != std::floor(v) || v > std::numeric_limits<int>::max()) {
    throw ConfigError(fmt::format("{} must be a non-negative integer", key));
  }
  return static_cast<int>(v);
}

std::string join(std::span<const double> v, char sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += format_number(v[i]);
  }
  return out;
}

// Linear interpolation of (t, x) at `at`; clamps outside the range.
double interpolate(std::span<const double> t, std::span<const double> x, double at) {
  if (t.empty()) return 0.0;
  if (at <= t.front()) return x.front();
  if (at >= t.back()) return x.back();
  const auto it = std::upper_bound(t.begin(), t.end(), at);
  const auto i = static_cast<std::size_t>(it - t.begin());
  const double f = (at - t[i - 1]) / (t[i] - t[i - 1]);
  return x[i - 1] + (x[i] - x[i - 1]) * f;
}

// Time at which the membrane is fully closed for the last time, or 0 when
// it never closes.
double last_close_time(const PermeabilityWaveform& w) {
  double t = 0;
  for (const auto& e : w.events()) {
    if (e.target == 0) t = e.time + e.ramp;
  }
  return t;
}

ExperimentSpec base_spec(std::string name, ModelKind model, std::vector<double> times,
                         double duration) {
  ExperimentSpec s;
  s.scenario = std::move(name);
  s.model = model;
  s.switch_times = std::move(times);
  s.duration = duration;
  return s;
}

std::vector<Scenario> make_scenarios() {
  const std::vector<double> single{0, 5};
  const std::vector<double> triple{0, 5, 10, 15, 20, 25};
  const std::vector<double> slow{0, 55, 110, 165};
  std::vector<Scenario> out;
  out.push_back({"fig3", "first-order TX, one 5 s opening, 10 s",
                 base_spec("fig3", ModelKind::Ideal, single, 10)});
  out.push_back({"fig4", "first-order TX, three 5 s openings with receiver, 30 s",
                 base_spec("fig4", ModelKind::Ideal, triple, 30)});
  out.push_back({"fig5", "enzyme TX, one 5 s opening, 15 s",
                 base_spec("fig5", ModelKind::Practical, single, 15)});
  out.push_back({"fig6", "enzyme TX, three 5 s openings with receiver, 30 s",
                 base_spec("fig6", ModelKind::Practical, triple, 30)});
  auto fig7 = base_spec("fig7", ModelKind::Practical, slow, 220);
  fig7.stride = 1000;
  out.push_back({"fig7", "enzyme TX, two 55 s openings, instantaneous switching, 220 s", fig7});
  auto ramp = fig7;
  ramp.scenario = "fig7-ramp";
  ramp.t_dis = 45;
  out.push_back({"fig7-ramp", "as fig7 with every switch spread over a 45 s ramp", ramp});
  return out;
}

void put_meta(TimeSeriesRecord& rec, std::string key, double v) {
  rec.set_meta(std::move(key), format_number(v));
}

}  // namespace

std::string to_string(ModelKind m) {
  switch (m) {
    case ModelKind::Ideal: return "ideal";
    case ModelKind::Practical: return "practical";
    case ModelKind::PbsIdeal: return "pbs-ideal";
    case ModelKind::PbsEnzyme: return "pbs-enzyme";
  }
  return "?";
}

ModelKind parse_model(std::string_view name) {
  name = trim(name);
  for (auto m : {ModelKind::Ideal, ModelKind::Practical, ModelKind::PbsIdeal, ModelKind::PbsEnzyme}) {
    if (name == to_string(m)) return m;
  }
  throw ConfigError(fmt::format(
      "unknown model '{}' (expected ideal, practical, pbs-ideal or pbs-enzyme)", name));
}

void validate(const ExperimentSpec& spec) {
  validate(spec.sys);
  validate(spec.rates);
  if (!(spec.duration > 0) || !std::isfinite(spec.duration)) {
    throw ConfigError("duration must be > 0");
  }
  if (spec.stride == 0) throw ConfigError("stride must be >= 1");
  if (!(spec.k_AB >= 0)) throw ConfigError("k_AB must be >= 0");
  if (spec.N_MR < 0) throw ConfigError("N_MR must be >= 0");
  if (spec.n_runs < 1) throw ConfigError("n_runs must be >= 1");
  if (!(spec.t_dis >= 0)) throw ConfigError("t_dis must be >= 0");
  make_waveform(spec);
}

PermeabilityWaveform make_waveform(const ExperimentSpec& spec) {
  return waveform_ramp(spec.switch_times, spec.t_dis, spec.sys.rho_max);
}

const std::vector<Scenario>& builtin_scenarios() {
  static const std::vector<Scenario> scenarios = make_scenarios();
  return scenarios;
}

const std::map<std::string, std::string, std::less<>>& scenario_aliases() {
  static const std::map<std::string, std::string, std::less<>> aliases{{"fig6-ramp", "fig7-ramp"}};
  return aliases;
}

ExperimentSpec scenario_spec(std::string_view name) {
  name = trim(name);
  if (const auto it = scenario_aliases().find(name); it != scenario_aliases().end()) {
    name = it->second;
  }
  for (const auto& s : builtin_scenarios()) {
    if (s.name == name) return s.spec;
  }
  throw ConfigError(fmt::format("unknown scenario '{}'", name));
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  text = trim(text);
  if (text.empty()) return out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_double(key, trim(text.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

void apply_setting(ExperimentSpec& spec, std::string_view key, std::string_view value) {
  if (set_system_field(spec.sys, key, value)) return;
  if (key == "model") {
    spec.model = parse_model(value);
  } else if (key == "k_AB") {
    spec.k_AB = parse_double(key, value);
  } else if (key == "N_MR") {
    spec.N_MR = as_count(key, parse_double(key, value));
  } else if (key == "t_dis") {
    spec.t_dis = parse_double(key, value);
  } else if (key == "switch_times") {
    spec.switch_times = parse_list(key, value);
  } else if (key == "duration") {
    spec.duration = parse_double(key, value);
  } else if (key == "stride") {
    spec.stride = parse_integer<std::size_t>(key, value);
  } else if (key == "seed") {
    spec.seed = parse_integer<std::uint64_t>(key, value);
  } else if (key == "n_runs") {
    spec.n_runs = parse_integer<int>(key, value);
  } else if (key == "threads") {
    spec.threads = parse_integer<unsigned>(key, value);
  } else if (key == "receiver") {
    spec.receiver = parse_bool(key, value);
  } else if (key == "k1") {
    spec.rates.k1 = parse_double(key, value);
  } else if (key == "k_m1") {
    spec.rates.k_m1 = parse_double(key, value);
  } else if (key == "k2") {
    spec.rates.k2 = parse_double(key, value);
  } else if (key == "k_m2") {
    spec.rates.k_m2 = parse_double(key, value);
  } else if (key == "k3") {
    spec.rates.k3 = parse_double(key, value);
  } else if (key == "k_m3") {
    spec.rates.k_m3 = parse_double(key, value);
  } else {
    throw ConfigError(fmt::format("unknown key '{}'", key));
  }
}

void apply_key_values(ExperimentSpec& spec, const KeyValues& kv) {
  if (const auto it = kv.find("scenario"); it != kv.end()) spec = scenario_spec(it->second);
  for (const auto& [key, value] : kv) {
    if (key != "scenario") apply_setting(spec, key, value);
  }
}

SignalColumns signal_columns(ModelKind m) {
  if (is_enzyme(m)) return {"N_in_S", "N_out_S", "N_RX_S", "N_in_R"};
  return {"N_in_B", "N_out_B", "N_RX_B", "N_in_A"};
}

Distinguishability distinguishability(std::span<const double> t, std::span<const double> counts,
                                      double threshold) {
  Distinguishability out;
  out.threshold = threshold;
  const std::size_t n = std::min(t.size(), counts.size());
  if (n < 2) return out;
  std::vector<double> rate(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    rate[i - 1] = (counts[i] - counts[i - 1]) / (t[i] - t[i - 1]);
    out.peak_rate = std::max(out.peak_rate, rate[i - 1]);
  }
  if (!(out.peak_rate > 0)) return out;
  const double level = threshold * out.peak_rate;
  bool above = false;
  double last_end = 0;
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rate.size(); ++i) {
    const bool now = rate[i] > level;
    if (now && !above) {
      if (out.pulses > 0) min_gap = std::min(min_gap, t[i] - last_end);
      ++out.pulses;
    }
    if (!now && above) last_end = t[i];
    above = now;
  }
  out.min_gap = out.pulses > 1 ? min_gap : 0.0;
  return out;
}

TimeSeriesRecord run_experiment(const ExperimentSpec& spec) {
  validate(spec);
  const auto w = make_waveform(spec);
  const auto dc = derive_constants(spec.sys);
  const auto cols = signal_columns(spec.model);

  TimeSeriesRecord data;
  TimeSeriesRecord out;
  out.set_meta("scenario", spec.scenario);
  out.set_meta("model", to_string(spec.model));
  out.set_meta("switch_times", join(spec.switch_times, ','));
  put_meta(out, "t_dis", spec.t_dis);
  out.set_meta("waveform", w.describe());
  put_meta(out, "duration", spec.duration);
  out.set_meta("stride", std::to_string(spec.stride));
  for (const auto& key : system_config_keys()) put_meta(out, key, get_system_field(spec.sys, key));
  put_meta(out, "N_a", spec.sys.N_a);
  if (is_enzyme(spec.model)) {
    out.set_meta("N_MR", std::to_string(spec.N_MR));
    put_meta(out, "k1", spec.rates.k1);
    put_meta(out, "k_m1", spec.rates.k_m1);
    put_meta(out, "k2", spec.rates.k2);
    put_meta(out, "k_m2", spec.rates.k_m2);
    put_meta(out, "k3", spec.rates.k3);
    put_meta(out, "k_m3", spec.rates.k_m3);
  } else {
    put_meta(out, "k_AB", spec.k_AB);
  }
  put_meta(out, "V_in", dc.V_in);
  put_meta(out, "V_out", dc.V_out);
  put_meta(out, "C_out0_A", dc.C_out0_A);
  put_meta(out, "N_max", dc.N_max);
  put_meta(out, "rho_hat_max", dc.rho_hat_max);

  switch (spec.model) {
    case ModelKind::Ideal:
      data = simulate_ideal(make_ideal_params(spec.sys, spec.k_AB), w, spec.duration, spec.stride);
      break;
    case ModelKind::Practical: {
      auto p = make_practical_params(spec.sys, spec.rates);
      ReactionDiagnostics diag;
      data = simulate_practical(p, spec.N_MR, w, spec.duration, spec.stride, &diag);
      out.set_meta("reaction_clamps", std::to_string(diag.clamps));
      break;
    }
    case ModelKind::PbsIdeal:
    case ModelKind::PbsEnzyme: {
      pbs::PbsConfig c;
      c.sys = spec.sys;
      c.seed = spec.seed;
      c.n_runs = spec.n_runs;
      c.mode = spec.model == ModelKind::PbsEnzyme ? pbs::Mode::Enzyme : pbs::Mode::IdealFirstOrder;
      c.k_AB = spec.k_AB;
      c.rates = spec.rates;
      c.N_MR = spec.N_MR;
      c.stride = spec.stride;
      c.track_receiver = spec.receiver;
      c.threads = spec.threads;
      auto result = pbs::run_pbs(c, w, spec.duration);
      out.set_meta("seed", std::to_string(spec.seed));
      out.set_meta("n_runs", std::to_string(spec.n_runs));
      pbs::RunLedger sum;
      for (const auto& l : result.ledgers) {
        sum.influx += l.influx;
        sum.escaped_harvest += l.escaped_harvest;
        sum.released += l.released;
        sum.absorbed += l.absorbed;
        sum.retired += l.retired;
      }
      out.set_meta("pbs_total_influx", std::to_string(sum.influx));
      out.set_meta("pbs_total_escaped_harvest", std::to_string(sum.escaped_harvest));
      out.set_meta("pbs_total_released", std::to_string(sum.released));
      out.set_meta("pbs_total_absorbed", std::to_string(sum.absorbed));
      out.set_meta("pbs_total_retired", std::to_string(sum.retired));
      if (spec.receiver) out.set_meta("receiver_model", "particle-absorption");
      data = std::move(result.series);
      break;
    }
  }

  for (const auto& name : data.column_names()) {
    if (!spec.receiver && name.rfind(cols.received, 0) == 0) continue;
    const auto c = data.column(name);
    out.add_column(name, std::vector<double>(c.begin(), c.end()));
  }
  if (spec.receiver && !is_pbs(spec.model)) {
    append_received_column(out, cols.released, cols.received, receiver_from(spec.sys));
  }
  if (spec.receiver) {
    const auto dist = distinguishability(out.column("t"), out.column(cols.received));
    put_meta(out, "distinguishability_threshold", dist.threshold);
    out.set_meta("distinguishability_pulses", std::to_string(dist.pulses));
    put_meta(out, "distinguishability_min_gap", dist.min_gap);
    put_meta(out, "received_peak_rate", dist.peak_rate);
  }
  return out;
}

// --- comparison -------------------------------------------------------------

ComparisonReport compare(const TimeSeriesRecord& a, const TimeSeriesRecord& b,
                         const CompareOptions& opt) {
  if (!a.has_column("t") || !b.has_column("t")) throw ConfigError("both series need a 't' column");
  std::vector<std::string> names = opt.columns;
  if (names.empty()) {
    for (const auto& n : a.column_names()) {
      if (n == "t" || n == "rho" || n.ends_with("_std")) continue;
      if (b.has_column(n)) names.push_back(n);
    }
    if (names.empty()) throw ConfigError("series share no comparable column");
  }
  for (const auto& n : names) {
    if (!a.has_column(n) || !b.has_column(n)) {
      throw ConfigError(fmt::format("column '{}' missing from one of the series", n));
    }
  }

  const auto ta = a.column("t");
  const auto tb = b.column("t");
  bool same_grid = ta.size() == tb.size();
  for (std::size_t i = 0; same_grid && i < ta.size(); ++i) {
    same_grid = std::abs(ta[i] - tb[i]) <= 1e-9 * std::max(1.0, std::abs(ta[i]));
  }
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (same_grid || (!tb.empty() && ta[i] >= tb.front() && ta[i] <= tb.back())) rows.push_back(i);
  }
  if (rows.empty()) throw ConfigError("series have no overlapping time range");

  ComparisonReport report;
  report.samples = rows.size();
  report.resampled = !same_grid;
  for (const auto& n : names) {
    const auto xa = a.column(n);
    const auto xb = b.column(n);
    double sq = 0, ref = 0, max_abs = 0;
    for (auto i : rows) {
      const double vb = same_grid ? xb[i] : interpolate(tb, xb, ta[i]);
      const double diff = xa[i] - vb;
      sq += diff * diff;
      ref += vb * vb;
      max_abs = std::max(max_abs, std::abs(diff));
    }
    ColumnMetrics m;
    m.name = n;
    m.max_abs = max_abs;
    m.rel_rmse = ref > 0 ? std::sqrt(sq / ref)
                         : (sq > 0 ? std::numeric_limits<double>::infinity() : 0.0);
    m.pass = m.rel_rmse <= opt.max_rel_rmse && (!opt.max_abs || max_abs <= *opt.max_abs);
    report.pass = report.pass && m.pass;
    report.columns.push_back(std::move(m));
  }
  return report;
}

std::string format_report(const ComparisonReport& r) {
  std::string out = fmt::format("{:<12} {:>14} {:>14}  result\n", "column", "rel_rmse", "max_abs");
  for (const auto& c : r.columns) {
    out += fmt::format("{:<12} {:>14.6g} {:>14.6g}  {}\n", c.name, c.rel_rmse, c.max_abs,
                       c.pass ? "pass" : "FAIL");
  }
  out += fmt::format("samples: {}{}\n", r.samples, r.resampled ? " (resampled)" : "");
  out += fmt::format("overall: {}\n", r.pass ? "pass" : "FAIL");
  return out;
}

// --- sweeps -----------------------------------------------------------------

std::size_t SweepGrid::size() const {
  std::size_t n = 1;
  auto mul = [&](std::size_t k) {
    if (k == 0) return;
    if (n > std::numeric_limits<std::size_t>::max() / k) {
      n = std::numeric_limits<std::size_t>::max();
    } else {
      n *= k;
    }
  };
  mul(k_AB.size());
  mul(N_MR.size());
  mul(t_dis.size());
  mul(switch_times.size());
  for (const auto& [key, values] : system) mul(values.size());
  return n;
}

void add_grid_axis(SweepGrid& grid, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError(fmt::format("grid axis '{}' must look like key=v1,v2,...", assignment));
  }
  const auto key = trim(assignment.substr(0, eq));
  const auto values = assignment.substr(eq + 1);
  if (key == "switch_times") {
    std::string_view rest = values;
    while (true) {
      const auto semi = rest.find(';');
      grid.switch_times.push_back(parse_list(key, rest.substr(0, semi)));
      if (semi == std::string_view::npos) break;
      rest.remove_prefix(semi + 1);
    }
    return;
  }
  auto list = parse_list(key, values);
  if (list.empty()) throw ConfigError(fmt::format("grid axis '{}' has no values", key));
  if (key == "k_AB") {
    grid.k_AB = std::move(list);
  } else if (key == "N_MR") {
    for (double v : list) as_count(key, v);
    grid.N_MR = std::move(list);
  } else if (key == "t_dis") {
    grid.t_dis = std::move(list);
  } else {
    const auto& keys = system_config_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError(fmt::format("cannot sweep over '{}'", key));
    }
    grid.system[std::string(key)] = std::move(list);
  }
}

std::vector<ExperimentSpec> expand_grid(const ExperimentSpec& base, const SweepGrid& grid) {
  const auto total = grid.size();
  if (total > kMaxSweepPoints) {
    throw ConfigError(fmt::format("sweep grid has {} points; the limit is {}", total,
                                  kMaxSweepPoints));
  }
  std::vector<ExperimentSpec> points{base};
  auto expand = [&](std::size_t count, auto&& apply) {
    if (count == 0) return;
    std::vector<ExperimentSpec> next;
    next.reserve(points.size() * count);
    for (const auto& p : points) {
      for (std::size_t i = 0; i < count; ++i) {
        next.push_back(p);
        apply(next.back(), i);
      }
    }
    points = std::move(next);
  };
  expand(grid.k_AB.size(), [&](ExperimentSpec& s, std::size_t i) { s.k_AB = grid.k_AB[i]; });
  expand(grid.N_MR.size(),
         [&](ExperimentSpec& s, std::size_t i) { s.N_MR = as_count("N_MR", grid.N_MR[i]); });
  expand(grid.t_dis.size(), [&](ExperimentSpec& s, std::size_t i) { s.t_dis = grid.t_dis[i]; });
  expand(grid.switch_times.size(),
         [&](ExperimentSpec& s, std::size_t i) { s.switch_times = grid.switch_times[i]; });
  for (const auto& [key, values] : grid.system) {
    expand(values.size(), [&](ExperimentSpec& s, std::size_t i) {
      set_system_field(s.sys, key, format_number(values[i]));
    });
  }
  return points;
}

double settle_time(std::span<const double> t, std::span<const double> x, double t_close,
                   double tol) {
  const std::size_t n = std::min(t.size(), x.size());
  if (n == 0) return 0.0;
  const double target = x[n - 1];
  const double band = tol * std::abs(target);
  std::size_t first_ok = 0;
  for (std::size_t i = n; i-- > 0;) {
    if (std::abs(x[i] - target) > band) {
      first_ok = i + 1;
      break;
    }
  }
  if (first_ok >= n) first_ok = n - 1;
  return std::max(0.0, t[first_ok] - t_close);
}

std::vector<double> per_opening_release(const PermeabilityWaveform& w, std::span<const double> t,
                                        std::span<const double> released) {
  std::vector<double> opens;
  for (const auto& e : w.events()) {
    if (e.target > 0) opens.push_back(e.time);
  }
  std::vector<double> out;
  if (t.empty()) return out;
  for (std::size_t i = 0; i < opens.size(); ++i) {
    const double from = opens[i];
    const double to = i + 1 < opens.size() ? opens[i + 1] : t.back();
    if (from > t.back()) break;
    out.push_back(interpolate(t, released, to) - interpolate(t, released, from));
  }
  return out;
}

SweepSummaryRow summarize(const ExperimentSpec& spec, const TimeSeriesRecord& rec) {
  const auto cols = signal_columns(spec.model);
  const auto t = rec.column("t");
  const auto inside = rec.column(cols.inside);
  const auto released = rec.column(cols.released);
  const auto w = make_waveform(spec);
  SweepSummaryRow row;
  row.spec = spec;
  row.plateau = inside.back();
  row.released = released.back();
  row.produced = inside.back() + released.back();
  row.time_to_equilibrium = settle_time(t, inside, last_close_time(w));
  row.per_opening = per_opening_release(w, t, released);
  return row;
}

std::vector<SweepSummaryRow> sweep(const ExperimentSpec& base, const SweepGrid& grid,
                                   const std::string& dir, unsigned threads) {
  const auto points = expand_grid(base, grid);
  for (const auto& p : points) validate(p);
  std::filesystem::create_directories(dir);
  const int width = std::max<int>(4, static_cast<int>(std::to_string(points.size()).size()));

  std::vector<SweepSummaryRow> rows(points.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      const auto rec = run_experiment(points[i]);
      const auto file = fmt::format("point_{:0{}}.csv", i, width);
      write_csv_file((std::filesystem::path(dir) / file).string(), rec);
      rows[i] = summarize(points[i], rec);
      rows[i].index = i;
      rows[i].file = file;
    }
  };
  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, points.size()));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
  }

  std::size_t openings = 0;
  for (const auto& r : rows) openings = std::max(openings, r.per_opening.size());
  std::ofstream out(std::filesystem::path(dir) / "summary.csv");
  if (!out) throw ConfigError(fmt::format("cannot write summary in '{}'", dir));
  out << "index,file,model,k_AB,N_MR,t_dis,switch_times";
  for (const auto& [key, values] : grid.system) out << ',' << key;
  out << ",plateau,time_to_equilibrium,produced,released";
  for (std::size_t i = 0; i < openings; ++i) out << ",release_" << i + 1;
  out << '\n';
  for (const auto& r : rows) {
    out << r.index << ',' << r.file << ',' << to_string(r.spec.model) << ','
        << format_number(r.spec.k_AB) << ',' << r.spec.N_MR << ',' << format_number(r.spec.t_dis)
        << ',' << join(r.spec.switch_times, ';');
    for (const auto& [key, values] : grid.system) {
      out << ',' << format_number(get_system_field(r.spec.sys, key));
    }
    out << ',' << format_number(r.plateau) << ',' << format_number(r.time_to_equilibrium) << ','
        << format_number(r.produced) << ',' << format_number(r.released);
    for (std::size_t i = 0; i < openings; ++i) {
      out << ',';
      if (i < r.per_opening.size()) out << format_number(r.per_opening[i]);
    }
    out << '\n';
  }
  if (!out) throw ConfigError(fmt::format("failed writing summary in '{}'", dir));
  return rows;
}

}  // namespace mctx
