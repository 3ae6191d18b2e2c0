#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "mctx/experiment.hpp"
#include "support.hpp"

using namespace mctx;
namespace fs = std::filesystem;

namespace {

std::string to_csv(const TimeSeriesRecord& rec) {
  std::ostringstream out;
  write_csv(out, rec);
  return out.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("mctx-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter_++));
    fs::remove_all(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

ExperimentSpec short_spec(std::string_view scenario = "fig3") {
  auto s = scenario_spec(scenario);
  s.duration = 2;
  s.switch_times = {0, 1};
  s.stride = 100;
  return s;
}

}  // namespace

TEST(Csv, RoundTripIsByteIdentical) {
  const auto rec = run_experiment(short_spec());
  const auto text = to_csv(rec);
  std::istringstream in(text);
  const auto back = read_csv(in);
  EXPECT_EQ(to_csv(back), text);
  EXPECT_EQ(back.column_names(), rec.column_names());
  EXPECT_EQ(back.metadata(), rec.metadata());
}

TEST(Csv, RejectsMalformedInput) {
  std::istringstream ragged("t,a\n0,1\n1\n");
  EXPECT_THROW(read_csv(ragged), ConfigError);
  std::istringstream garbage("t,a\n0,x\n");
  EXPECT_THROW(read_csv(garbage), ConfigError);
  std::istringstream empty("");
  EXPECT_THROW(read_csv(empty), ConfigError);
  EXPECT_THROW(read_csv_file("/nonexistent/x.csv"), ConfigError);
}

TEST(Scenarios, TableAndAliases) {
  std::vector<std::string> names;
  for (const auto& s : builtin_scenarios()) names.push_back(s.name);
  const std::vector<std::string> expect{"fig3", "fig4", "fig5", "fig6", "fig7", "fig7-ramp"};
  EXPECT_EQ(names, expect);
  EXPECT_EQ(scenario_spec("fig4").switch_times, (std::vector<double>{0, 5, 10, 15, 20, 25}));
  EXPECT_EQ(scenario_spec("fig5").model, ModelKind::Practical);
  EXPECT_EQ(scenario_spec("fig7").stride, 1000u);
  for (const auto& [alias, target] : scenario_aliases()) {
    auto a = scenario_spec(alias);
    auto b = scenario_spec(target);
    a.scenario = b.scenario;
    EXPECT_EQ(a, b) << alias;
  }
  EXPECT_THROW(scenario_spec("fig9"), ConfigError);
  for (const auto& s : builtin_scenarios()) EXPECT_NO_THROW(validate(s.spec)) << s.name;
}

TEST(Scenarios, RampKeepsOpenArea) {
  const auto a = make_waveform(scenario_spec("fig7"));
  const auto b = make_waveform(scenario_spec("fig7-ramp"));
  EXPECT_NEAR(a.area(220), b.area(220), 1e-12);
  EXPECT_GT(a.area(220), 0);
}

TEST(Settings, AppliesAndRejects) {
  ExperimentSpec s;
  apply_key_values(s, {{"scenario", "fig5"}, {"N_MR", "8"}, {"D", "1e-12"},
                       {"switch_times", "0, 2.5"}});
  EXPECT_EQ(s.scenario, "fig5");
  EXPECT_EQ(s.N_MR, 8);
  EXPECT_EQ(s.sys.D, 1e-12);
  EXPECT_EQ(s.switch_times, (std::vector<double>{0, 2.5}));
  apply_setting(s, "model", "pbs-enzyme");
  EXPECT_EQ(s.model, ModelKind::PbsEnzyme);
  apply_setting(s, "receiver", "false");
  EXPECT_FALSE(s.receiver);

  EXPECT_THROW(apply_setting(s, "bogus", "1"), ConfigError);
  EXPECT_THROW(apply_setting(s, "N_MR", "2.5"), ConfigError);
  EXPECT_THROW(apply_setting(s, "model", "quantum"), ConfigError);
  EXPECT_THROW(apply_setting(s, "switch_times", "0,,1"), ConfigError);
  EXPECT_THROW(apply_setting(s, "stride", "-1"), ConfigError);
  EXPECT_THROW(apply_setting(s, "N_a", "1"), ConfigError);
  ExperimentSpec bad;
  bad.switch_times = {0, 5, 3};
  EXPECT_THROW(validate(bad), ConfigError);
}

TEST(Run, MetadataAndColumns) {
  const auto rec = run_experiment(short_spec());
  for (const char* key : {"scenario", "model", "switch_times", "k_AB", "C_out0_A", "N_max",
                          "receiver_model", "receiver_bin_width"}) {
    EXPECT_NE(rec.find_meta(key), nullptr) << key;
  }
  EXPECT_TRUE(rec.has_column("N_RX_B"));
  auto quiet = short_spec();
  quiet.receiver = false;
  EXPECT_FALSE(run_experiment(quiet).has_column("N_RX_B"));
  const auto enz = run_experiment(short_spec("fig5"));
  EXPECT_TRUE(enz.has_column("N_RX_S"));
  EXPECT_EQ(to_csv(run_experiment(short_spec())), to_csv(rec));
}

TEST(Compare, IdenticalPassesAndMismatchThrows) {
  const auto a = run_experiment(short_spec());
  const auto r = compare(a, a);
  EXPECT_TRUE(r.pass);
  for (const auto& c : r.columns) EXPECT_EQ(c.rel_rmse, 0.0) << c.name;
  EXPECT_FALSE(r.resampled);
  const auto enz = run_experiment(short_spec("fig5"));
  EXPECT_THROW(compare(a, enz), ConfigError);
  CompareOptions opt;
  opt.columns = {"N_in_Z"};
  EXPECT_THROW(compare(a, a, opt), ConfigError);
}

TEST(Compare, ResamplesOntoTheTestGrid) {
  auto coarse = short_spec();
  coarse.stride = 500;
  auto fine = short_spec();
  fine.stride = 50;
  const auto r = compare(run_experiment(coarse), run_experiment(fine));
  EXPECT_TRUE(r.resampled);
  EXPECT_TRUE(r.pass);
  // coarse rows coincide with fine rows, so the model columns agree to
  // print precision; the receiver column differs by its coarser binning
  for (const auto& c : r.columns) {
    EXPECT_LT(c.rel_rmse, c.name == "N_RX_B" ? 0.05 : 1e-10) << c.name;
  }
}

TEST(Compare, DetectsRealDifferences) {
  auto slow = short_spec();
  slow.k_AB = 0.01;
  const auto r = compare(run_experiment(slow), run_experiment(short_spec()));
  EXPECT_FALSE(r.pass);
  CompareOptions abs_only;
  abs_only.max_rel_rmse = 1e9;
  abs_only.max_abs = 1e-9;
  EXPECT_FALSE(compare(run_experiment(slow), run_experiment(short_spec()), abs_only).pass);
  EXPECT_NE(format_report(r).find("FAIL"), std::string::npos);
}

// A single stochastic trajectory should not pass as the ensemble mean.
TEST(Compare, SingleParticleRunFailsAgainstDeterministic) {
  auto pbs = scenario_spec("fig3");
  pbs.model = ModelKind::PbsIdeal;
  pbs.n_runs = 1;
  pbs.k_AB = 1;
  pbs.duration = 3;
  pbs.switch_times = {0, 2};
  auto det = pbs;
  det.model = ModelKind::Ideal;
  CompareOptions opt;
  opt.columns = {"N_in_B"};
  opt.max_rel_rmse = 0.01;
  EXPECT_FALSE(compare(run_experiment(pbs), run_experiment(det), opt).pass);
}

TEST(Distinguishability, CountsSeparatedPulses) {
  std::vector<double> t, c;
  double acc = 0;
  for (int i = 0; i <= 300; ++i) {
    t.push_back(i * 0.1);
    const int phase = (i / 50) % 2;  // 5 s on, 5 s off
    if (phase == 0 && i < 300) acc += 2.0;
    c.push_back(acc);
  }
  const auto d = distinguishability(t, c);
  EXPECT_EQ(d.pulses, 3u);
  EXPECT_NEAR(d.min_gap, 5.0, 0.21);
  EXPECT_NEAR(d.peak_rate, 20.0, 1e-9);
  const std::vector<double> flat(t.size(), 0.0);
  EXPECT_EQ(distinguishability(t, flat).pulses, 0u);
}

TEST(Sweep, SettleAndPerOpeningHelpers) {
  const std::vector<double> t{0, 1, 2, 3, 4, 5};
  const std::vector<double> x{0, 5, 9, 9.95, 10, 10};
  EXPECT_DOUBLE_EQ(settle_time(t, x, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(settle_time(t, x, 4.0), 0.0);
  const std::vector<double> times{0, 1, 2, 3};
  const auto w = waveform_instantaneous(times, 1.0);
  const std::vector<double> rel{0, 4, 4, 7, 7, 7};
  EXPECT_EQ(per_opening_release(w, t, rel), (std::vector<double>{4, 3}));
}

TEST(Sweep, GridParsingAndGuard) {
  SweepGrid g;
  add_grid_axis(g, "k_AB=0.01,0.1,1");
  add_grid_axis(g, "switch_times=0,5;0,2,4,6");
  add_grid_axis(g, "D=1e-12,2e-12");
  EXPECT_EQ(g.size(), 12u);
  const auto pts = expand_grid(ExperimentSpec{}, g);
  ASSERT_EQ(pts.size(), 12u);
  EXPECT_EQ(pts[0].k_AB, 0.01);
  EXPECT_EQ(pts[11].k_AB, 1.0);
  EXPECT_EQ(pts[1].sys.D, 2e-12);
  EXPECT_EQ(pts[2].switch_times, (std::vector<double>{0, 2, 4, 6}));
  EXPECT_THROW(add_grid_axis(g, "N_MR=1.5"), ConfigError);
  EXPECT_THROW(add_grid_axis(g, "bogus=1"), ConfigError);
  EXPECT_THROW(add_grid_axis(g, "k_AB"), ConfigError);

  SweepGrid big;
  std::string values = "k_AB=";
  for (int i = 0; i < 101; ++i) values += (i ? "," : "") + std::to_string(i);
  add_grid_axis(big, values);
  add_grid_axis(big, values.replace(0, 4, "t_dis"));
  EXPECT_EQ(big.size(), 10201u);
  EXPECT_THROW(expand_grid(ExperimentSpec{}, big), ConfigError);
}

TEST(Sweep, SingletonMatchesRun) {
  TempDir dir;
  const auto spec = short_spec();
  SweepGrid g;
  add_grid_axis(g, "k_AB=0.1");
  const auto rows = sweep(spec, g, dir.path().string(), 1);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(slurp(dir.path() / rows[0].file), to_csv(run_experiment(spec)));
  EXPECT_TRUE(fs::exists(dir.path() / "summary.csv"));
}

TEST(Sweep, RateAndEnzymeTrends) {
  TempDir dir;
  auto spec = scenario_spec("fig3");
  spec.receiver = false;
  SweepGrid g;
  add_grid_axis(g, "k_AB=0.01,0.1,1");
  const auto rows = sweep(spec, g, (dir.path() / "k").string(), 1);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_LT(rows[0].produced, rows[1].produced);
  EXPECT_LT(rows[1].produced, rows[2].produced);
  EXPECT_EQ(rows[0].per_opening.size(), 1u);

  auto enz = scenario_spec("fig5");
  enz.receiver = false;
  SweepGrid n;
  add_grid_axis(n, "N_MR=2,4,8");
  const auto er = sweep(enz, n, (dir.path() / "n").string(), 1);
  ASSERT_EQ(er.size(), 3u);
  EXPECT_LT(std::abs(er[0].plateau - er[2].plateau) / er[2].plateau, 0.01);
  EXPECT_GT(er[0].time_to_equilibrium, er[1].time_to_equilibrium);
  EXPECT_GT(er[1].time_to_equilibrium, er[2].time_to_equilibrium);

  const auto summary = slurp(dir.path() / "n" / "summary.csv");
  EXPECT_EQ(summary.substr(0, summary.find('\n')),
            "index,file,model,k_AB,N_MR,t_dis,switch_times,plateau,time_to_equilibrium,"
            "produced,released,release_1");
  EXPECT_EQ(std::count(summary.begin(), summary.end(), '\n'), 4);
}

TEST(Sweep, ParallelMatchesSerial) {
  TempDir dir;
  const auto spec = short_spec("fig5");
  SweepGrid g;
  add_grid_axis(g, "N_MR=1,2,3,4");
  sweep(spec, g, (dir.path() / "a").string(), 1);
  sweep(spec, g, (dir.path() / "b").string(), 2);
  for (const auto& entry : fs::directory_iterator(dir.path() / "a")) {
    EXPECT_EQ(slurp(entry.path()), slurp(dir.path() / "b" / entry.path().filename()))
        << entry.path().filename();
  }
}
