#include <cmath>
#include <cstring>
#include <sstream>

#include <gtest/gtest.h>

#include "mctx/config.hpp"
#include "mctx/waveform.hpp"
#include "support.hpp"

using namespace mctx;
using mctx::testing::for_all;
using mctx::testing::Gen;

// Reference values below were evaluated independently at 30 significant
// digits (mpmath) from the default parameter set.
TEST(DeriveConstants, ReferenceParameterSet) {
  const auto dc = derive_constants(SystemConfig{});
  EXPECT_NEAR(dc.V_in, 2.14466058485063e-21, 1e-12 * 2.14466058485063e-21);
  EXPECT_NEAR(dc.V_out, 4.18879020478639e-9, 1e-12 * 4.18879020478639e-9);
  EXPECT_NEAR(dc.C_out0_A, 3.96433767249822, 1e-11);
  EXPECT_NEAR(dc.N_max, 5120.0, 1e-8);
  EXPECT_NEAR(dc.rho_hat_max, 7.2e-10, 1e-22);
  EXPECT_NEAR(dc.A, 4 * kPi * 80e-9 * 80e-9, 1e-27);
}

TEST(DeriveConstants, CapacityNearFiveThousand) {
  const auto dc = derive_constants(SystemConfig{});
  EXPECT_LT(std::abs(dc.N_max - 5e3) / 5e3, 0.05);
}

TEST(DeriveConstants, PureFunction) {
  SystemConfig c;
  c.r_in = 123e-9;
  const auto a = derive_constants(c);
  const auto b = derive_constants(c);
  EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0);
}

TEST(DeriveConstants, ClosedFormRelationsHold) {
  for_all(200, 11, [](Gen& g) {
    const auto c = g.system();
    const auto dc = derive_constants(c);
    EXPECT_NEAR(dc.V_in / (4.0 / 3.0 * kPi * std::pow(c.r_in, 3)), 1.0, 1e-13);
    EXPECT_NEAR(dc.C_out0_A * dc.V_out * c.N_a / c.N_out_A, 1.0, 1e-13);
    EXPECT_NEAR(dc.N_max / (dc.C_out0_A * dc.V_in * c.N_a), 1.0, 1e-13);
    // velocity-unit permeability two ways: rho V / A and rho r / 3
    EXPECT_NEAR(dc.rho_hat_max / (c.rho_max * dc.V_in / dc.A), 1.0, 1e-13);
    EXPECT_NEAR(dc.rho_hat_max / (c.rho_max * c.r_in / 3.0), 1.0, 1e-13);
  });
}

TEST(Validate, RejectsBrokenInvariants) {
  auto bad = [](auto mutate) {
    SystemConfig c;
    mutate(c);
    return c;
  };
  EXPECT_NO_THROW(validate(SystemConfig{}));
  EXPECT_THROW(validate(bad([](SystemConfig& c) { c.r_out = 99 * c.r_in; })), ConfigError);
  EXPECT_NO_THROW(validate(bad([](SystemConfig& c) { c.r_out = 100 * c.r_in; })));
  EXPECT_THROW(validate(bad([](SystemConfig& c) { c.d = c.r_RX; })), ConfigError);
  EXPECT_THROW(validate(bad([](SystemConfig& c) { c.T = 0; })), ConfigError);
  EXPECT_THROW(validate(bad([](SystemConfig& c) { c.rho_max = -1e-3; })), ConfigError);
  EXPECT_THROW(validate(bad([](SystemConfig& c) { c.r_in = 0; })), ConfigError);
  EXPECT_THROW(validate(bad([](SystemConfig& c) { c.D = -1; })), ConfigError);
  EXPECT_THROW(validate(bad([](SystemConfig& c) { c.r_RX = std::nan(""); })), ConfigError);
  EXPECT_THROW(derive_constants(bad([](SystemConfig& c) { c.T = -1; })), ConfigError);
}

TEST(KeyValues, ParsesCommentsAndWhitespace) {
  std::istringstream in("# header\n  D = 1e-12   # trailing\n\nT=2e-4\nT = 3e-4\n");
  const auto kv = parse_key_values(in);
  ASSERT_EQ(kv.size(), 2u);
  EXPECT_EQ(kv.at("D"), "1e-12");
  EXPECT_EQ(kv.at("T"), "3e-4");  // last one wins
}

TEST(KeyValues, RejectsMalformedLines) {
  std::istringstream no_eq("D 1e-12\n");
  EXPECT_THROW(parse_key_values(no_eq), ConfigError);
  std::istringstream no_key(" = 3\n");
  EXPECT_THROW(parse_key_values(no_key), ConfigError);
  EXPECT_THROW(parse_double("D", "1e-12x"), ConfigError);
  EXPECT_THROW(parse_double("D", ""), ConfigError);
  EXPECT_THROW(read_key_value_file("/nonexistent/mctx.cfg"), ConfigError);
}

TEST(KeyValues, SystemFieldsRoundTrip) {
  SystemConfig c;
  for (const auto& key : system_config_keys()) {
    EXPECT_TRUE(set_system_field(c, key, "0.5")) << key;
    EXPECT_EQ(get_system_field(c, key), 0.5) << key;
  }
  EXPECT_FALSE(set_system_field(c, "N_a", "1"));
  EXPECT_FALSE(set_system_field(c, "bogus", "1"));
  EXPECT_THROW(get_system_field(c, "bogus"), ConfigError);
  EXPECT_EQ(system_config_keys().size(), 8u);
}

// --- waveform ----------------------------------------------------------------

constexpr double kRho = 2.7e-2;

TEST(Waveform, SingleOpening) {
  const std::vector<double> t{0, 5};
  const auto w = waveform_instantaneous(t, kRho);
  EXPECT_EQ(w.at(2.5), kRho);
  EXPECT_EQ(w.at(6), 0.0);
  EXPECT_EQ(w.at(0), kRho);
  EXPECT_EQ(w.at(5.0), 0.0);  // a switch takes effect at its own timestamp
  EXPECT_EQ(w.at(4.9999), kRho);
}

TEST(Waveform, StepTimesLandOnEvents) {
  const std::vector<double> t{0, 5};
  const auto w = waveform_instantaneous(t, kRho);
  // 50000 * 1e-4 is an ulp away from 5 in floating point.
  EXPECT_EQ(w.at(50000 * 1e-4), 0.0);
  EXPECT_EQ(w.at(49999 * 1e-4), kRho);
}

TEST(Waveform, ThreeOpenPhases) {
  const std::vector<double> t{0, 5, 10, 15, 20, 25};
  const auto w = waveform_instantaneous(t, kRho);
  int open = 0;
  bool was_open = false;
  for (int i = 0; i < 3000; ++i) {
    const bool now = w.at(i * 0.01) > 0;
    if (now && !was_open) ++open;
    was_open = now;
  }
  EXPECT_EQ(open, 3);
  EXPECT_NEAR(w.area(30), 15 * kRho, 1e-15);
}

TEST(Waveform, EmptyIsClosed) {
  const auto w = waveform_instantaneous({}, kRho);
  for (double t : {0.0, 1.0, 1e6}) EXPECT_EQ(w.at(t), 0.0);
  EXPECT_EQ(w.describe(), "closed");
}

TEST(Waveform, HoldsLastValue) {
  const std::vector<double> t{1};
  const auto w = waveform_instantaneous(t, kRho);
  EXPECT_EQ(w.at(0.5), 0.0);  // closed before the first event
  EXPECT_EQ(w.at(1e9), kRho);
}

TEST(Waveform, RampValues) {
  const std::vector<double> t{0, 55, 110, 165};
  const auto w = waveform_ramp(t, 45, kRho);
  EXPECT_NEAR(w.at(22.5), kRho / 2, 1e-15);
  EXPECT_NEAR(w.at(9), 0.2 * kRho, 1e-15);
  EXPECT_EQ(w.at(45), kRho);
  EXPECT_EQ(w.at(50), kRho);
  EXPECT_NEAR(w.at(77.5), kRho / 2, 1e-15);  // halfway down
  EXPECT_EQ(w.at(105), 0.0);
  // same open area as the instantaneous pattern
  EXPECT_NEAR(w.area(220), waveform_instantaneous(t, kRho).area(220), 1e-12);
}

TEST(Waveform, RejectsBadSchedules) {
  const std::vector<double> back{0, 5, 4};
  EXPECT_THROW(waveform_instantaneous(back, kRho), ConfigError);
  const std::vector<double> equal{0, 5, 5};
  EXPECT_THROW(waveform_instantaneous(equal, kRho), ConfigError);
  const std::vector<double> tight{0, 10};
  EXPECT_THROW(waveform_ramp(tight, 11, kRho), ConfigError);
  EXPECT_NO_THROW(waveform_ramp(tight, 10, kRho));
  EXPECT_THROW(waveform_ramp(tight, -1, kRho), ConfigError);
  EXPECT_THROW(PermeabilityWaveform({{0, 2 * kRho, 0}}, kRho), ConfigError);
  EXPECT_THROW(PermeabilityWaveform({{-1, kRho, 0}}, kRho), ConfigError);
}

TEST(Waveform, ZeroRampMatchesInstantaneous) {
  for_all(100, 21, [](Gen& g) {
    const auto times = g.switch_times(8, 1e-3, 10);
    const auto a = waveform_instantaneous(times, kRho);
    const auto b = waveform_ramp(times, 0, kRho);
    for (int i = 0; i < 500; ++i) {
      const double t = g.uniform(0, 100);
      ASSERT_EQ(a.at(t), b.at(t));
    }
    for (double t : times) ASSERT_EQ(a.at(t), b.at(t));
  });
}

TEST(Waveform, ValuesStayInRange) {
  for_all(100, 22, [](Gen& g) {
    const double rho = g.log_uniform(1e-4, 1);
    const auto w = g.waveform(rho, 100);
    for (int i = 0; i < 1000; ++i) {
      const double v = w.at(g.uniform(0, 150));
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, rho);
    }
  });
}

TEST(Waveform, RampsAreContinuous) {
  for_all(50, 23, [](Gen& g) {
    const double t_dis = g.uniform(0.5, 5);
    const auto times = g.switch_times(6, t_dis, 20);
    const auto w = waveform_ramp(times, t_dis, kRho);
    const double slope = kRho / t_dis;
    const double h = 1e-3;
    for (double t = 0; t < 150; t += 0.0137) {
      ASSERT_LE(std::abs(w.at(t + h) - w.at(t)), slope * h * (1 + 1e-9) + 1e-15) << "t=" << t;
    }
  });
}

TEST(Waveform, AreaMatchesNumericalIntegral) {
  for_all(40, 24, [](Gen& g) {
    const auto w = g.waveform(kRho, 50);
    const double t_end = g.uniform(1, 60);
    const int n = 200000;
    const double h = t_end / n;
    double sum = 0;
    for (int i = 0; i < n; ++i) sum += w.at((i + 0.5) * h) * h;  // midpoint rule
    // jumps cost at most one cell each
    const double tol = static_cast<double>(w.events().size() + 1) * kRho * h + 1e-9 * kRho;
    EXPECT_NEAR(w.area(t_end), sum, tol);
  });
}
