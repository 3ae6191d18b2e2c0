#pragma once

// Hand-rolled generators for property tests. Each property runs a fixed
// number of cases from a fixed seed; failures print the case index.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "mctx/config.hpp"
#include "mctx/rng.hpp"
#include "mctx/waveform.hpp"

namespace mctx::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  bool coin() { return integer(0, 1) == 1; }

  /// Valid configuration around the reference scales, with T small enough
  /// that the membrane transmission probability stays below one.
  SystemConfig system() {
    SystemConfig c;
    c.D = log_uniform(1e-13, 1e-10);
    c.r_in = log_uniform(20e-9, 500e-9);
    c.r_out = c.r_in * log_uniform(100.0, 1e5);
    c.r_RX = log_uniform(1e-7, 5e-6);
    c.d = c.r_RX * uniform(1.05, 10.0);
    c.N_out_A = log_uniform(1e8, 1e18);
    c.rho_max = log_uniform(1e-4, 1.0);
    c.T = log_uniform(1e-6, 1e-3);
    return c;
  }

  /// Strictly increasing switch times starting at or after 0.
  std::vector<double> switch_times(int max_count, double min_gap, double max_gap) {
    std::vector<double> t;
    const int n = integer(0, max_count);
    double now = coin() ? 0.0 : uniform(0.0, max_gap);
    for (int i = 0; i < n; ++i) {
      t.push_back(now);
      now += uniform(min_gap, max_gap);
    }
    return t;
  }

  PermeabilityWaveform waveform(double rho_max, double horizon) {
    const double t_dis = coin() ? 0.0 : uniform(0.0, horizon / 10);
    auto times = switch_times(6, std::max(t_dis, horizon / 20), horizon / 4);
    return waveform_ramp(times, t_dis, rho_max);
  }

  Xoshiro256pp& engine() { return rng_; }

 private:
  Xoshiro256pp rng_;
};

inline void for_all(int cases, std::uint64_t seed, const std::function<void(Gen&)>& body) {
  Gen gen(seed);
  for (int i = 0; i < cases; ++i) {
    SCOPED_TRACE(::testing::Message() << "property case " << i << " (seed " << seed << ")");
    body(gen);
    if (::testing::Test::HasFatalFailure()) return;
  }
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace mctx::testing
