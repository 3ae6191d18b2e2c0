#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "mctx/receiver.hpp"
#include "support.hpp"

using namespace mctx;
using mctx::testing::for_all;
using mctx::testing::Gen;
using mctx::testing::rel_diff;

namespace {

const ReceiverConfig kRef{};

// First-passage density of the same absorbing sphere; integrating it must
// reproduce the closed-form cdf.
double hitting_density(double t, const ReceiverConfig& rc) {
  if (t <= 0) return 0.0;
  const double gap = rc.d - rc.r_RX;
  return rc.r_RX / rc.d * gap / std::sqrt(4 * kPi * rc.D * t * t * t) *
         std::exp(-gap * gap / (4 * rc.D * t));
}

// N_RX[k] = sum_j N_out[j] (P((k-j) dt) - P((k-j-1) dt)), P(<0) = 0:
// summation by parts of the increment form, O(K^2) with no tabulation.
std::vector<double> by_parts(const std::vector<double>& released, double dt,
                             const ReceiverConfig& rc) {
  std::vector<double> out(released.size(), 0.0);
  for (std::size_t k = 0; k < released.size(); ++k) {
    for (std::size_t j = 0; j <= k; ++j) {
      const double lag = static_cast<double>(k - j);
      const double w = hitting_cdf(lag * dt, rc) - (k == j ? 0.0 : hitting_cdf((lag - 1) * dt, rc));
      out[k] += released[j] * w;
    }
  }
  return out;
}

std::vector<double> random_release(Gen& g, std::size_t n) {
  std::vector<double> v(n);
  double acc = 0;
  for (auto& x : v) {
    if (g.integer(0, 4) == 0) acc += g.uniform(0, 50);
    x = acc;
  }
  return v;
}

}  // namespace

TEST(HittingCdf, ReferenceValues) {
  EXPECT_NEAR(hitting_cdf(0.01, kRef), 5.79156531158e-6, 1e-15);
  EXPECT_NEAR(hitting_cdf(0.1, kRef), 0.0827589293487, 1e-12);
  EXPECT_NEAR(hitting_cdf(1.0, kRef), 0.330501422812, 1e-12);
  EXPECT_NEAR(hitting_cdf(10.0, kRef), 0.444853467767, 1e-12);
  EXPECT_EQ(hitting_cdf(0.0, kRef), 0.0);
  EXPECT_EQ(hitting_cdf(-1.0, kRef), 0.0);
  EXPECT_NEAR(hitting_cdf(1e12, kRef), 0.5, 1e-6);
  EXPECT_EQ(PointSourceHitting(kRef).asymptote(), 0.5);
}

TEST(HittingCdf, RejectsBadGeometry) {
  EXPECT_THROW(PointSourceHitting({1e-6, 1e-6, 1e-12}), ConfigError);
  EXPECT_THROW(PointSourceHitting({0, 1e-6, 1e-12}), ConfigError);
  EXPECT_THROW(PointSourceHitting({1e-6, 2e-6, 0}), ConfigError);
}

TEST(HittingCdf, MatchesIntegratedDensity) {
  for_all(30, 51, [](Gen& g) {
    ReceiverConfig rc;
    rc.r_RX = g.log_uniform(1e-7, 5e-6);
    rc.d = rc.r_RX * g.uniform(1.05, 10);
    rc.D = g.log_uniform(1e-13, 1e-10);
    const double scale = (rc.d - rc.r_RX) * (rc.d - rc.r_RX) / rc.D;
    const double t = scale * g.log_uniform(0.05, 50);
    const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double s) { return hitting_density(s, rc); }, 0.0, t, 15, 1e-12);
    EXPECT_NEAR(integral, hitting_cdf(t, rc), 1e-9);
  });
}

TEST(HittingCdf, MonotoneAndBounded) {
  for_all(50, 52, [](Gen& g) {
    ReceiverConfig rc;
    rc.r_RX = g.log_uniform(1e-7, 5e-6);
    rc.d = rc.r_RX * g.uniform(1.01, 20);
    rc.D = g.log_uniform(1e-13, 1e-10);
    double last = 0;
    for (double t = 1e-4; t < 1e4; t *= 1.3) {
      const double p = hitting_cdf(t, rc);
      ASSERT_GE(p, last);
      ASSERT_LE(p, rc.r_RX / rc.d);
      last = p;
    }
  });
}

TEST(AbsorbedSeries, ImpulseReproducesCdf) {
  const double dt = 0.01;
  std::vector<double> released(1001, 1000.0);
  const PointSourceHitting model(kRef);
  const auto s = absorbed_series(released, dt, model);
  EXPECT_EQ(s.decimation, 1u);
  for (std::size_t k = 0; k < released.size(); k += 50) {
    EXPECT_NEAR(s.received[k], 1000 * hitting_cdf(static_cast<double>(k) * dt, kRef), 1e-9);
  }
}

TEST(AbsorbedSeries, NothingReleasedNothingReceived) {
  const std::vector<double> released(200, 0.0);
  const auto s = absorbed_series(released, 0.01, PointSourceHitting(kRef));
  for (double v : s.received) EXPECT_EQ(v, 0.0);
  EXPECT_TRUE(absorbed_series(std::span<const double>{}, 0.01, PointSourceHitting(kRef))
                  .received.empty());
}

TEST(AbsorbedSeries, MatchesSummationByParts) {
  for_all(10, 53, [](Gen& g) {
    const auto released = random_release(g, static_cast<std::size_t>(g.integer(1, 400)));
    const double dt = g.log_uniform(1e-3, 1);
    const auto s = absorbed_series(released, dt, PointSourceHitting(kRef));
    const auto ref = by_parts(released, dt, kRef);
    for (std::size_t k = 0; k < ref.size(); ++k) {
      ASSERT_NEAR(s.received[k], ref[k], 1e-12 * std::max(1.0, ref[k]));
    }
  });
}

TEST(AbsorbedSeries, LinearInTheRelease) {
  for_all(20, 54, [](Gen& g) {
    const auto a = random_release(g, 300);
    const auto b = random_release(g, 300);
    const double ca = g.uniform(0, 3), cb = g.uniform(0, 3);
    std::vector<double> mix(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) mix[i] = ca * a[i] + cb * b[i];
    const PointSourceHitting model(kRef);
    const auto ra = absorbed_series(a, 0.05, model).received;
    const auto rb = absorbed_series(b, 0.05, model).received;
    const auto rm = absorbed_series(mix, 0.05, model).received;
    for (std::size_t i = 0; i < a.size(); ++i) {
      ASSERT_NEAR(rm[i], ca * ra[i] + cb * rb[i], 1e-9 * std::max(1.0, rm[i]));
      // never more than the geometric share of what was released
      ASSERT_LE(rm[i], mix[i] * kRef.r_RX / kRef.d * (1 + 1e-12));
      ASSERT_GE(rm[i], 0.0);
    }
  });
}

TEST(AbsorbedSeries, DecimationStaysAccurate) {
  // smooth release over 20 s at 1e-3 s spacing
  const std::size_t n = 20001;
  std::vector<double> released(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * 1e-3;
    released[i] = 1000 * (1 - std::exp(-t / 3));
  }
  const PointSourceHitting model(kRef);
  const auto full = absorbed_series(released, 1e-3, model);
  const auto coarse = absorbed_series(released, 1e-3, model, 2001);
  EXPECT_EQ(full.decimation, 1u);
  EXPECT_EQ(coarse.decimation, 10u);
  EXPECT_NEAR(coarse.bin_width, 1e-2, 1e-15);
  double peak = 0, worst = 0;
  for (std::size_t i = 0; i < n; ++i) {
    peak = std::max(peak, full.received[i]);
    worst = std::max(worst, std::abs(full.received[i] - coarse.received[i]));
  }
  EXPECT_LT(worst / peak, 0.01);
  EXPECT_EQ(coarse.received.size(), n);
}

TEST(AbsorbedSeries, RecordInterface) {
  TimeSeriesRecord rec;
  std::vector<double> t(101), out(101);
  for (int i = 0; i <= 100; ++i) {
    t[i] = 0.1 * i;
    out[i] = i >= 10 ? 500.0 : 0.0;
  }
  rec.add_column("t", t);
  rec.add_column("N_out_B", out);
  append_received_column(rec, "N_out_B", "N_RX_B", kRef);
  ASSERT_TRUE(rec.has_column("N_RX_B"));
  EXPECT_EQ(rec.column("N_RX_B")[9], 0.0);
  EXPECT_NEAR(rec.column("N_RX_B")[100], 500 * hitting_cdf(9.0, kRef), 1e-9);
  ASSERT_NE(rec.find_meta("receiver_model"), nullptr);
  EXPECT_EQ(*rec.find_meta("receiver_model"), "point-source");
  EXPECT_EQ(*rec.find_meta("receiver_bin_width"), "0.1");

  EXPECT_THROW(append_received_column(rec, "N_out_X", "N_RX_X", kRef), ConfigError);
  TimeSeriesRecord uneven;
  uneven.add_column("t", {0, 0.1, 0.3});
  uneven.add_column("N_out_B", {0, 1, 2});
  EXPECT_THROW(absorbed_series(uneven, "N_out_B", PointSourceHitting(kRef)), ConfigError);
  TimeSeriesRecord no_time;
  no_time.add_column("N_out_B", {0, 1, 2});
  EXPECT_THROW(absorbed_series(no_time, "N_out_B", PointSourceHitting(kRef)), ConfigError);
}
