#include "mctx/receiver.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace mctx {

ReceiverConfig receiver_from(const SystemConfig& cfg) { return {cfg.r_RX, cfg.d, cfg.D}; }

void validate(const ReceiverConfig& rc) {
  if (!(rc.r_RX > 0)) throw ConfigError("r_RX must be > 0");
  if (!(rc.d > rc.r_RX)) throw ConfigError("d must exceed r_RX");
  if (!(rc.D > 0)) throw ConfigError("D must be > 0");
}

PointSourceHitting::PointSourceHitting(const ReceiverConfig& rc) : rc_(rc) { validate(rc); }

double PointSourceHitting::cdf(double t) const {
  if (!(t > 0)) return 0.0;
  const double gap = rc_.d - rc_.r_RX;
  return rc_.r_RX / rc_.d * std::erfc(gap / (2.0 * std::sqrt(rc_.D * t)));
}

double hitting_cdf(double t, const ReceiverConfig& rc) { return PointSourceHitting(rc).cdf(t); }

AbsorbedSeries absorbed_series(std::span<const double> released, double dt,
                               const HittingModel& model, std::size_t max_bins) {
  if (!(dt > 0)) throw ConfigError("sample spacing must be > 0");
  if (max_bins < 2) throw ConfigError("max_bins must be >= 2");
  AbsorbedSeries out;
  const std::size_t n = released.size();
  out.received.assign(n, 0.0);
  if (n == 0) {
    out.bin_width = dt;
    return out;
  }

  const std::size_t m = n <= max_bins ? 1 : (n - 1 + max_bins - 2) / (max_bins - 1);
  out.decimation = m;
  out.bin_width = dt * static_cast<double>(m);

  // Coarse grid: indices 0, m, 2m, ... plus the final sample.
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < n; i += m) idx.push_back(i);
  if (idx.back() != n - 1) idx.push_back(n - 1);
  const std::size_t K = idx.size();

  std::vector<double> times(K), incr(K);
  for (std::size_t j = 0; j < K; ++j) {
    times[j] = static_cast<double>(idx[j]) * dt;
    incr[j] = released[idx[j]] - (j == 0 ? 0.0 : released[idx[j - 1]]);
  }

  std::vector<double> coarse(K, 0.0);
  if (m == 1) {
    // Uniform lags: tabulate P once.
    std::vector<double> lag_cdf(K);
    for (std::size_t l = 0; l < K; ++l) lag_cdf[l] = model.cdf(static_cast<double>(l) * dt);
    for (std::size_t k = 0; k < K; ++k) {
      double acc = 0;
      for (std::size_t j = 0; j <= k; ++j) acc += incr[j] * lag_cdf[k - j];
      coarse[k] = acc;
    }
  } else {
    for (std::size_t k = 0; k < K; ++k) {
      double acc = 0;
      for (std::size_t j = 0; j <= k; ++j) acc += incr[j] * model.cdf(times[k] - times[j]);
      coarse[k] = acc;
    }
  }

  for (std::size_t j = 0; j < K; ++j) out.received[idx[j]] = coarse[j];
  for (std::size_t j = 0; j + 1 < K; ++j) {
    const auto a = idx[j], b = idx[j + 1];
    for (std::size_t i = a + 1; i < b; ++i) {
      const double f = static_cast<double>(i - a) / static_cast<double>(b - a);
      out.received[i] = coarse[j] + (coarse[j + 1] - coarse[j]) * f;
    }
  }
  return out;
}

AbsorbedSeries absorbed_series(const TimeSeriesRecord& rec, const std::string& released_column,
                               const HittingModel& model, std::size_t max_bins) {
  if (!rec.has_column("t")) throw ConfigError("series has no 't' column");
  if (!rec.has_column(released_column)) {
    throw ConfigError(fmt::format("series has no '{}' column", released_column));
  }
  const auto t = rec.column("t");
  const auto released = rec.column(released_column);
  if (t.size() != released.size()) throw ConfigError("time and release columns differ in length");
  if (t.size() < 2) return absorbed_series(released, 1.0, model, max_bins);
  const double dt = t[1] - t[0];
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double expect = t[0] + static_cast<double>(i) * dt;
    if (std::abs(t[i] - expect) > 1e-6 * dt + 1e-12 * std::abs(expect)) {
      throw ConfigError("release series must be sampled on a uniform grid");
    }
  }
  return absorbed_series(released, dt, model, max_bins);
}

void append_received_column(TimeSeriesRecord& rec, const std::string& released_column,
                            const std::string& received_column, const ReceiverConfig& rc,
                            std::size_t max_bins) {
  const PointSourceHitting model(rc);
  auto series = absorbed_series(rec, released_column, model, max_bins);
  rec.add_column(received_column, std::move(series.received));
  rec.set_meta("receiver_model", model.name());
  rec.set_meta("receiver_bin_width", format_number(series.bin_width));
}

}  // namespace mctx
