#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mctx/config.hpp"
#include "mctx/timeseries.hpp"

namespace mctx {

struct ReceiverConfig {
  double r_RX = 1e-6;  // [m]
  double d = 2e-6;     // TX-RX centre-to-centre distance [m]
  double D = 2.6e-12;  // [m^2/s]
};

ReceiverConfig receiver_from(const SystemConfig& cfg);
void validate(const ReceiverConfig& rc);

/// Cumulative probability that a molecule released at t = 0 has been
/// absorbed by time t.
class HittingModel {
 public:
  virtual ~HittingModel() = default;
  virtual double cdf(double t) const = 0;
  virtual std::string name() const = 0;
};

/// Point source at distance d from a perfectly absorbing sphere:
/// P(t) = (r_RX / d) erfc((d - r_RX) / (2 sqrt(D t))).
class PointSourceHitting final : public HittingModel {
 public:
  explicit PointSourceHitting(const ReceiverConfig& rc);
  double cdf(double t) const override;
  std::string name() const override { return "point-source"; }
  double asymptote() const { return rc_.r_RX / rc_.d; }

 private:
  ReceiverConfig rc_;
};

double hitting_cdf(double t, const ReceiverConfig& rc);

struct AbsorbedSeries {
  std::vector<double> received;  // same length as the input
  double bin_width = 0;          // grid spacing the convolution ran on [s]
  std::size_t decimation = 1;    // input rows per convolution bin
};

inline constexpr std::size_t kDefaultMaxBins = 100000;

/// Received counts for an accumulated release series sampled every `dt`:
///
///   N_RX[k] = sum_{j <= k} (N_out[j] - N_out[j-1]) P((k - j) dt),  N_out[-1] = 0
///
/// Series longer than `max_bins` are decimated first: the convolution runs
/// on every m-th sample (increments lumped at the retained sample times) and
/// rows in between are linearly interpolated.
AbsorbedSeries absorbed_series(std::span<const double> released, double dt,
                               const HittingModel& model,
                               std::size_t max_bins = kDefaultMaxBins);

/// Same, reading `released_column` and checking that `t` is a uniform grid
/// of matching length. Throws ConfigError on mismatch.
AbsorbedSeries absorbed_series(const TimeSeriesRecord& rec, const std::string& released_column,
                               const HittingModel& model,
                               std::size_t max_bins = kDefaultMaxBins);

/// Adds `received_column` computed from `released_column` and records the
/// receiver settings and bin width in the metadata.
void append_received_column(TimeSeriesRecord& rec, const std::string& released_column,
                            const std::string& received_column, const ReceiverConfig& rc,
                            std::size_t max_bins = kDefaultMaxBins);

}  // namespace mctx
