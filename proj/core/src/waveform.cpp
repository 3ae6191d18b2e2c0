#include "mctx/waveform.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "mctx/config.hpp"

namespace mctx {

namespace {

// Step times are formed as k * T, which can land an ulp short of an event
// time; anything this close to an event counts as being at the event.
double snap_tolerance(double t) { return 1e-12 * std::max(1.0, std::abs(t)); }

}  // namespace

PermeabilityWaveform::PermeabilityWaveform(std::vector<PermeabilityEvent> events, double rho_max)
    : events_(std::move(events)), rho_max_(rho_max) {
  if (!(rho_max >= 0) || !std::isfinite(rho_max)) throw ConfigError("rho_max must be >= 0");
  for (std::size_t i = 0; i < events_.size(); ++i) {
    const auto& e = events_[i];
    if (!std::isfinite(e.time) || e.time < 0) {
      throw ConfigError(fmt::format("event {}: time must be finite and >= 0", i));
    }
    if (!(e.target >= 0 && e.target <= rho_max)) {
      throw ConfigError(fmt::format("event {}: target {:g} outside [0, {:g}]", i, e.target, rho_max));
    }
    if (!(e.ramp >= 0) || !std::isfinite(e.ramp)) {
      throw ConfigError(fmt::format("event {}: ramp must be >= 0", i));
    }
    if (i > 0) {
      const auto& prev = events_[i - 1];
      if (!(e.time > prev.time)) {
        throw ConfigError(fmt::format("event times must be strictly increasing ({:g} after {:g})",
                                      e.time, prev.time));
      }
      if (prev.time + prev.ramp > e.time + snap_tolerance(e.time)) {
        throw ConfigError(fmt::format("ramp starting at {:g} overlaps the event at {:g}",
                                      prev.time, e.time));
      }
    }
  }
}

double PermeabilityWaveform::at(double t) const {
  const double probe = t + snap_tolerance(t);
  auto it = std::upper_bound(events_.begin(), events_.end(), probe,
                             [](double x, const PermeabilityEvent& e) { return x < e.time; });
  if (it == events_.begin()) return 0.0;
  const auto idx = static_cast<std::size_t>(std::distance(events_.begin(), it)) - 1;
  const auto& e = events_[idx];
  const double from = idx == 0 ? 0.0 : events_[idx - 1].target;
  if (e.ramp > 0 && t < e.time + e.ramp) {
    const double frac = std::clamp((t - e.time) / e.ramp, 0.0, 1.0);
    return from + (e.target - from) * frac;
  }
  return e.target;
}

double PermeabilityWaveform::area(double t_end) const {
  // Exact: integrate each linear piece.
  double total = 0;
  double from = 0;
  double t_prev = 0;
  for (const auto& e : events_) {
    if (e.time >= t_end) break;
    total += from * (e.time - t_prev);
    const double ramp_end = std::min(e.time + e.ramp, t_end);
    if (e.ramp > 0) {
      const double span = ramp_end - e.time;
      const double v_end = from + (e.target - from) * span / e.ramp;
      total += 0.5 * (from + v_end) * span;
    }
    from = e.target;
    t_prev = std::max(ramp_end, e.time);
  }
  if (t_end > t_prev) total += from * (t_end - t_prev);
  return total;
}

std::string PermeabilityWaveform::describe() const {
  std::string out;
  for (const auto& e : events_) {
    if (!out.empty()) out += ';';
    out += fmt::format("{:.12g}:{:.12g}/{:.12g}", e.time, e.target, e.ramp);
  }
  return out.empty() ? "closed" : out;
}

PermeabilityWaveform waveform_instantaneous(std::span<const double> switch_times, double rho_max) {
  return waveform_ramp(switch_times, 0.0, rho_max);
}

PermeabilityWaveform waveform_ramp(std::span<const double> switch_times, double t_dis,
                                   double rho_max) {
  if (!(t_dis >= 0)) throw ConfigError("t_dis must be >= 0");
  std::vector<PermeabilityEvent> events;
  events.reserve(switch_times.size());
  for (std::size_t i = 0; i < switch_times.size(); ++i) {
    if (i > 0 && !(switch_times[i] > switch_times[i - 1])) {
      throw ConfigError("switch times must be strictly increasing");
    }
    if (i > 0 && switch_times[i] - switch_times[i - 1] < t_dis) {
      throw ConfigError(fmt::format("switch at {:g} comes before the previous ramp ends ({:g} s)",
                                    switch_times[i], t_dis));
    }
    const bool opening = i % 2 == 0;
    events.push_back({switch_times[i], opening ? rho_max : 0.0, t_dis});
  }
  return PermeabilityWaveform(std::move(events), rho_max);
}

}  // namespace mctx
