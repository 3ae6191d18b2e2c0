#pragma once

#include <span>
#include <string>
#include <vector>

namespace mctx {

/// At `time` the permeability starts moving linearly from its previous
/// value to `target`, arriving at `time + ramp`. A zero ramp is a jump that
/// takes effect at `time` itself.
struct PermeabilityEvent {
  double time = 0;    // [s]
  double target = 0;  // [1/s]
  double ramp = 0;    // [s]

  bool operator==(const PermeabilityEvent&) const = default;
};

/// Piecewise-linear membrane permeability rho(t). Closed (0) before the first
/// event; holds the last target after the final event.
class PermeabilityWaveform {
 public:
  PermeabilityWaveform() = default;

  /// Events must have strictly increasing times, targets in [0, rho_max],
  /// non-negative ramps, and each ramp must finish by the next event.
  PermeabilityWaveform(std::vector<PermeabilityEvent> events, double rho_max);

  double at(double t) const;

  std::span<const PermeabilityEvent> events() const { return events_; }
  double rho_max() const { return rho_max_; }

  /// Integral of rho over [0, t_end].
  double area(double t_end) const;

  /// One-line description, e.g. "0:0.027/0;5:0/0".
  std::string describe() const;

 private:
  std::vector<PermeabilityEvent> events_;
  double rho_max_ = 0;
};

/// Alternating open/close jumps, first event opens.
PermeabilityWaveform waveform_instantaneous(std::span<const double> switch_times, double rho_max);

/// Alternating open/close linear ramps of length t_dis starting at each
/// switch time (trapezoidal open phases). t_dis = 0 reproduces
/// waveform_instantaneous.
PermeabilityWaveform waveform_ramp(std::span<const double> switch_times, double t_dis,
                                   double rho_max);

inline double permeability_at(const PermeabilityWaveform& w, double t) { return w.at(t); }

}  // namespace mctx
