#pragma once

#include <cstddef>
#include <cstdint>

#include "mctx/config.hpp"
#include "mctx/timeseries.hpp"
#include "mctx/waveform.hpp"

namespace mctx {

/// Idealized transmitter: instantaneous membrane switching and irreversible
/// first-order conversion A -> B inside the nanoparticle.
struct IdealParams {
  double k_AB = 0.1;  // [1/s]
  double C_out0_A = 0;
  double V_in = 0;
  double V_out = 0;
  double T = 1e-4;
  double N_a = kAvogadro;
};

IdealParams make_ideal_params(const SystemConfig& cfg, double k_AB);
void validate(const IdealParams& p);

struct IdealTxState {
  double C_in_A = 0;   // [mol/m^3]
  double C_in_B = 0;   // [mol/m^3]
  double C_out_B = 0;  // released B spread over V_out [mol/m^3]
  std::int64_t k = 0;
};

/// One step of the exponential (impulse-invariant) update with rho frozen
/// over the step:
///
///   C_in_A[k]  = exp(-(rho + k_AB) T) C_in_A[k-1] + T rho C_out0_A
///   C_in_B[k]  = exp(-rho T) C_in_B[k-1] + T k_AB C_in_A[k]
///   C_out_B[k] = C_out_B[k-1] + rho (V_in / V_out) T C_in_B[k]
///
/// The last line is a forward step of dC_out/dt = rho V_in/V_out C_in_B, so
/// the released amount is non-negative and B never re-enters.
IdealTxState step_ideal(const IdealTxState& s, double rho_k, const IdealParams& p);

/// Runs from the all-zero state. The step from t to t + T uses rho(t).
/// Rows are written every `stride` steps (and at t = 0); columns:
/// t, rho, N_in_A, N_in_B, N_out_B.
TimeSeriesRecord simulate_ideal(const IdealParams& p, const PermeabilityWaveform& w,
                                double duration, std::size_t stride);

/// Steady state of the continuous model under constant rho:
/// rho C_out0_A / (rho + k_AB). Throws if rho + k_AB == 0.
double ideal_open_fixed_point(const IdealParams& p, double rho);

/// Fixed point of step_ideal itself: T rho C_out0_A / (1 - exp(-(rho + k_AB) T)).
double ideal_open_fixed_point_discrete(const IdealParams& p, double rho);

/// Number of whole steps covering `duration` (rounded to nearest).
std::int64_t step_count(double duration, double T);

}  // namespace mctx
