#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "mctx/config.hpp"
#include "mctx/enzyme_tx.hpp"
#include "mctx/rng.hpp"
#include "mctx/timeseries.hpp"
#include "mctx/waveform.hpp"

/// Particle-based stochastic simulation of the transmitter.
///
/// Only molecules that enter the nanoparticle are tracked. Each step:
///   1. a Binomial number of A/(R)man molecules enters, placed uniformly
///      inside the nanoparticle;
///   2. every interior molecule takes a 3-D Brownian step; steps that cross
///      the membrane are transmitted with probability
///      P = rho_hat sqrt(pi T / D) or reflected specularly;
///   3. reactions fire (first order A -> B, or the mandelate racemase
///      network on well-mixed counts);
///   4. released B/(S)man molecules diffuse freely and are absorbed when
///      they reach the receiver sphere centred at (d, 0, 0).
///
/// The transmitter sits at the origin. Molecules that leave the
/// nanoparticle never re-enter it.
///
/// The run engine exploits spherical symmetry. A 3-D step of standard
/// deviation sigma per axis taken from radius r splits into a radial part
/// N(0, sigma^2) and a transverse part whose squared length is
/// 2 sigma^2 Exp(1); a specular reflection stays in the plane spanned by the
/// start point and the step. The distance from the centre therefore evolves
/// exactly as in the full walk, and nothing downstream depends on the
/// direction, so interior molecules carry only their radius. Released
/// molecules likewise carry only their distance to the receiver centre (the
/// exit direction is uniform). The 3-D primitives below are kept for tests
/// and for callers that need positions.
///
/// Transmission uses a per-molecule Exp(1) hazard budget: each crossing
/// attempt spends -log(1 - P_tr) and the molecule leaves when the budget
/// runs out. This is the same law as an independent Bernoulli(P_tr) draw
/// per attempt, without a uniform variate per attempt.
namespace mctx::pbs {

using Vec3 = std::array<double, 3>;
using Rng = Xoshiro256pp;

/// A doubles as (R)-mandelate and B as (S)-mandelate in enzyme mode.
enum class Species : std::uint8_t { A, B, E, ER, ES };

inline bool is_enzyme_family(Species s) {
  return s == Species::E || s == Species::ER || s == Species::ES;
}

struct Particle {
  Vec3 position{};
  Species species = Species::A;
};

enum class Mode { IdealFirstOrder, Enzyme };
enum class Placement {
  Uniform,       // anywhere in the nanoparticle volume
  NearMembrane,  // on a shell just inside the membrane
};

struct PbsConfig {
  SystemConfig sys;
  std::uint64_t seed = 1;
  int n_runs = 100;
  Mode mode = Mode::IdealFirstOrder;
  double k_AB = 0.1;
  EnzymeRates rates;
  int N_MR = 2;
  int reaction_substeps = 1;
  Placement placement = Placement::Uniform;
  std::size_t stride = 100;

  /// Follow released molecules to the receiver.
  bool track_receiver = true;
  /// Also absorb molecules whose path crossed the receiver between two
  /// sampled positions (Brownian-bridge probability).
  bool bridge_absorption = true;
  /// After `mixing_steps` consecutive closed steps the interior is fully
  /// mixed; stop moving interior molecules and redraw their positions
  /// uniformly when the membrane reopens.
  bool lazy_closed_mixing = true;
  int mixing_steps = 200;
  /// Released molecules farther than retire_factor * d from the receiver
  /// are dropped as never absorbed.
  double retire_factor = 50.0;
  /// Worker threads for the ensemble; 0 picks hardware_concurrency.
  unsigned threads = 0;
};

void validate(const PbsConfig& cfg);

// --- primitives -----------------------------------------------------------

/// Adds an independent N(0, 2 D T) displacement to each coordinate.
Particle brownian_step(const Particle& p, double D, double T, Rng& rng);

/// P = rho_hat sqrt(pi T / D). Throws ConfigError if P > 1.
double transmission_probability(double rho_hat, double D, double T);

struct MembraneOutcome {
  Particle particle;
  bool transmitted = false;
};

/// Resolves a step from `from` to `proposed` that crosses the sphere of
/// radius r_in: transmitted with transmission_probability(rho_hat, D, T),
/// otherwise reflected specularly back into the region it came from.
/// Enzyme-family particles always reflect. Steps that do not cross are
/// returned unchanged.
MembraneOutcome membrane_interaction(const Particle& from, const Particle& proposed,
                                     double rho_hat, double r_in, double D, double T, Rng& rng);

/// Specular reflection of the segment from -> to off the sphere |x| = radius.
Vec3 reflect_off_sphere(const Vec3& from, const Vec3& to, double radius);

/// Number of molecules entering during one step: Binomial(N_out_A, mean / N_out_A)
/// with mean rho_k V_in C_out0_A N_a T; Poisson(mean) once the per-molecule
/// probability is below 1e-12.
std::int64_t influx_sample(double rho_k, const SystemConfig& cfg, const DerivedConstants& dc,
                           Rng& rng);

Vec3 uniform_in_ball(double radius, Rng& rng);

/// Distance from the centre of a point uniform in the ball: radius * U^(1/3).
double uniform_radius(double radius, Rng& rng);

/// Radial decomposition of one 3-D Gaussian step (see the namespace notes).
struct RadialStep {
  double along = 0;    // displacement along the current radial direction
  double across2 = 0;  // squared transverse displacement
};

RadialStep radial_step(double sigma, Rng& rng);

/// Distance from the centre after taking `step` from distance r.
inline double stepped_radius(double r, const RadialStep& step) {
  const double x = r + step.along;
  return std::sqrt(x * x + step.across2);
}

/// Radius after a step from r that would leave the sphere of radius
/// `radius`, reflected specularly back inside.
double reflected_radius(double r, const RadialStep& step, double radius);

/// A free molecule inside the nanoparticle.
struct Tracked {
  double r = 0;       // distance from the centre [m]
  double hazard = 0;  // remaining Exp(1) transmission budget
};

/// Free molecules inside the nanoparticle, split by species. `a` holds A or
/// (R)man, `b` holds B or (S)man.
struct Interior {
  std::vector<Tracked> a;
  std::vector<Tracked> b;
};

/// Each A converts to B with probability 1 - exp(-k_AB T). Returns the
/// number converted.
std::int64_t react_first_order(Interior& interior, double k_AB, double T, Rng& rng);

struct EnzymeCounts {
  std::int64_t R = 0;
  std::int64_t S = 0;
  std::int64_t E = 0;
  std::int64_t ER = 0;
  std::int64_t ES = 0;

  std::int64_t enzyme_total() const { return E + ER + ES; }
  std::int64_t mandelate_total() const { return R + S + ER + ES; }
  bool operator==(const EnzymeCounts&) const = default;
};

/// One step of the well-mixed stochastic racemase network. Within each of
/// `substeps` sub-steps the three sub-reactions run in chain order; each
/// entity present at the start of a sub-reaction fires a channel with
/// probability 1 - exp(-rate h). Bimolecular channels use the pseudo-rate
/// k * partner_count / (V_in N_a), updated after every binding.
EnzymeCounts react_enzyme_stochastic(const EnzymeCounts& counts, const EnzymeRates& rates,
                                     double V_in, double N_a, double T, int substeps, Rng& rng);

// --- full simulation ------------------------------------------------------

/// End-of-run bookkeeping for one trajectory.
struct RunLedger {
  std::int64_t influx = 0;            // molecules that entered
  std::int64_t escaped_harvest = 0;   // A/(R)man that left again
  std::int64_t released = 0;          // B/(S)man that left
  std::int64_t absorbed = 0;          // released and absorbed by the receiver
  std::int64_t retired = 0;           // released and dropped far away
  std::int64_t outside = 0;           // released, still diffusing
  std::int64_t inside_free = 0;       // free A/B or R/S inside
  std::int64_t inside_bound = 0;      // mandelate held in ER/ES
  std::int64_t reflections = 0;
  std::int64_t crossing_attempts = 0;
};

struct RunTrace {
  std::vector<std::string> columns;         // count columns, no t/rho
  std::vector<std::vector<double>> values;  // values[row][col]
  RunLedger ledger;
};

/// One trajectory with its own RNG stream.
RunTrace run_single(const PbsConfig& cfg, const PermeabilityWaveform& w, double duration,
                    std::uint64_t run_seed);

/// Seed of run `index` derived from the master seed.
std::uint64_t run_seed(std::uint64_t master, std::uint64_t index);

struct PbsResult {
  /// t, rho, then per count column its ensemble mean (same name as the
  /// deterministic models use) and `<name>_std`.
  TimeSeriesRecord series;
  std::vector<RunLedger> ledgers;
};

PbsResult run_pbs(const PbsConfig& cfg, const PermeabilityWaveform& w, double duration);

// --- membrane calibration ------------------------------------------------

/// Per-molecule transmission rate out of a well-mixed interior under the
/// open membrane (rho_max). The deterministic models assume rho.
struct EffluxCalibration {
  std::int64_t transmitted = 0;
  double measured_rate = 0;      // [1/s]
  double expected_rate = 0;      // rho_max [1/s]
  double attempts_per_step = 0;  // crossing attempts per molecule and step
};

/// Starts `n_particles` uniformly inside, lets them mix for 200 closed
/// steps, then counts transmissions over `steps` open steps.
EffluxCalibration membrane_efflux(const PbsConfig& cfg, std::size_t n_particles, std::size_t steps);

// --- receiver validation -------------------------------------------------

/// Releases `n_particles` at the transmitter centre at t = 0 and returns the
/// absorbed fraction sampled every `stride` steps up to `t_max`.
struct ImpulseAbsorption {
  std::vector<double> t;
  std::vector<double> fraction;
};

ImpulseAbsorption impulse_absorption(const PbsConfig& cfg, std::size_t n_particles, double t_max);

}  // namespace mctx::pbs
