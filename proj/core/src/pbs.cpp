#include "mctx/pbs.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <fmt/format.h>

namespace mctx::pbs {

namespace {

using Normal = boost::random::normal_distribution<double>;  // ziggurat

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

double norm2(const Vec3& v) { return v[0] * v[0] + v[1] * v[1] + v[2] * v[2]; }

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

std::int64_t binomial(std::int64_t n, double p, Rng& rng) {
  if (n <= 0 || p <= 0) return 0;
  if (p >= 1) return n;
  if (n < 16) {
    std::int64_t hits = 0;
    for (std::int64_t i = 0; i < n; ++i) hits += uniform01(rng) < p;
    return hits;
  }
  return std::binomial_distribution<std::int64_t>(n, p)(rng);
}

// Walks `entities` candidates one at a time; each binds with probability
// 1 - exp(-k * partner * scale * h) using the partner count left at that
// point. Geometric skips make the cost proportional to the number bound.
std::int64_t sequential_binding(std::int64_t entities, std::int64_t& partner, double k,
                                double per_count, double h, Rng& rng) {
  std::int64_t bound = 0;
  std::int64_t remaining = entities;
  while (remaining > 0 && partner > 0) {
    const double p = -std::expm1(-k * static_cast<double>(partner) * per_count * h);
    if (!(p > 0)) break;
    std::int64_t skip = 0;
    if (p < 1) skip = std::geometric_distribution<std::int64_t>(p)(rng);
    if (skip >= remaining) break;
    remaining -= skip + 1;
    --partner;
    ++bound;
  }
  return bound;
}

template <typename T>
void swap_remove(std::vector<T>& v, std::size_t i) {
  v[i] = v.back();
  v.pop_back();
}

double exp1(Rng& rng) { return boost::random::exponential_distribution<double>(1.0)(rng); }

struct ReleasedMotion {
  double sigma;
  double D_T;
  double d;  // TX-RX centre distance
  double r_rx;
  double retire;
  bool bridge;
};

struct ReleasedTally {
  std::int64_t absorbed = 0;
  std::int64_t retired = 0;
};

// Distance to the receiver centre of a molecule leaving the nanoparticle at
// radius R in a uniformly random direction.
double exit_distance(double R, double d, Rng& rng) {
  const double cos_theta = 2.0 * uniform01(rng) - 1.0;
  return std::sqrt(std::max(R * R + d * d - 2.0 * R * d * cos_theta, 0.0));
}

// `dist` holds distances to the receiver centre.
void advance_released(std::vector<double>& dist, const ReleasedMotion& m, Normal& normal,
                      Rng& rng, ReleasedTally& tally) {
  const double r_rx2 = m.r_rx * m.r_rx;
  const double retire2 = m.retire * m.retire;
  const double two_var = 2.0 * m.sigma * m.sigma;
  // Beyond this gap product the bridge probability exp(-x1 x2 / (D T)) is < e^-30.
  const double bridge_cut = 30.0 * m.D_T;
  boost::random::exponential_distribution<double> expo(1.0);
  for (std::size_t i = 0; i < dist.size();) {
    const double s = dist[i];
    const double x = s + normal(rng);
    const double s2 = x * x + two_var * expo(rng);
    bool absorbed = s2 <= r_rx2;
    if (!absorbed && m.bridge) {
      const double gap_p = s - m.r_rx;
      if (gap_p * gap_p < 4.0 * bridge_cut + 64.0 * m.sigma * m.sigma) {
        const double prod = gap_p * (std::sqrt(s2) - m.r_rx);
        if (prod < bridge_cut && uniform01(rng) < std::exp(-prod / m.D_T)) absorbed = true;
      }
    }
    if (absorbed) {
      ++tally.absorbed;
      swap_remove(dist, i);
      continue;
    }
    if (s2 > retire2) {
      ++tally.retired;
      swap_remove(dist, i);
      continue;
    }
    dist[i] = std::sqrt(s2);
    ++i;
  }
}

// Radius after a step from r that ends outside the sphere, reflected
// specularly. In the plane of the start point p = (r, 0) and the step v:
// with hit point h = p + s v, |q'|^2 = R^2 + (1-s)^2 |v|^2 - 2 (1-s) v.h.
double reflect_radial(double r, const RadialStep& step, double radius) {
  const double a = step.along;
  const double v2 = a * a + step.across2;
  const double c = r * r - radius * radius;
  const double b = r * a;  // p.v
  double s = (-b + std::sqrt(std::max(b * b - v2 * c, 0.0))) / v2;
  s = std::clamp(s, 0.0, 1.0);
  const double vh = b + s * v2;
  const double rest = 1.0 - s;
  const double q2 = radius * radius + rest * rest * v2 - 2.0 * rest * vh;
  if (q2 <= radius * radius) return std::sqrt(std::max(q2, 0.0));
  // Grazing chord that leaves again: resolve with the full multi-bounce path.
  const Vec3 q = reflect_off_sphere({r, 0.0, 0.0}, {r + a, std::sqrt(step.across2), 0.0}, radius);
  return std::sqrt(norm2(q));
}

struct InteriorWalk {
  double sigma;
  double r_in;
};

struct WalkTally {
  std::int64_t attempts = 0;
  std::int64_t reflections = 0;
};

// Moves one interior population. `h` is the hazard spent per crossing
// attempt, -log(1 - P_tr). Each transmitted molecule is removed after
// calling on_exit(exit_radius).
template <typename OnExit>
void move_population(std::vector<Tracked>& pop, const InteriorWalk& walk, double h, Normal& normal,
                     Rng& rng, WalkTally& tally, OnExit&& on_exit) {
  const double r_in2 = walk.r_in * walk.r_in;
  const double two_var = 2.0 * walk.sigma * walk.sigma;
  boost::random::exponential_distribution<double> expo(1.0);
  for (std::size_t i = 0; i < pop.size();) {
    Tracked m = pop[i];
    const RadialStep step{normal(rng), two_var * expo(rng)};
    const double x = m.r + step.along;
    const double R2 = x * x + step.across2;
    if (R2 > r_in2) {
      ++tally.attempts;
      if (h > 0 && (m.hazard -= h) <= 0) {
        on_exit(std::sqrt(R2));
        swap_remove(pop, i);
        continue;
      }
      ++tally.reflections;
      m.r = reflect_radial(m.r, step, walk.r_in);
    } else {
      m.r = std::sqrt(R2);
    }
    pop[i] = m;
    ++i;
  }
}

}  // namespace

void validate(const PbsConfig& cfg) {
  mctx::validate(cfg.sys);
  if (cfg.n_runs < 1) throw ConfigError("n_runs must be >= 1");
  if (!(cfg.k_AB >= 0)) throw ConfigError("k_AB must be >= 0");
  mctx::validate(cfg.rates);
  if (cfg.N_MR < 0) throw ConfigError("N_MR must be >= 0");
  if (cfg.reaction_substeps < 1) throw ConfigError("reaction_substeps must be >= 1");
  if (cfg.stride == 0) throw ConfigError("stride must be >= 1");
  if (cfg.mixing_steps < 1) throw ConfigError("mixing_steps must be >= 1");
  if (!(cfg.retire_factor > 1)) throw ConfigError("retire_factor must be > 1");
  const auto dc = derive_constants(cfg.sys);
  transmission_probability(dc.rho_hat_max, cfg.sys.D, cfg.sys.T);
}

Particle brownian_step(const Particle& p, double D, double T, Rng& rng) {
  if (!(T > 0)) throw ConfigError("T must be > 0");
  if (D <= 0) return p;
  Normal normal(0.0, std::sqrt(2.0 * D * T));
  Particle n = p;
  for (auto& x : n.position) x += normal(rng);
  return n;
}

double transmission_probability(double rho_hat, double D, double T) {
  if (!(rho_hat >= 0)) throw ConfigError("rho_hat must be >= 0");
  const double p = rho_hat * std::sqrt(kPi * T / D);
  if (p > 1) {
    throw ConfigError(fmt::format("transmission probability {:g} > 1; reduce T", p));
  }
  return p;
}

Vec3 reflect_off_sphere(const Vec3& from, const Vec3& to, double radius) {
  Vec3 p = from;
  Vec3 q = to;
  const double r2 = radius * radius;
  const bool from_inside = norm2(from) <= r2;
  for (int bounce = 0; bounce < 8; ++bounce) {
    const bool q_inside = norm2(q) <= r2;
    if (q_inside == from_inside) return q;
    const Vec3 v{q[0] - p[0], q[1] - p[1], q[2] - p[2]};
    const double a = norm2(v);
    const double b = 2.0 * dot(p, v);
    const double c = norm2(p) - r2;
    const double disc = std::max(b * b - 4.0 * a * c, 0.0);
    const double root = std::sqrt(disc);
    double s = from_inside ? (-b + root) / (2.0 * a) : (-b - root) / (2.0 * a);
    s = std::clamp(s, 0.0, 1.0);
    const Vec3 hit{p[0] + s * v[0], p[1] + s * v[1], p[2] + s * v[2]};
    const double hn = std::sqrt(norm2(hit));
    const Vec3 n{hit[0] / hn, hit[1] / hn, hit[2] / hn};
    const Vec3 rest{q[0] - hit[0], q[1] - hit[1], q[2] - hit[2]};
    const double along = dot(rest, n);
    q = {hit[0] + rest[0] - 2.0 * along * n[0], hit[1] + rest[1] - 2.0 * along * n[1],
         hit[2] + rest[2] - 2.0 * along * n[2]};
    p = hit;
  }
  // Pathological multi-bounce: mirror the radius instead.
  const double rq = std::sqrt(norm2(q));
  const double target = std::clamp(2.0 * radius - rq, 0.0, from_inside ? radius : 3.0 * radius);
  if (rq == 0) return q;
  return {q[0] * target / rq, q[1] * target / rq, q[2] * target / rq};
}

MembraneOutcome membrane_interaction(const Particle& from, const Particle& proposed,
                                     double rho_hat, double r_in, double D, double T, Rng& rng) {
  const double r2 = r_in * r_in;
  const bool was_inside = norm2(from.position) <= r2;
  const bool now_inside = norm2(proposed.position) <= r2;
  if (was_inside == now_inside) return {proposed, false};
  if (!is_enzyme_family(from.species)) {
    const double p = transmission_probability(rho_hat, D, T);
    if (p > 0 && uniform01(rng) < p) return {proposed, true};
  }
  Particle reflected = proposed;
  reflected.position = reflect_off_sphere(from.position, proposed.position, r_in);
  return {reflected, false};
}

std::int64_t influx_sample(double rho_k, const SystemConfig& cfg, const DerivedConstants& dc,
                           Rng& rng) {
  if (!(rho_k >= 0)) throw ConfigError("negative permeability");
  const double mean = rho_k * dc.V_in * dc.C_out0_A * cfg.N_a * cfg.T;
  if (mean <= 0 || cfg.N_out_A <= 0) return 0;
  const double p = mean / cfg.N_out_A;
  if (p < 1e-12) return std::poisson_distribution<std::int64_t>(mean)(rng);
  const auto n = static_cast<std::int64_t>(std::llround(cfg.N_out_A));
  return std::binomial_distribution<std::int64_t>(n, std::min(p, 1.0))(rng);
}

Vec3 uniform_in_ball(double radius, Rng& rng) {
  std::uniform_real_distribution<double> coord(-radius, radius);
  const double r2 = radius * radius;
  while (true) {
    const Vec3 v{coord(rng), coord(rng), coord(rng)};
    if (norm2(v) <= r2) return v;
  }
}

double uniform_radius(double radius, Rng& rng) { return radius * std::cbrt(uniform01(rng)); }

RadialStep radial_step(double sigma, Rng& rng) {
  RadialStep s;
  s.along = Normal(0.0, sigma)(rng);
  s.across2 = 2.0 * sigma * sigma * exp1(rng);
  return s;
}

double reflected_radius(double r, const RadialStep& step, double radius) {
  return reflect_radial(r, step, radius);
}

std::int64_t react_first_order(Interior& interior, double k_AB, double T, Rng& rng) {
  const double p = -std::expm1(-k_AB * T);
  const auto n = binomial(static_cast<std::int64_t>(interior.a.size()), p, rng);
  for (std::int64_t j = 0; j < n; ++j) {
    std::uniform_int_distribution<std::size_t> pick(0, interior.a.size() - 1);
    const auto i = pick(rng);
    interior.b.push_back(interior.a[i]);
    swap_remove(interior.a, i);
  }
  return n;
}

EnzymeCounts react_enzyme_stochastic(const EnzymeCounts& counts, const EnzymeRates& rates,
                                     double V_in, double N_a, double T, int substeps, Rng& rng) {
  if (substeps < 1) throw ConfigError("substeps must be >= 1");
  EnzymeCounts c = counts;
  if (c.enzyme_total() == 0) return c;
  const double per_count = 1.0 / (V_in * N_a);  // concentration of one molecule
  const double h = T / substeps;
  for (int s = 0; s < substeps; ++s) {
    // E + R <-> ER
    {
      const auto unbind = binomial(c.ER, -std::expm1(-rates.k_m1 * h), rng);
      std::int64_t free_e = c.E;
      const auto bind = sequential_binding(c.R, free_e, rates.k1, per_count, h, rng);
      c.E += unbind - bind;
      c.R += unbind - bind;
      c.ER += bind - unbind;
    }
    // ER <-> ES
    {
      const auto fwd = binomial(c.ER, -std::expm1(-rates.k2 * h), rng);
      const auto back = binomial(c.ES, -std::expm1(-rates.k_m2 * h), rng);
      c.ER += back - fwd;
      c.ES += fwd - back;
    }
    // ES <-> E + S
    {
      const auto release = binomial(c.ES, -std::expm1(-rates.k3 * h), rng);
      std::int64_t free_e = c.E;
      const auto bind = sequential_binding(c.S, free_e, rates.k_m3, per_count, h, rng);
      c.E += release - bind;
      c.S += release - bind;
      c.ES += bind - release;
    }
  }
  return c;
}

std::uint64_t run_seed(std::uint64_t master, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

RunTrace run_single(const PbsConfig& cfg, const PermeabilityWaveform& w, double duration,
                    std::uint64_t seed) {
  const auto& sys = cfg.sys;
  const auto dc = derive_constants(sys);
  Rng rng(seed);
  const double sigma = std::sqrt(2.0 * sys.D * sys.T);
  Normal normal(0.0, sigma);
  boost::random::exponential_distribution<double> expo(1.0);
  const double r_in = sys.r_in;
  const bool enzyme = cfg.mode == Mode::Enzyme;

  const ReleasedMotion motion{sigma, sys.D * sys.T, sys.d, sys.r_RX, cfg.retire_factor * sys.d,
                              cfg.bridge_absorption};

  RunTrace trace;
  trace.columns = enzyme ? std::vector<std::string>{"N_in_R", "N_in_S", "N_out_S", "N_RX_S",
                                                    "N_ER", "N_ES"}
                         : std::vector<std::string>{"N_in_A", "N_in_B", "N_out_B", "N_RX_B"};
  auto& L = trace.ledger;

  Interior in;
  std::vector<double> released;  // distances to the receiver centre
  EnzymeCounts enz;
  enz.E = enzyme ? cfg.N_MR : 0;
  ReleasedTally tally;

  auto fresh = [&]() {
    const double r = cfg.placement == Placement::Uniform
                         ? uniform_radius(r_in, rng)
                         : r_in - std::min(sigma, r_in) * uniform01(rng);
    return Tracked{r, expo(rng)};
  };

  auto record = [&]() {
    std::vector<double> row{static_cast<double>(in.a.size()), static_cast<double>(in.b.size()),
                            static_cast<double>(L.released), static_cast<double>(tally.absorbed)};
    if (enzyme) {
      row.push_back(static_cast<double>(enz.ER));
      row.push_back(static_cast<double>(enz.ES));
    }
    trace.values.push_back(std::move(row));
  };

  const InteriorWalk walk{sigma, r_in};
  WalkTally walk_tally;
  auto move_interior = [&](std::vector<Tracked>& pop, bool signal, double h) {
    if (signal) {
      move_population(pop, walk, h, normal, rng, walk_tally, [&](double R) {
        ++L.released;
        if (cfg.track_receiver) released.push_back(exit_distance(R, sys.d, rng));
      });
    } else {
      move_population(pop, walk, h, normal, rng, walk_tally, [&](double) { ++L.escaped_harvest; });
    }
  };

  const auto steps = std::llround(duration / sys.T);
  int closed_steps = 0;
  bool stale = false;
  record();
  for (std::int64_t k = 1; k <= steps; ++k) {
    const double rho = w.at(static_cast<double>(k - 1) * sys.T);
    const double p_tr = transmission_probability(rho_hat_from_rho(rho, r_in), sys.D, sys.T);
    const double h = p_tr >= 1 ? std::numeric_limits<double>::infinity() : -std::log1p(-p_tr);

    const auto entering = influx_sample(rho, sys, dc, rng);
    L.influx += entering;
    for (std::int64_t j = 0; j < entering; ++j) in.a.push_back(fresh());

    if (rho > 0) {
      if (stale) {
        for (auto& m : in.a) m.r = uniform_radius(r_in, rng);
        for (auto& m : in.b) m.r = uniform_radius(r_in, rng);
        stale = false;
      }
      closed_steps = 0;
      move_interior(in.a, false, h);
      move_interior(in.b, true, h);
    } else if (!cfg.lazy_closed_mixing || closed_steps < cfg.mixing_steps) {
      ++closed_steps;
      move_interior(in.a, false, 0.0);
      move_interior(in.b, true, 0.0);
    } else {
      stale = true;
    }

    if (enzyme) {
      enz.R = static_cast<std::int64_t>(in.a.size());
      enz.S = static_cast<std::int64_t>(in.b.size());
      const auto next = react_enzyme_stochastic(enz, cfg.rates, dc.V_in, sys.N_a, sys.T,
                                                cfg.reaction_substeps, rng);
      auto resize = [&](std::vector<Tracked>& pop, std::int64_t target) {
        while (static_cast<std::int64_t>(pop.size()) > target) {
          std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
          swap_remove(pop, pick(rng));
        }
        while (static_cast<std::int64_t>(pop.size()) < target) {
          pop.push_back({uniform_radius(r_in, rng), expo(rng)});
        }
      };
      resize(in.a, next.R);
      resize(in.b, next.S);
      enz = next;
    } else if (cfg.k_AB > 0) {
      react_first_order(in, cfg.k_AB, sys.T, rng);
    }

    if (cfg.track_receiver) advance_released(released, motion, normal, rng, tally);

    if (static_cast<std::size_t>(k) % cfg.stride == 0) record();
  }

  L.crossing_attempts = walk_tally.attempts;
  L.reflections = walk_tally.reflections;
  L.absorbed = tally.absorbed;
  L.retired = tally.retired;
  L.outside = cfg.track_receiver ? static_cast<std::int64_t>(released.size()) : L.released;
  L.inside_free = static_cast<std::int64_t>(in.a.size() + in.b.size());
  L.inside_bound = enz.ER + enz.ES;
  return trace;
}

PbsResult run_pbs(const PbsConfig& cfg, const PermeabilityWaveform& w, double duration) {
  validate(cfg);
  if (!(duration > 0)) throw ConfigError("duration must be > 0");
  const auto n_runs = static_cast<std::size_t>(cfg.n_runs);
  std::vector<RunTrace> traces(n_runs);

  unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_runs));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n_runs; i = next++) {
      traces[i] = run_single(cfg, w, duration, run_seed(cfg.seed, i));
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  }

  // Welford accumulation in run order, so the result does not depend on
  // scheduling.
  const auto& cols = traces.front().columns;
  const std::size_t rows = traces.front().values.size();
  std::vector<std::vector<double>> mean(cols.size(), std::vector<double>(rows, 0.0));
  std::vector<std::vector<double>> m2(cols.size(), std::vector<double>(rows, 0.0));
  for (std::size_t r = 0; r < n_runs; ++r) {
    const double n = static_cast<double>(r + 1);
    for (std::size_t row = 0; row < rows; ++row) {
      for (std::size_t c = 0; c < cols.size(); ++c) {
        const double x = traces[r].values[row][c];
        const double delta = x - mean[c][row];
        mean[c][row] += delta / n;
        m2[c][row] += delta * (x - mean[c][row]);
      }
    }
  }

  PbsResult result;
  std::vector<double> t(rows), rho(rows);
  for (std::size_t row = 0; row < rows; ++row) {
    t[row] = static_cast<double>(row * cfg.stride) * cfg.sys.T;
    rho[row] = w.at(t[row]);
  }
  result.series.add_column("t", std::move(t));
  result.series.add_column("rho", std::move(rho));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    std::vector<double> sd(rows, 0.0);
    if (n_runs > 1) {
      for (std::size_t row = 0; row < rows; ++row) {
        sd[row] = std::sqrt(m2[c][row] / static_cast<double>(n_runs - 1));
      }
    }
    result.series.add_column(cols[c], std::move(mean[c]));
    result.series.add_column(cols[c] + "_std", std::move(sd));
  }
  result.series.set_meta("pbs_seed", std::to_string(cfg.seed));
  result.series.set_meta("pbs_runs", std::to_string(cfg.n_runs));
  result.ledgers.reserve(n_runs);
  for (auto& tr : traces) result.ledgers.push_back(tr.ledger);
  return result;
}

EffluxCalibration membrane_efflux(const PbsConfig& cfg, std::size_t n_particles,
                                  std::size_t steps) {
  mctx::validate(cfg.sys);
  if (n_particles == 0 || steps == 0) throw ConfigError("need particles and steps");
  const auto& sys = cfg.sys;
  const double sigma = std::sqrt(2.0 * sys.D * sys.T);
  const double rho = sys.rho_max;
  const double p_tr = transmission_probability(rho_hat_from_rho(rho, sys.r_in), sys.D, sys.T);
  const double h = -std::log1p(-p_tr);
  Rng rng(cfg.seed);
  Normal normal(0.0, sigma);
  boost::random::exponential_distribution<double> expo(1.0);
  std::vector<Tracked> pop(n_particles);
  for (auto& m : pop) m = {uniform_radius(sys.r_in, rng), expo(rng)};
  // Let the radial distribution settle into the reflected walk's own
  // stationary profile before counting.
  WalkTally tally;
  for (int k = 0; k < 200; ++k) move_population(pop, {sigma, sys.r_in}, 0.0, normal, rng, tally, [](double) {});
  tally = {};
  EffluxCalibration out;
  double exposure = 0;  // sum over steps of molecules present [molecule steps]
  std::int64_t left = 0;
  for (std::size_t k = 0; k < steps; ++k) {
    exposure += static_cast<double>(pop.size());
    move_population(pop, {sigma, sys.r_in}, h, normal, rng, tally, [&](double) { ++left; });
  }
  out.transmitted = left;
  out.attempts_per_step = static_cast<double>(tally.attempts) / exposure;
  out.measured_rate = static_cast<double>(left) / (exposure * sys.T);
  out.expected_rate = rho;
  return out;
}

ImpulseAbsorption impulse_absorption(const PbsConfig& cfg, std::size_t n_particles,
                                     double t_max) {
  mctx::validate(cfg.sys);
  if (n_particles == 0) throw ConfigError("need at least one particle");
  if (cfg.stride == 0) throw ConfigError("stride must be >= 1");
  const auto& sys = cfg.sys;
  const double sigma = std::sqrt(2.0 * sys.D * sys.T);
  const ReleasedMotion motion{sigma, sys.D * sys.T, sys.d, sys.r_RX, cfg.retire_factor * sys.d,
                              cfg.bridge_absorption};
  Rng rng(cfg.seed);
  Normal normal(0.0, sigma);
  std::vector<double> dist(n_particles, sys.d);
  ReleasedTally tally;
  ImpulseAbsorption out;
  out.t.push_back(0.0);
  out.fraction.push_back(0.0);
  const auto steps = std::llround(t_max / sys.T);
  for (std::int64_t k = 1; k <= steps; ++k) {
    advance_released(dist, motion, normal, rng, tally);
    if (static_cast<std::size_t>(k) % cfg.stride == 0) {
      out.t.push_back(static_cast<double>(k) * sys.T);
      out.fraction.push_back(static_cast<double>(tally.absorbed) / static_cast<double>(n_particles));
    }
  }
  return out;
}

}  // namespace mctx::pbs
