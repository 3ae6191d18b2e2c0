#include "mctx/ideal_tx.hpp"

#include <cmath>
#include <vector>

#include <fmt/format.h>

namespace mctx {

IdealParams make_ideal_params(const SystemConfig& cfg, double k_AB) {
  const auto dc = derive_constants(cfg);
  IdealParams p;
  p.k_AB = k_AB;
  p.C_out0_A = dc.C_out0_A;
  p.V_in = dc.V_in;
  p.V_out = dc.V_out;
  p.T = cfg.T;
  p.N_a = cfg.N_a;
  validate(p);
  return p;
}

void validate(const IdealParams& p) {
  if (!(p.k_AB >= 0) || !std::isfinite(p.k_AB)) throw ConfigError("k_AB must be >= 0");
  if (!(p.V_in > 0) || !(p.V_out > 0)) throw ConfigError("volumes must be > 0");
  if (!(p.T > 0)) throw ConfigError("T must be > 0");
  if (!(p.C_out0_A >= 0)) throw ConfigError("C_out0_A must be >= 0");
}

IdealTxState step_ideal(const IdealTxState& s, double rho_k, const IdealParams& p) {
  if (!(rho_k >= 0)) throw ConfigError(fmt::format("negative permeability {:g}", rho_k));
  IdealTxState n;
  n.k = s.k + 1;
  n.C_in_A = std::exp(-(rho_k + p.k_AB) * p.T) * s.C_in_A + p.T * rho_k * p.C_out0_A;
  n.C_in_B = std::exp(-rho_k * p.T) * s.C_in_B + p.T * p.k_AB * n.C_in_A;
  n.C_out_B = s.C_out_B + rho_k * (p.V_in / p.V_out) * p.T * n.C_in_B;
  return n;
}

std::int64_t step_count(double duration, double T) {
  if (!(duration >= 0) || !std::isfinite(duration)) throw ConfigError("duration must be >= 0");
  return std::llround(duration / T);
}

TimeSeriesRecord simulate_ideal(const IdealParams& p, const PermeabilityWaveform& w,
                                double duration, std::size_t stride) {
  validate(p);
  if (stride == 0) throw ConfigError("stride must be >= 1");
  const auto steps = step_count(duration, p.T);
  const auto rows = static_cast<std::size_t>(steps) / stride + 1;

  std::vector<double> t, rho, n_in_a, n_in_b, n_out_b;
  t.reserve(rows);
  rho.reserve(rows);
  n_in_a.reserve(rows);
  n_in_b.reserve(rows);
  n_out_b.reserve(rows);

  const double in_scale = p.V_in * p.N_a;
  const double out_scale = p.V_out * p.N_a;
  auto record = [&](const IdealTxState& s) {
    const double time = static_cast<double>(s.k) * p.T;
    t.push_back(time);
    rho.push_back(w.at(time));
    n_in_a.push_back(s.C_in_A * in_scale);
    n_in_b.push_back(s.C_in_B * in_scale);
    n_out_b.push_back(s.C_out_B * out_scale);
  };

  IdealTxState s;
  record(s);
  for (std::int64_t k = 1; k <= steps; ++k) {
    const double rho_k = w.at(static_cast<double>(k - 1) * p.T);
    s = step_ideal(s, rho_k, p);
    if (static_cast<std::size_t>(k) % stride == 0) record(s);
  }

  TimeSeriesRecord rec;
  rec.add_column("t", std::move(t));
  rec.add_column("rho", std::move(rho));
  rec.add_column("N_in_A", std::move(n_in_a));
  rec.add_column("N_in_B", std::move(n_in_b));
  rec.add_column("N_out_B", std::move(n_out_b));
  return rec;
}

double ideal_open_fixed_point(const IdealParams& p, double rho) {
  if (!(rho >= 0)) throw ConfigError("rho must be >= 0");
  if (rho + p.k_AB <= 0) throw ConfigError("fixed point undefined for rho = k_AB = 0");
  return rho * p.C_out0_A / (rho + p.k_AB);
}

double ideal_open_fixed_point_discrete(const IdealParams& p, double rho) {
  if (!(rho >= 0)) throw ConfigError("rho must be >= 0");
  if (rho + p.k_AB <= 0) throw ConfigError("fixed point undefined for rho = k_AB = 0");
  return p.T * rho * p.C_out0_A / -std::expm1(-(rho + p.k_AB) * p.T);
}

}  // namespace mctx
