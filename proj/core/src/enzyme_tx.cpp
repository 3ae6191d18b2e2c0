#include "mctx/enzyme_tx.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

namespace mctx {

void validate(const EnzymeRates& r) {
  for (double v : {r.k1, r.k_m1, r.k2, r.k_m2, r.k3, r.k_m3}) {
    if (!(v >= 0) || !std::isfinite(v)) throw ConfigError("enzyme rates must be finite and >= 0");
  }
}

double equilibrium_constant(const EnzymeRates& r) {
  const double den = r.k_m1 * r.k_m2 * r.k_m3;
  if (!(den > 0)) throw ConfigError("equilibrium constant needs positive backward rates");
  return r.k1 * r.k2 * r.k3 / den;
}

namespace {

// a + b <-> c with forward kf (a + b -> c) and backward kb (c -> a + b).
void relax_association(double& a, double& b, double& c, double kf, double kb, double dt,
                       ReactionDiagnostics* diag) {
  const double limiting = std::min(a, b);
  const double partner = std::max(a, b);
  const double f = kf * partner;
  const double rate = f + kb;
  if (!(rate > 0)) return;
  const double total = limiting + c;
  const double c_eq = f / rate * total;
  const double c_new = c_eq + (c - c_eq) * std::exp(-rate * dt);
  double extent = c_new - c;
  // Exact arithmetic keeps extent in [-c, limiting]; guard rounding only.
  if (extent > limiting || extent < -c) {
    extent = std::clamp(extent, -c, limiting);
    if (diag) ++diag->clamps;
  }
  a -= extent;
  b -= extent;
  c += extent;
  a = std::max(a, 0.0);
  b = std::max(b, 0.0);
}

// x <-> y with forward kf and backward kb.
void relax_isomerization(double& x, double& y, double kf, double kb, double dt) {
  const double rate = kf + kb;
  if (!(rate > 0)) return;
  const double total = x + y;
  const double y_eq = kf / rate * total;
  const double y_new = y_eq + (y - y_eq) * std::exp(-rate * dt);
  const double extent = std::clamp(y_new - y, -y, x);
  x -= extent;
  y += extent;
}

void forward_chain(EnzymeTxState& s, const EnzymeRates& r, double dt, ReactionDiagnostics* diag) {
  relax_association(s.C_E, s.C_in_R, s.C_ER, r.k1, r.k_m1, dt, diag);
  relax_isomerization(s.C_ER, s.C_ES, r.k2, r.k_m2, dt);
  // ES -> E + S is the "forward" direction here, so the association runs
  // with k_m3 and dissociation with k3.
  relax_association(s.C_E, s.C_in_S, s.C_ES, r.k_m3, r.k3, dt, diag);
}

void backward_chain(EnzymeTxState& s, const EnzymeRates& r, double dt,
                    ReactionDiagnostics* diag) {
  relax_association(s.C_E, s.C_in_S, s.C_ES, r.k_m3, r.k3, dt, diag);
  relax_isomerization(s.C_ER, s.C_ES, r.k2, r.k_m2, dt);
  relax_association(s.C_E, s.C_in_R, s.C_ER, r.k1, r.k_m1, dt, diag);
}

}  // namespace

EnzymeTxState react_enzyme_substep(const EnzymeTxState& s, const EnzymeRates& r, double dt,
                                   SplitOrder order, ReactionDiagnostics* diag) {
  EnzymeTxState n = s;
  if (order == SplitOrder::Sequential) {
    forward_chain(n, r, dt, diag);
  } else {
    forward_chain(n, r, 0.5 * dt, diag);
    backward_chain(n, r, 0.5 * dt, diag);
  }
  return n;
}

PracticalParams make_practical_params(const SystemConfig& cfg, const EnzymeRates& rates) {
  const auto dc = derive_constants(cfg);
  PracticalParams p;
  p.rates = rates;
  p.C_out0_R = dc.C_out0_A;
  p.V_in = dc.V_in;
  p.V_out = dc.V_out;
  p.T = cfg.T;
  p.N_a = cfg.N_a;
  validate(p);
  return p;
}

void validate(const PracticalParams& p) {
  validate(p.rates);
  if (!(p.V_in > 0) || !(p.V_out > 0)) throw ConfigError("volumes must be > 0");
  if (!(p.T > 0)) throw ConfigError("T must be > 0");
  if (!(p.C_out0_R >= 0)) throw ConfigError("C_out0_R must be >= 0");
  if (p.reaction_substeps < 1) throw ConfigError("reaction_substeps must be >= 1");
}

EnzymeTxState step_practical(const EnzymeTxState& s, double rho_k, const PracticalParams& p,
                             ReactionDiagnostics* diag) {
  if (!(rho_k >= 0)) throw ConfigError(fmt::format("negative permeability {:g}", rho_k));
  EnzymeTxState reacted = s;
  const double h = p.T / p.reaction_substeps;
  for (int i = 0; i < p.reaction_substeps; ++i) {
    reacted = react_enzyme_substep(reacted, p.rates, h, p.split, diag);
  }

  const double keep = std::exp(-rho_k * p.T);
  EnzymeTxState n = reacted;
  n.k = s.k + 1;
  n.C_in_R = keep * s.C_in_R + p.T * rho_k * p.C_out0_R + (reacted.C_in_R - s.C_in_R);
  n.C_in_S = keep * s.C_in_S + (reacted.C_in_S - s.C_in_S);
  if (n.C_in_R < 0 || n.C_in_S < 0) {
    n.C_in_R = std::max(n.C_in_R, 0.0);
    n.C_in_S = std::max(n.C_in_S, 0.0);
    if (diag) ++diag->clamps;
  }
  n.C_out_S = s.C_out_S + rho_k * (p.V_in / p.V_out) * p.T * n.C_in_S;
  return n;
}

TimeSeriesRecord simulate_practical(const PracticalParams& p, double N_MR,
                                    const PermeabilityWaveform& w, double duration,
                                    std::size_t stride, ReactionDiagnostics* diag) {
  validate(p);
  if (!(N_MR >= 0) || !std::isfinite(N_MR)) throw ConfigError("N_MR must be >= 0");
  if (stride == 0) throw ConfigError("stride must be >= 1");
  const auto steps = std::llround(duration / p.T);
  if (!(duration >= 0)) throw ConfigError("duration must be >= 0");
  const auto rows = static_cast<std::size_t>(steps) / stride + 1;

  std::vector<double> t, rho, n_r, n_s, n_out, n_er, n_es;
  for (auto* v : {&t, &rho, &n_r, &n_s, &n_out, &n_er, &n_es}) v->reserve(rows);

  const double in_scale = p.V_in * p.N_a;
  const double out_scale = p.V_out * p.N_a;
  auto record = [&](const EnzymeTxState& s) {
    const double time = static_cast<double>(s.k) * p.T;
    t.push_back(time);
    rho.push_back(w.at(time));
    n_r.push_back(s.C_in_R * in_scale);
    n_s.push_back(s.C_in_S * in_scale);
    n_out.push_back(s.C_out_S * out_scale);
    n_er.push_back(s.C_ER * in_scale);
    n_es.push_back(s.C_ES * in_scale);
  };

  EnzymeTxState s;
  s.C_E = N_MR / in_scale;
  record(s);
  for (std::int64_t k = 1; k <= steps; ++k) {
    s = step_practical(s, w.at(static_cast<double>(k - 1) * p.T), p, diag);
    if (static_cast<std::size_t>(k) % stride == 0) record(s);
  }

  TimeSeriesRecord rec;
  rec.add_column("t", std::move(t));
  rec.add_column("rho", std::move(rho));
  rec.add_column("N_in_R", std::move(n_r));
  rec.add_column("N_in_S", std::move(n_s));
  rec.add_column("N_out_S", std::move(n_out));
  rec.add_column("N_ER", std::move(n_er));
  rec.add_column("N_ES", std::move(n_es));
  return rec;
}

}  // namespace mctx
