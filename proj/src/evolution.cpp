#include "critnls/evolution.hpp"

#include "critnls/propagator.hpp"

#include <cmath>
#include <stdexcept>

namespace critnls {

void EvolutionConfig::validate() const {
  if (!(dt > 0.0) || dt > 1e-2)
    throw std::invalid_argument("EvolutionConfig: need 0 < dt <= 1e-2");
  if (!(t_end > 0.0)) throw std::invalid_argument("EvolutionConfig: t_end > 0");
  if (record_stride < 1)
    throw std::invalid_argument("EvolutionConfig: record_stride >= 1");
  if (!(blowup_grad_factor > 1.0))
    throw std::invalid_argument("EvolutionConfig: blowup_grad_factor > 1");
  if (!(dt_floor > 0.0))
    throw std::invalid_argument("EvolutionConfig: dt_floor > 0");
  const double n = t_end / dt;
  if (std::abs(n - std::llround(n)) > 1e-9 * std::max(1.0, n))
    throw std::invalid_argument("EvolutionConfig: t_end/dt must be integral");
}

long long EvolutionConfig::steps() const { return std::llround(t_end / dt); }

const char* to_string(Termination t) {
  switch (t) {
    case Termination::Completed: return "Completed";
    case Termination::BlowupDetected: return "BlowupDetected";
    case Termination::NumericalBreakdown: return "NumericalBreakdown";
  }
  return "?";
}

namespace {

void phase_step_inplace(Field& u, const SampledPotential& V, double dt,
                        bool nonlinear) {
  require_same_grid(u, *V.grid);
  const int N = u.grid().dim();
  const double p = 2.0 / (N - 2.0);  // |u|^{4/(N-2)} = (|u|^2)^p
  for (int j = 0; j < u.size(); ++j) {
    double phase = -V.values[j];
    if (nonlinear) {
      const double a2 = std::norm(u[j]);
      phase += (N == 3) ? a2 * a2 : std::pow(a2, p);
    }
    u[j] *= std::polar(1.0, dt * phase);
  }
}

double crit_norm_pow(const Field& u) {
  const int N = u.grid().dim();
  const double two_star = 2.0 * N / (N - 2.0);
  return std::pow(lp_norm(u, two_star), two_star);
}

// Strang composition with the potential inside the Crank-Nicolson linear
// half-steps. Putting V in the pointwise phase instead loses an order of
// accuracy for r^{-sigma} potentials: the dt*V(r_1) rotation at the first
// node grows under grid refinement.
struct Stepper {
  LinearPropagator half;
  const RadialGrid* grid;
  double dt;
  bool nonlinear;

  Stepper(GridPtr g, const SampledPotential& pot, double dt_, bool nl)
      : half(g, pot.values, 0.5 * dt_), grid(g.get()), dt(dt_), nonlinear(nl) {}

  void step(Field& u) const {
    half.apply(u);
    if (nonlinear) {
      const int N = grid->dim();
      const double p = 2.0 / (N - 2.0);
      for (int j = 0; j < u.size(); ++j) {
        const double a2 = std::norm(u[j]);
        const double phase = (N == 3) ? a2 * a2 : std::pow(a2, p);
        u[j] *= std::polar(1.0, dt * phase);
      }
    }
    half.apply(u);
  }
};

}  // namespace

Field phase_step(const Field& u, const SampledPotential& V, double dt) {
  if (!std::isfinite(dt)) throw std::domain_error("phase_step: dt not finite");
  Field out = u;
  phase_step_inplace(out, V, dt, true);
  return out;
}

Field strang_step(const Field& u, const SampledPotential& V, double dt) {
  Stepper st(u.grid_ptr(), V, dt, true);
  Field out = u;
  st.step(out);
  return out;
}

EvolveResult evolve(const Field& u0, const SampledPotential& V,
                    const EvolutionConfig& cfg, const RecordSink& sink,
                    const EvolveProbes& probes) {
  cfg.validate();
  require_same_grid(u0, *V.grid);
  if (!u0.finite()) throw std::invalid_argument("evolve: u0 has non-finite entries");

  EvolveResult res;
  Field u = u0;
  Field ulin = u0;
  Stepper st(u.grid_ptr(), V, cfg.dt, true);
  Stepper st_lin(u.grid_ptr(), V, cfg.dt, false);

  const double grad0 = grad_norm_sq(u0);
  const double rec_dt = cfg.record_stride * cfg.dt;

  double accum = 0.0;
  double prev_crit = 0.0;
  int records_emitted = 0;

  auto emit = [&](double t) {
    TrajectoryRecord rec;
    rec.t = t;
    rec.mass = mass(u);
    rec.energy = total_energy(u, V);
    rec.grad_sq = grad_norm_sq(u);
    rec.crit_norm_pow = crit_norm_pow(u);
    if (records_emitted > 0)
      accum += 0.5 * (prev_crit + rec.crit_norm_pow) * rec_dt;
    prev_crit = rec.crit_norm_pow;
    rec.strichartz_accum = accum;
    if (probes.psi) {
      rec.virial_M = virial_M(u, *probes.psi);
      rec.psi_mass = psi_weighted_mass(u, *probes.psi);
      rec.rhs_paper = virial_rhs_paper(u, V, *probes.psi).total;
      rec.rhs_hessian = virial_rhs_hessian(u, V, *probes.psi).total;
    }
    if (probes.track_linear) rec.h1_vs_linear = std::sqrt(h1_norm_sq(u - ulin));
    res.records.push_back(rec);
    if (sink) sink(rec);
    if (probes.snapshot_stride > 0 &&
        records_emitted % probes.snapshot_stride == 0)
      res.snapshots.emplace_back(t, u);
    ++records_emitted;
  };

  emit(0.0);

  const long long n_steps = cfg.steps();
  for (long long n = 1; n <= n_steps; ++n) {
    st.step(u);
    if (probes.track_linear) st_lin.step(ulin);
    if (!u.finite()) {
      res.termination = Termination::NumericalBreakdown;
      res.final = u;
      return res;
    }
    const bool record_now = (n % cfg.record_stride == 0) || n == n_steps;
    const double g = grad_norm_sq(u);
    if (grad0 > 0.0 && g > cfg.blowup_grad_factor * grad0) {
      emit(n * cfg.dt);
      res.termination = Termination::BlowupDetected;
      res.final = u;
      return res;
    }
    if (record_now) emit(n * cfg.dt);
  }
  res.termination = Termination::Completed;
  res.final = u;
  return res;
}

Field linear_evolve(const Field& u0, const SampledPotential& V, double t,
                    double dt) {
  require_same_grid(u0, *V.grid);
  if (t == 0.0) return u0;
  const double sgn = (t > 0.0) ? 1.0 : -1.0;
  const double T = std::abs(t);
  const long long n_full = static_cast<long long>(T / dt);
  const double rest = T - n_full * dt;

  Field u = u0;
  if (n_full > 0) {
    Stepper st(u.grid_ptr(), V, sgn * dt, false);
    for (long long n = 0; n < n_full; ++n) st.step(u);
  }
  if (rest > 1e-15 * T) {
    Stepper st(u.grid_ptr(), V, sgn * rest, false);
    st.step(u);
  }
  return u;
}

PerturbationReport perturbation_check(const Field& u0, const Field& delta,
                                      const SampledPotential& V,
                                      const EvolutionConfig& cfg) {
  cfg.validate();
  require_same_grid(u0, delta);
  PerturbationReport rep;
  rep.delta_h1 = std::sqrt(h1_norm_sq(delta));
  const double u0_h1 = std::sqrt(h1_norm_sq(u0));
  if (rep.delta_h1 > 1e-3 * u0_h1)
    throw std::invalid_argument(
        "perturbation_check: ||delta||_{H1} must be <= 1e-3 ||u0||_{H1}");

  Field u = u0;
  Field v = u0 + delta;
  Stepper st(u.grid_ptr(), V, cfg.dt, true);

  auto push = [&](double t) {
    rep.times.push_back(t);
    const double div = std::sqrt(h1_norm_sq(v - u));
    rep.divergence.push_back(div);
    rep.max_divergence = std::max(rep.max_divergence, div);
  };
  push(0.0);
  const long long n_steps = cfg.steps();
  for (long long n = 1; n <= n_steps; ++n) {
    st.step(u);
    st.step(v);
    if (n % cfg.record_stride == 0 || n == n_steps) push(n * cfg.dt);
  }
  return rep;
}

}  // namespace critnls
