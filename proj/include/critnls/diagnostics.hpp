#pragma once

#include "critnls/evolution.hpp"

#include <string>
#include <vector>

namespace critnls {

/// Time-quadrature of ||u(t)||_{L^q}^q over the recorded trajectory, with
/// q = 2(N+2)/(N-2) (the diagonal Strichartz exponent). Recomputed from the
/// records so it can be cross-checked against the accumulator evolve carries.
double strichartz_accumulate(const std::vector<TrajectoryRecord>& records);

/// Ratio of the accumulator increment over the last half of the run to the
/// increment over the preceding quarter: < 1 means the space-time norm is
/// saturating, >= 1 means it is still growing.
double strichartz_increment_ratio(const std::vector<TrajectoryRecord>& records);

struct SlopeCheck {
  std::vector<double> times;   // midpoints of consecutive record pairs
  std::vector<double> slopes;  // finite-difference d/dt virial_M
  bool all_negative = false;
  double fitted_A_star = 0.0;  // -slope of the least-squares line through M(t)
  double fitted_T0 = 0.0;      // 2 |M(0)| / A*
  bool linear_bound_holds = false;  // M(t) <= -A* t / 2 for t >= T0
  bool linear_bound_checked = false;
};

/// Finite-difference slopes of the recorded virial quantity, the
/// all-slopes-negative verdict for negative-energy data, and the fitted
/// linear decrease bound.
SlopeCheck virial_slope_check(const std::vector<TrajectoryRecord>& records,
                              double E0);

struct TrappingReport {
  bool hypothesis_violated = false;
  std::string reason;
  double delta0 = 0.0;     // 1 - E(u0)/E(W)
  double delta1 = 0.0;     // worst margin of grad_sq(t) <= (1-delta1) grad_W
  double delta_bar = 0.0;  // worst margin of (grad - |u|^{2*}) >= delta_bar grad
  double min_energy = 0.0;
  std::vector<bool> grad_bound_ok;    // per-sample (7.4)
  std::vector<bool> coercivity_ok;    // per-sample (7.5)
  std::vector<bool> energy_sign_ok;   // per-sample (7.6)
  bool all_hold = false;
};

/// Per-sample check of the energy-trapping inequalities against the
/// ground-state threshold pair. The empirical deltas are the worst margins
/// observed along the run; no values are asserted beyond positivity.
TrappingReport trapping_check(const std::vector<TrajectoryRecord>& records,
                              double E_W, double grad_W_sq,
                              double energy_tol = 1e-8);

struct EquivalenceReport {
  bool empty = false;
  double ratio_min = 0.0;  // min over samples of E(t)/grad_sq(t)
  double ratio_max = 0.0;
  double band_lo = 0.0;    // delta-tilde from the coercivity bound
  double band_hi = 0.0;    // (1 + ||V||_{N/2}/S)/2
  bool within_band = false;
};

/// Comparability constants of E(u(t)) and grad_sq(t) over a trapped run,
/// against the band derived from the certificate norms and the Sobolev
/// constant on this grid.
EquivalenceReport equivalence_check(const std::vector<TrajectoryRecord>& records,
                                    double v_lq_norm, double v_neg_lq_norm,
                                    double S, int dim);

struct VirialAdjudication {
  std::vector<double> times;        // interior record times
  std::vector<double> fd_second;    // centered d^2/dt^2 of int psi |u|^2
  std::vector<double> paper_form;   // candidate with the 4 Lap(psi) leading term
  std::vector<double> hessian_form; // candidate with the 4 psi'' leading term
  std::vector<double> fd_first;     // centered d/dt of int psi |u|^2
  std::vector<double> virial_M;     // recorded M at the same times
  double paper_rel_err = 0.0;       // worst relative error over the samples
  double hessian_rel_err = 0.0;
  double first_order_rel_err = 0.0; // M vs centered d/dt int psi |u|^2
  std::string matched_form;         // "hessian", "paper", or "none"
};

/// Adjudicates the two second-derivative candidates against the
/// finite-difference oracle built from the recorded int psi |u|^2 series.
VirialAdjudication adjudicate_virial_forms(
    const std::vector<TrajectoryRecord>& records, double match_tol = 5e-3);

/// Writes the adjudication table (t, fd_value, paper_form, hessian_form).
void write_adjudication_table(const VirialAdjudication& adj,
                              const std::string& path);

}  // namespace critnls
