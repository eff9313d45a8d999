#pragma once

#include "critnls/diagnostics.hpp"
#include "critnls/evolution.hpp"
#include "critnls/groundstate.hpp"

#include <optional>
#include <string>
#include <vector>

namespace critnls {

struct PotentialHypotheses {
  bool continuous = true;           // V continuous on R^N (fails at 0 for sigma>0)
  bool grad_x_nonpositive = true;   // x . grad V <= 0
  bool neg_lq_below_S = true;       // ||V_-||_{N/2} <= S
  bool admissible = true;           // Kato certificate
};

PotentialHypotheses potential_hypotheses(
    const std::optional<YukawaPotential>& pot, double S);

struct RegimeFlags {
  bool energy_negative = false;  // E(u0) < 0
  bool below_threshold = false;  // E(u0) < E(W) and grad0 < grad_W
  double E0 = 0.0;
  double grad0 = 0.0;
  PotentialHypotheses hypotheses;
};

RegimeFlags classify_initial(const Field& u0, const SampledPotential& V,
                             const ThresholdPair& thr,
                             const PotentialHypotheses& hyp);

/// Cauchy residuals of the back-propagated states w(t) = e^{+itL} u(t):
/// residual_i = ||w(t_{i+1}) - w(t_i)||_{H^1}. Convergence of w is the
/// finite-horizon stand-in for convergence of u to a linear flow.
std::vector<double> scattering_residual(
    const std::vector<std::pair<double, Field>>& snapshots,
    const SampledPotential& V, double lin_dt = 2e-3);

enum class Outcome { ScatteringEvidence, BlowUpEvidence, Undecided };

const char* to_string(Outcome o);

struct Verdict {
  Outcome outcome = Outcome::Undecided;
  RegimeFlags flags;
  Termination termination = Termination::Completed;
  double final_grad_ratio = 0.0;
  double strichartz_saturation = 0.0;   // late/early increment ratio
  double linear_residual_ratio = 0.0;   // last/first back-propagation residual
  int virial_slope_sign = 0;            // -1 all negative, +1 all positive, 0 mixed
  double boundary_mass_fraction = 0.0;  // worst fraction seen in the outer 10%
  std::string reason;
};

/// Initial-data kinds understood by the dichotomy driver. "bubble" is the
/// Aubin-Talenti profile smoothly truncated inside the domain so it carries
/// finite mass (the raw bubble is not L^2 for N <= 4).
enum class InitialKind { Gaussian, Bubble, ScaledGroundState };

InitialKind initial_kind_from_string(const std::string& s);
const char* to_string(InitialKind k);

Field initial_data(InitialKind kind, double amplitude, double width,
                   GridPtr grid, const GroundState* gs = nullptr);

struct DichotomyInputs {
  std::optional<YukawaPotential> pot;
  GridPtr grid;
  EvolutionConfig cfg;
  double psi_R = 0.0;        // 0 -> r_max/4
  int snapshot_count = 8;    // back-propagation probes
};

/// Full dichotomy experiment for one initial datum: classify against the
/// ground-state threshold, evolve, weigh blow-up detection and virial slopes
/// against scattering-style evidence, and emit a Verdict. Runs whose mass
/// reaches the outer 10% of the domain are invalidated (truncation artifacts
/// masquerade as dynamics).
Verdict run_dichotomy(const Field& u0, const DichotomyInputs& in,
                      const GroundState& gs, const SampledPotential& Vs,
                      EvolveResult* evolution_out = nullptr);

struct SweepCell {
  std::optional<YukawaPotential> pot;
  InitialKind kind = InitialKind::Bubble;
  double amplitude = 1.0;
  double width = 1.0;
};

struct SweepRow {
  SweepCell cell;
  double E0 = 0.0, E_W = 0.0, grad0 = 0.0, grad_W = 0.0;
  Verdict verdict;
  std::string error;  // per-cell failure, sweep continues
};

/// Supplies ground states to sweep cells; the default runs the shooting
/// bisection, a CLI-provided one can consult the cache instead of re-shooting.
using GroundStateProvider = std::function<GroundState(
    const std::optional<YukawaPotential>&, GridPtr)>;

/// Runs run_dichotomy for every cell; cells are independent and execute on up
/// to CRITNLS_NUM_THREADS workers; results keep input order.
std::vector<SweepRow> sweep(const std::vector<SweepCell>& cells, GridPtr grid,
                            const EvolutionConfig& cfg,
                            const GroundStateProvider& provider = {});

/// Mass fraction in the outer 10% of the domain, the truncation-artifact guard.
double boundary_mass_fraction(const Field& u);

}  // namespace critnls
