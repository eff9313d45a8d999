#pragma once

#include "critnls/potential.hpp"
#include "critnls/radial.hpp"
#include "critnls/virial.hpp"

#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace critnls {

struct EvolutionConfig {
  double dt = 1e-3;
  double t_end = 2.0;
  int record_stride = 50;
  double blowup_grad_factor = 25.0;
  double dt_floor = 1e-8;

  void validate() const;
  long long steps() const;
};

struct TrajectoryRecord {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double grad_sq = 0.0;
  double virial_M = std::numeric_limits<double>::quiet_NaN();
  double virial_dM_fd = std::numeric_limits<double>::quiet_NaN();
  double strichartz_accum = 0.0;
  double h1_vs_linear = std::numeric_limits<double>::quiet_NaN();

  // monitored but not part of the CSV contract
  double crit_norm_pow = 0.0;  // int |u|^{2*} dx
  double psi_mass = std::numeric_limits<double>::quiet_NaN();  // int psi |u|^2
  double rhs_paper = std::numeric_limits<double>::quiet_NaN();
  double rhs_hessian = std::numeric_limits<double>::quiet_NaN();
};

enum class Termination { Completed, BlowupDetected, NumericalBreakdown };

const char* to_string(Termination t);

struct EvolveProbes {
  const VirialProfile* psi = nullptr;  // fills virial_M / psi_mass / rhs_*
  bool track_linear = false;           // co-evolves the linear flow for h1_vs_linear
  int snapshot_stride = 0;             // keep u every this many records (0 = off)
};

struct EvolveResult {
  Field final;
  std::vector<TrajectoryRecord> records;
  Termination termination = Termination::Completed;
  std::vector<std::pair<double, Field>> snapshots;
};

using RecordSink = std::function<void(const TrajectoryRecord&)>;

/// Exact phase flow of the zero-dispersion subflow: with the Laplacian
/// dropped, i d_t u = V u - |u|^{4/(N-2)} u rotates each sample by
/// exp(i dt (|u|^{4/(N-2)} - V)); the pointwise modulus is conserved exactly.
Field phase_step(const Field& u, const SampledPotential& V, double dt);

/// One Strang step: kinetic half step, full phase step, kinetic half step.
Field strang_step(const Field& u, const SampledPotential& V, double dt);

/// Time integration of the focusing equation by Strang splitting. Terminates
/// early when grad_sq exceeds blowup_grad_factor times its initial value (the
/// finite-horizon proxy for gradient blow-up) or when values stop being finite.
EvolveResult evolve(const Field& u0, const SampledPotential& V,
                    const EvolutionConfig& cfg, const RecordSink& sink = {},
                    const EvolveProbes& probes = {});

/// e^{-i t L} u0 with L = -Lap + V: the Strang scheme with the nonlinear phase
/// disabled. Negative t propagates backwards.
Field linear_evolve(const Field& u0, const SampledPotential& V, double t,
                    double dt = 2e-3);

struct PerturbationReport {
  std::vector<double> times;
  std::vector<double> divergence;  // ||u(t) - u_tilde(t)||_{H^1}
  double max_divergence = 0.0;
  double delta_h1 = 0.0;  // ||delta||_{H^1} at t=0
};

/// Continuous-dependence probe: evolves u0 and u0 + delta side by side and
/// reports the H^1 divergence time series.
PerturbationReport perturbation_check(const Field& u0, const Field& delta,
                                      const SampledPotential& V,
                                      const EvolutionConfig& cfg);

}  // namespace critnls
