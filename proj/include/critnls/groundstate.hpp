#pragma once

#include "critnls/potential.hpp"
#include "critnls/radial.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace critnls {

/// Sobolev embedding constant S on this grid, recovered from the bubble via
/// ||grad U_1||_2^2 = S^{N/2}. Computed, never hard-coded, so every derived
/// constant traces back to the same quadrature.
double sobolev_constant(GridPtr grid);

/// U_eps(r) = [N(N-2)]^{(N-2)/4} (eps / (eps^2 + r^2))^{(N-2)/2}, the radial
/// extremal of the Sobolev inequality centered at the origin.
Field aubin_talenti(double eps, GridPtr grid);

/// Amplitude-parametrized inverse of the bubble at r=0: the eps for which
/// U_eps(0) = b.
double bubble_eps_for_amplitude(double b, int dim);

enum class ShootClass { CrossesZero, DecaysClean, GrowsUnbounded, Indeterminate };

struct ShootOutcome {
  ShootClass classification;
  std::optional<double> crossing_radius;
  double tail_value;  // W at the end of the integration window
};

struct ShootOptions {
  double r_end = 30.0;
  double growth_factor = 10.0;  // |W| > growth_factor * b  -> GrowsUnbounded
  double decay_floor = 0.08;    // W(r_end) < decay_floor * b -> DecaysClean
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
};

/// Integrates the radial standing-wave ODE
///   W'' + (N-1)/r W' - V(r) W + |W|^{4/(N-2)} W = 0,  W(0)=b, W'(0)=0,
/// with a series start absorbing the coordinate singularity (and the r^{-sigma}
/// potential singularity for sigma < 2), and classifies the trajectory.
ShootOutcome shoot(const RadialPotentialFn& V, int dim, double b,
                   const ShootOptions& opts = {});

/// Same trajectory sampled onto a grid; values past a zero crossing are zero.
Field shoot_profile(const RadialPotentialFn& V, GridPtr grid, double b,
                    const ShootOptions& opts = {});

struct GroundState {
  Field profile;              // real_nonnegative
  double shoot_amplitude;     // b = W(0)
  double energy;              // E(W)
  double grad_sq;             // int |grad W|^2
  double pohozaev_residual;
  double nehari_residual;
  std::string potential_id;
};

class NoGroundStateBracket : public std::runtime_error {
public:
  explicit NoGroundStateBracket(const std::string& what)
      : std::runtime_error(what) {}
};

/// Ground-state profile by bisection on the shooting amplitude. The critical
/// equation is scale-invariant for V = 0, so that case short-circuits to the
/// eps = 1 bubble. The result certifies positivity, decay and the identity
/// residuals; minimality among solutions is not decidable here.
GroundState find_ground_state(const std::optional<YukawaPotential>& pot,
                              GridPtr grid, double tol = 1e-12);

/// Rebuilds a GroundState from a known shooting amplitude (e.g. a cache row)
/// without re-running the bisection; residuals are recomputed on this grid.
GroundState ground_state_at_amplitude(const std::optional<YukawaPotential>& pot,
                                      GridPtr grid, double b);

/// I(u) = 1/2 int (|grad u|^2 + V|u|^2) - (1/2*) int |u|^{2*}; agrees with the
/// conserved energy on time slices.
double static_energy(const Field& u, const SampledPotential& V);

/// (N-2)/(2N) int |grad W|^2 + (1/2N) int (x.grad V)|W|^2
///   + 1/2 int V|W|^2 - (1/2*) int |W|^{2*};  zero for solutions.
double pohozaev_residual(const Field& W, const SampledPotential& V);

/// int (|grad W|^2 + V|W|^2) - int |W|^{2*};  zero for solutions.
double nehari_residual(const Field& W, const SampledPotential& V);

struct ThresholdPair {
  double energy;        // E(W) via the Pohozaev form
  double grad_sq;       // int |grad W|^2
  double consistency;   // |E(W) - I(W)| cross-check
};

/// Scattering threshold pair (E(W), ||grad W||^2) with
/// E(W) = (1/N) int |grad W|^2 - (1/2N) int (x.grad V)|W|^2.
ThresholdPair threshold(const GroundState& gs, const SampledPotential& V);

struct MountainPassReport {
  double value;          // max_t I(t u_eps)
  double t_star;         // maximizer
  double sobolev_level;  // S^{N/2} / N for comparison
};

/// Mountain-pass level probe along the ray t -> t * u_eps, where u_eps is the
/// bubble (cut off outside r_max/2 when V != 0 so the test function is
/// compactly supported).
MountainPassReport mountain_pass_diagnostic(
    const std::optional<YukawaPotential>& pot, GridPtr grid, double eps = 0.5);

}  // namespace critnls
