#pragma once

#include "critnls/radial.hpp"

#include <vector>

struct fftw_plan_s;

namespace critnls {

/// Propagator for the linear flow e^{i t (Laplacian - V)} on a radial grid.
///
/// V = 0, N = 3: v = r*u solves the 1-D free Schroedinger equation on
/// (0, r_max) with Dirichlet ends, evolved exactly in the discrete sine basis
/// (DST-I). Otherwise: Crank-Nicolson on the flux-form radial Laplacian with
/// V on the diagonal; the operator is self-adjoint in the r^{N-1}-weighted
/// inner product, so the step is a Cayley transform, unitary in that product
/// up to round-off, and conserves the discrete quadratic form exactly. The
/// implicit treatment keeps singular potentials (Yukawa r^{-sigma}) from
/// wrecking the splitting order the way a pointwise phase factor does.
///
/// Instances cache the plan/factorization for one fixed step size; distinct
/// instances may run on distinct threads.
class LinearPropagator {
public:
  /// Empty potential means V = 0.
  LinearPropagator(GridPtr grid, std::vector<double> potential, double dt);
  ~LinearPropagator();

  LinearPropagator(const LinearPropagator&) = delete;
  LinearPropagator& operator=(const LinearPropagator&) = delete;

  double dt() const { return dt_; }
  const RadialGrid& grid() const { return *grid_; }

  /// Advances u by dt in place.
  void apply(Field& u) const;

private:
  void apply_dst(Field& u) const;
  void apply_cn(Field& u) const;

  GridPtr grid_;
  double dt_;
  bool use_dst_;
  // DST branch
  fftw_plan_s* plan_ = nullptr;
  mutable std::vector<double> dst_re_, dst_im_;
  std::vector<double> phase_cos_, phase_sin_;
  // CN branch: tridiagonal Laplacian-minus-V in flux form
  std::vector<double> cn_lower_, cn_diag_, cn_upper_;
  mutable std::vector<complexd> cn_rhs_, cn_scratch_;
};

/// Kinetic-only propagator, e^{i t Laplacian}.
class FreePropagator {
public:
  FreePropagator(GridPtr grid, double dt) : lin_(std::move(grid), {}, dt) {}
  double dt() const { return lin_.dt(); }
  void apply(Field& u) const { lin_.apply(u); }

private:
  LinearPropagator lin_;
};

/// One-shot convenience wrapper around FreePropagator.
Field free_half_step(const Field& u, double dt);

}  // namespace critnls
