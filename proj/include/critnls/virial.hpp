#pragma once

#include "critnls/potential.hpp"
#include "critnls/radial.hpp"

#include <vector>

namespace critnls {

/// Radial virial cutoff psi_R. psi(r) = r^2/2 exactly for r <= R; on
/// [R, 2R] the slope ramps to zero through a seventh-order smoothstep; beyond
/// 2R psi is constant (= R^2) with all derivatives zero. The profile is C^4
/// and satisfies the pointwise certificates
///   1 - psi'' >= 0,  1 - psi'/r >= 0,  N - Lap psi >= 0
/// everywhere; construction verifies them node by node and refuses a profile
/// that fails. (A compactly supported cutoff with psi(2R)=0 cannot satisfy
/// psi'' <= 1: integrating psi'' <= 1 back from 2R forces psi(2R) > 0 for any
/// C^1 profile, so the plateau value is the price of the certificates.)
struct VirialProfile {
  double R;
  GridPtr grid;
  std::vector<double> psi;
  std::vector<double> psi_prime;
  std::vector<double> psi_second;
  std::vector<double> laplacian_psi;
  std::vector<double> bilaplacian_psi;
};

VirialProfile make_psi(double R, GridPtr grid);

/// M_psi[u] = 2 Im int conj(u) psi'(r) d_r u dx.
double virial_M(const Field& u, const VirialProfile& P);

/// z = int psi |u|^2 dx, the quantity whose time derivatives the virial
/// identities describe.
double psi_weighted_mass(const Field& u, const VirialProfile& P);

struct VirialRhs {
  double total;
  double kinetic;      // leading gradient term (the contested one)
  double potential;    // -2 int psi' V' |u|^2
  double bilaplacian;  // -int Lap^2 psi |u|^2
  double nonlinear;    // -(4/N) int Lap psi |u|^{2*}
};

/// Second-derivative candidate with the leading term 4 int (Lap psi) |grad u|^2
/// (the form printed in the source identity).
VirialRhs virial_rhs_paper(const Field& u, const SampledPotential& V,
                           const VirialProfile& P);

/// Second-derivative candidate with the leading term 4 int psi'' |d_r u|^2
/// (the Hessian form; for psi = r^2/2 it reduces to the textbook unbounded
/// virial identity). The finite-difference trajectory oracle decides which of
/// the two candidates tracks d^2/dt^2 int psi |u|^2.
VirialRhs virial_rhs_hessian(const Field& u, const SampledPotential& V,
                             const VirialProfile& P);

}  // namespace critnls
