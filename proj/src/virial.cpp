#include "critnls/virial.hpp"

#include <cmath>
#include <stdexcept>

namespace critnls {

namespace {

// seventh-order smoothstep: S(0)=0, S(1)=1, S', S'', S''' vanish at both ends
double s7(double s) {
  return s * s * s * s * (35.0 - 84.0 * s + 70.0 * s * s - 20.0 * s * s * s);
}
double s7p(double s) {
  const double t = s * (1.0 - s);
  return 140.0 * t * t * t;
}
double s7pp(double s) {
  const double t = s * (1.0 - s);
  return 420.0 * t * t * (1.0 - 2.0 * s);
}
double s7ppp(double s) {
  return 840.0 * s * (1.0 - s) * (1.0 - 5.0 * s + 5.0 * s * s);
}
// int_0^s S7
double s7int(double s) {
  const double s4 = s * s * s * s;
  return s4 * s * (7.0 - 14.0 * s + 10.0 * s * s - 2.5 * s * s * s);
}

struct PsiJet {
  double psi, d1, d2, d3, d4;
};

PsiJet psi_jet(double R, double r) {
  if (r <= R) return {0.5 * r * r, r, 1.0, 0.0, 0.0};
  if (r >= 2.0 * R) return {R * R, 0.0, 0.0, 0.0, 0.0};
  const double s = (r - R) / R;
  PsiJet j;
  j.psi = R * R * (0.5 + s - s7int(s));
  j.d1 = R * (1.0 - s7(s));
  j.d2 = -s7p(s);
  j.d3 = -s7pp(s) / R;
  j.d4 = -s7ppp(s) / (R * R);
  return j;
}

}  // namespace

VirialProfile make_psi(double R, GridPtr grid) {
  if (!(R > 0.0)) throw std::domain_error("make_psi: R must be positive");
  if (!(2.0 * R < grid->r_max()))
    throw std::domain_error("make_psi: need 2R < r_max");
  const int N = grid->dim();
  const int m = grid->size();
  VirialProfile P;
  P.R = R;
  P.grid = grid;
  P.psi.resize(m);
  P.psi_prime.resize(m);
  P.psi_second.resize(m);
  P.laplacian_psi.resize(m);
  P.bilaplacian_psi.resize(m);
  for (int j = 0; j < m; ++j) {
    const double r = grid->r(j);
    const PsiJet jet = psi_jet(R, r);
    P.psi[j] = jet.psi;
    P.psi_prime[j] = jet.d1;
    P.psi_second[j] = jet.d2;
    P.laplacian_psi[j] = jet.d2 + (N - 1) * jet.d1 / r;
    P.bilaplacian_psi[j] = jet.d4 + 2.0 * (N - 1) * jet.d3 / r +
                           (N - 1) * (N - 3) * (jet.d2 / (r * r) - jet.d1 / (r * r * r));
    // pointwise certificates, hard assertions on construction
    const double tol = 1e-12;
    if (1.0 - P.psi_second[j] < -tol || 1.0 - P.psi_prime[j] / r < -tol ||
        N - P.laplacian_psi[j] < -tol)
      throw std::logic_error("make_psi: cutoff certificate violated");
  }
  return P;
}

double virial_M(const Field& u, const VirialProfile& P) {
  require_same_grid(u, *P.grid);
  const RadialGrid& g = u.grid();
  const auto d = radial_derivative(u);
  double acc = 0.0;
  for (int j = 0; j < u.size(); ++j)
    acc += g.weight(j) * P.psi_prime[j] * std::imag(std::conj(u[j]) * d[j]);
  return 2.0 * g.ball().sphere_area * acc;
}

double psi_weighted_mass(const Field& u, const VirialProfile& P) {
  require_same_grid(u, *P.grid);
  const RadialGrid& g = u.grid();
  double acc = 0.0;
  for (int j = 0; j < u.size(); ++j)
    acc += g.weight(j) * P.psi[j] * std::norm(u[j]);
  return g.ball().sphere_area * acc;
}

namespace {

VirialRhs virial_rhs_impl(const Field& u, const SampledPotential& V,
                          const VirialProfile& P,
                          const std::vector<double>& kinetic_weight) {
  require_same_grid(u, *P.grid);
  require_same_grid(u, *V.grid);
  if (!V.radial_derivative)
    throw std::invalid_argument("virial_rhs: V needs radial_derivative");
  const RadialGrid& g = u.grid();
  const int N = g.dim();
  const double two_star = 2.0 * N / (N - 2.0);
  const auto d = radial_derivative(u);

  double kin = 0.0, pot = 0.0, bil = 0.0, nl = 0.0;
  for (int j = 0; j < u.size(); ++j) {
    const double w = g.weight(j);
    const double u2 = std::norm(u[j]);
    kin += w * kinetic_weight[j] * std::norm(d[j]);
    pot += w * P.psi_prime[j] * (*V.radial_derivative)[j] * u2;
    bil += w * P.bilaplacian_psi[j] * u2;
    nl += w * P.laplacian_psi[j] * std::pow(std::abs(u[j]), two_star);
  }
  const double area = g.ball().sphere_area;
  VirialRhs rhs;
  rhs.kinetic = 4.0 * area * kin;
  rhs.potential = -2.0 * area * pot;
  rhs.bilaplacian = -area * bil;
  rhs.nonlinear = -4.0 / N * area * nl;
  rhs.total = rhs.kinetic + rhs.potential + rhs.bilaplacian + rhs.nonlinear;
  return rhs;
}

}  // namespace

VirialRhs virial_rhs_paper(const Field& u, const SampledPotential& V,
                           const VirialProfile& P) {
  return virial_rhs_impl(u, V, P, P.laplacian_psi);
}

VirialRhs virial_rhs_hessian(const Field& u, const SampledPotential& V,
                             const VirialProfile& P) {
  return virial_rhs_impl(u, V, P, P.psi_second);
}

}  // namespace critnls
