#pragma once

#include "critnls/radial.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace critnls {

/// V(x) = c |x|^{-sigma} e^{-a|x|} with 0 < sigma < N-1 and a > 0.
struct YukawaPotential {
  double c;
  double sigma;
  double a;
  int dim;

  YukawaPotential(double c, double sigma, double a, int dim);
};

double yukawa_eval(const YukawaPotential& p, double r);
double yukawa_derivative(const YukawaPotential& p, double r);

/// ||V||_K = 2(N-1) alpha(N-1) |c| a^{sigma-N+1} Gamma(N-1-sigma).
double kato_norm_closed(const YukawaPotential& p);

/// ||V||_{L^q} = |c| [N alpha(N) (a q)^{q sigma - N} Gamma(N - q sigma)]^{1/q}.
double lq_norm_closed(const YukawaPotential& p, double q);

struct KatoQuadratureResult {
  double value;        // sup_x of the radial-reduced integral (+inf if divergent)
  bool divergent;      // tail integral failed to converge
  double sup_at_x;     // |x| realizing the sup (0 for the x->0 limit)
  std::vector<double> profile_x;      // sampled |x| sweep
  std::vector<double> profile_value;  // integral value at each sampled |x|
};

/// Independent quadrature oracle for the Kato norm of a radial potential:
/// for each |x|, (2(N-1)alpha(N-1)/|x|) int_0^{|x|} |V| r^{N-1} dr
///             + 2(N-1)alpha(N-1) int_{|x|}^inf |V| r^{N-2} dr,
/// maximized over a log-spaced sweep of |x| plus the analytic |x|->0 limit.
KatoQuadratureResult kato_norm_quadrature(
    const std::function<double(double)>& V, int dim);

/// Radial quadrature of (int |V|^q dx)^{1/q} for a generic radial callable.
double lq_norm_quadrature(const std::function<double(double)>& V, int dim,
                          double q);

struct PotentialCertificate {
  double kato_norm;
  double kato_norm_negative_part;
  double lq_norm;    // ||V||_{L^{N/2}}
  double threshold;  // N(N-2) alpha(N)
  bool admissible;
  double margin;     // threshold - ||V_-||_K
};

/// Admissibility certificate from the closed-form norms: V in K cap L^{N/2}
/// and ||V_-||_K strictly below N(N-2) alpha(N).
PotentialCertificate certify(const YukawaPotential& p);

/// Trivial certificate for V = 0.
PotentialCertificate zero_certificate(int dim);

/// Sampled radial potential, with the radial derivative when x.grad V terms
/// are needed.
struct SampledPotential {
  GridPtr grid;
  std::vector<double> values;
  std::optional<std::vector<double>> radial_derivative;

  bool is_zero() const;
  double value(int j) const { return values[j]; }
};

SampledPotential sample_potential(const YukawaPotential& p, GridPtr grid);
SampledPotential zero_potential(GridPtr grid);

struct HardyReport {
  double lhs;  // int |V| |u|^2 dx
  double rhs;  // (||V||_K / threshold) * ||grad u||^2
  bool holds;
};

/// Checks the Kato-Hardy bound int |V||u|^2 <= (||V||_K / N(N-2)alpha(N)) ||grad u||^2.
HardyReport hardy_check(const SampledPotential& V, const Field& u,
                        const PotentialCertificate& cert, double tol = 1e-12);

struct SandwichReport {
  double lower;      // (1 - ||V_-||_K/thr) ||grad u||^2
  double quad_form;  // int (|grad u|^2 + V |u|^2) dx
  double upper;      // (1 + ||V||_K/thr) ||grad u||^2
  bool lower_holds;
  bool upper_holds;
};

/// Two-sided comparison of the quadratic form with ||grad u||^2; requires an
/// admissible certificate.
SandwichReport sandwich_check(const SampledPotential& V, const Field& u,
                              const PotentialCertificate& cert,
                              double tol = 1e-12);

/// int V |u|^2 dx for a sampled potential.
double potential_energy(const SampledPotential& V, const Field& u);

/// E(u) = 1/2 int (|grad u|^2 + V |u|^2) dx - (1/2*) int |u|^{2*} dx,
/// 2* = 2N/(N-2). Conserved along the flow; also the static functional whose
/// critical points solve the standing-wave equation.
double total_energy(const Field& u, const SampledPotential& V);

/// Analytic radial potential handed to the ODE integrator: value, derivative,
/// and the leading power-law behaviour coeff * r^{-exp} at the origin.
struct RadialPotentialFn {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  double singular_coeff = 0.0;
  double singular_exp = 0.0;
  bool zero = false;
};

RadialPotentialFn yukawa_fn(const YukawaPotential& p);
RadialPotentialFn zero_fn();

}  // namespace critnls
