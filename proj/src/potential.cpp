#include "critnls/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace critnls {

YukawaPotential::YukawaPotential(double c_, double sigma_, double a_, int dim_)
    : c(c_), sigma(sigma_), a(a_), dim(dim_) {
  if (dim < 3 || dim > 5)
    throw std::domain_error("YukawaPotential: dim must be in {3,4,5}");
  if (!(sigma > 0.0 && sigma < dim - 1))
    throw std::domain_error("YukawaPotential: need 0 < sigma < N-1");
  if (!(a > 0.0)) throw std::domain_error("YukawaPotential: need a > 0");
  if (!std::isfinite(c)) throw std::domain_error("YukawaPotential: c not finite");
}

double yukawa_eval(const YukawaPotential& p, double r) {
  if (!(r > 0.0)) throw std::domain_error("yukawa_eval: r must be positive");
  return p.c * std::pow(r, -p.sigma) * std::exp(-p.a * r);
}

double yukawa_derivative(const YukawaPotential& p, double r) {
  if (!(r > 0.0)) throw std::domain_error("yukawa_derivative: r must be positive");
  return p.c * std::exp(-p.a * r) *
         (-p.sigma * std::pow(r, -p.sigma - 1.0) - p.a * std::pow(r, -p.sigma));
}

double kato_norm_closed(const YukawaPotential& p) {
  const int N = p.dim;
  if (!(p.sigma < N - 1))
    throw std::domain_error("kato_norm_closed: Gamma argument must be positive");
  return 2.0 * (N - 1) * unit_ball_volume(N - 1) * std::abs(p.c) *
         std::pow(p.a, p.sigma - N + 1) * std::tgamma(N - 1 - p.sigma);
}

double lq_norm_closed(const YukawaPotential& p, double q) {
  const int N = p.dim;
  if (!(q * p.sigma < N))
    throw std::domain_error("lq_norm_closed: need q*sigma < N");
  const double inner = N * unit_ball_volume(N) *
                       std::pow(p.a * q, q * p.sigma - N) *
                       std::tgamma(N - q * p.sigma);
  return std::abs(p.c) * std::pow(inner, 1.0 / q);
}

namespace {

// Composite Simpson in s = log r. Handles the integrable power-law
// singularity at the origin: the log-variable integrand f(e^s) e^{s(k+1)}
// vanishes there whenever f ~ r^{-sigma} with sigma < k+1.
double log_simpson(const std::function<double(double)>& f, double r_lo,
                   double r_hi, int n_panels) {
  const double s_lo = std::log(r_lo), s_hi = std::log(r_hi);
  const int n = 2 * n_panels;  // even interval count
  const double h = (s_hi - s_lo) / n;
  auto g = [&](double s) {
    const double r = std::exp(s);
    return f(r) * r;  // dr = r ds
  };
  double acc = g(s_lo) + g(s_hi);
  for (int i = 1; i < n; ++i) acc += g(s_lo + i * h) * ((i % 2) ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// int_{r_lo}^{inf} f dr by doubling blocks until the tail stalls; flags
// divergence when the block contributions refuse to decay.
struct TailIntegral {
  double value;
  bool divergent;
};

TailIntegral integrate_to_infinity(const std::function<double(double)>& f,
                                   double r_lo, double r_first_block) {
  double total = log_simpson(f, r_lo, r_first_block, 2048);
  double lo = r_first_block;
  for (int block = 0; block < 60; ++block) {
    const double hi = 2.0 * lo;
    const double piece = log_simpson(f, lo, hi, 1024);
    total += piece;
    if (std::abs(piece) <= 1e-14 * std::max(1.0, std::abs(total))) {
      return {total, false};
    }
    lo = hi;
  }
  return {std::numeric_limits<double>::infinity(), true};
}

}  // namespace

KatoQuadratureResult kato_norm_quadrature(
    const std::function<double(double)>& V, int dim) {
  const int N = dim;
  const double front = 2.0 * (N - 1) * unit_ball_volume(N - 1);
  const double r_min = 1e-10;
  const double r_block = 64.0;

  auto absV_rk = [&](int k) {
    return [&V, k](double r) { return std::abs(V(r)) * std::pow(r, k); };
  };

  KatoQuadratureResult out;
  out.divergent = false;

  // |x| -> 0 limit: front * int_0^inf |V| r^{N-2} dr.
  const TailIntegral limit0 = integrate_to_infinity(absV_rk(N - 2), r_min, r_block);
  if (limit0.divergent) {
    out.value = std::numeric_limits<double>::infinity();
    out.divergent = true;
    out.sup_at_x = 0.0;
    return out;
  }
  double best = front * limit0.value;
  double best_x = 0.0;
  out.profile_x.push_back(0.0);
  out.profile_value.push_back(best);

  // log sweep of |x|; each value needs the inner r^{N-1} moment and the outer
  // r^{N-2} tail past |x|.
  const int n_sweep = 64;
  const double x_lo = 1e-3, x_hi = 64.0;
  for (int i = 0; i < n_sweep; ++i) {
    const double x =
        x_lo * std::pow(x_hi / x_lo, static_cast<double>(i) / (n_sweep - 1));
    const double inner = log_simpson(absV_rk(N - 1), r_min, x, 2048);
    const TailIntegral outer =
        integrate_to_infinity(absV_rk(N - 2), x, std::max(2.0 * x, r_block));
    if (outer.divergent) {
      out.value = std::numeric_limits<double>::infinity();
      out.divergent = true;
      out.sup_at_x = x;
      return out;
    }
    const double val = front * (inner / x + outer.value);
    out.profile_x.push_back(x);
    out.profile_value.push_back(val);
    if (val > best) {
      best = val;
      best_x = x;
    }
  }
  out.value = best;
  out.sup_at_x = best_x;
  return out;
}

double lq_norm_quadrature(const std::function<double(double)>& V, int dim,
                          double q) {
  auto f = [&](double r) {
    return std::pow(std::abs(V(r)), q) * std::pow(r, dim - 1);
  };
  const TailIntegral integral = integrate_to_infinity(f, 1e-10, 64.0);
  if (integral.divergent) return std::numeric_limits<double>::infinity();
  return std::pow(dim * unit_ball_volume(dim) * integral.value, 1.0 / q);
}

PotentialCertificate certify(const YukawaPotential& p) {
  PotentialCertificate cert;
  cert.kato_norm = kato_norm_closed(p);
  cert.kato_norm_negative_part = (p.c < 0.0) ? cert.kato_norm : 0.0;
  cert.lq_norm = lq_norm_closed(p, 0.5 * p.dim);
  cert.threshold = p.dim * (p.dim - 2) * unit_ball_volume(p.dim);
  // strict inequality: values equal to the threshold up to round-off are
  // rejected, so the borderline coupling lands on the inadmissible side
  cert.admissible = std::isfinite(cert.kato_norm) && std::isfinite(cert.lq_norm) &&
                    cert.kato_norm_negative_part <
                        cert.threshold * (1.0 - 1e-12);
  cert.margin = cert.threshold - cert.kato_norm_negative_part;
  return cert;
}

PotentialCertificate zero_certificate(int dim) {
  PotentialCertificate cert;
  cert.kato_norm = 0.0;
  cert.kato_norm_negative_part = 0.0;
  cert.lq_norm = 0.0;
  cert.threshold = dim * (dim - 2) * unit_ball_volume(dim);
  cert.admissible = true;
  cert.margin = cert.threshold;
  return cert;
}

bool SampledPotential::is_zero() const {
  return std::all_of(values.begin(), values.end(),
                     [](double v) { return v == 0.0; });
}

SampledPotential sample_potential(const YukawaPotential& p, GridPtr grid) {
  if (grid->dim() != p.dim)
    throw std::invalid_argument("sample_potential: dimension mismatch");
  SampledPotential sp;
  sp.grid = grid;
  sp.values.resize(grid->size());
  std::vector<double> dv(grid->size());
  for (int j = 0; j < grid->size(); ++j) {
    sp.values[j] = yukawa_eval(p, grid->r(j));
    dv[j] = yukawa_derivative(p, grid->r(j));
  }
  sp.radial_derivative = std::move(dv);
  return sp;
}

SampledPotential zero_potential(GridPtr grid) {
  SampledPotential sp;
  sp.grid = grid;
  sp.values.assign(grid->size(), 0.0);
  sp.radial_derivative = std::vector<double>(grid->size(), 0.0);
  return sp;
}

double potential_energy(const SampledPotential& V, const Field& u) {
  require_same_grid(u, *V.grid);
  const RadialGrid& g = u.grid();
  double acc = 0.0;
  for (int j = 0; j < u.size(); ++j)
    acc += g.weight(j) * V.values[j] * std::norm(u[j]);
  return g.ball().sphere_area * acc;
}

double total_energy(const Field& u, const SampledPotential& V) {
  const int N = u.grid().dim();
  const double two_star = 2.0 * N / (N - 2.0);
  const double crit = std::pow(lp_norm(u, two_star), two_star);
  return 0.5 * (grad_norm_sq(u) + potential_energy(V, u)) - crit / two_star;
}

RadialPotentialFn yukawa_fn(const YukawaPotential& p) {
  RadialPotentialFn fn;
  fn.value = [p](double r) { return yukawa_eval(p, r); };
  fn.derivative = [p](double r) { return yukawa_derivative(p, r); };
  fn.singular_coeff = p.c;
  fn.singular_exp = p.sigma;
  fn.zero = (p.c == 0.0);
  return fn;
}

RadialPotentialFn zero_fn() {
  RadialPotentialFn fn;
  fn.value = [](double) { return 0.0; };
  fn.derivative = [](double) { return 0.0; };
  fn.zero = true;
  return fn;
}

HardyReport hardy_check(const SampledPotential& V, const Field& u,
                        const PotentialCertificate& cert, double tol) {
  require_same_grid(u, *V.grid);
  const RadialGrid& g = u.grid();
  double acc = 0.0;
  for (int j = 0; j < u.size(); ++j)
    acc += g.weight(j) * std::abs(V.values[j]) * std::norm(u[j]);
  HardyReport rep;
  rep.lhs = g.ball().sphere_area * acc;
  rep.rhs = cert.kato_norm / cert.threshold * grad_norm_sq(u);
  rep.holds = rep.lhs <= rep.rhs + tol * std::max(1.0, rep.rhs);
  return rep;
}

SandwichReport sandwich_check(const SampledPotential& V, const Field& u,
                              const PotentialCertificate& cert, double tol) {
  if (!cert.admissible)
    throw std::invalid_argument("sandwich_check: certificate not admissible");
  SandwichReport rep;
  const double grad = grad_norm_sq(u);
  rep.lower = (1.0 - cert.kato_norm_negative_part / cert.threshold) * grad;
  rep.upper = (1.0 + cert.kato_norm / cert.threshold) * grad;
  rep.quad_form = grad + potential_energy(V, u);
  const double slack = tol * std::max(1.0, grad);
  rep.lower_holds = rep.lower <= rep.quad_form + slack;
  rep.upper_holds = rep.quad_form <= rep.upper + slack;
  return rep;
}

}  // namespace critnls
