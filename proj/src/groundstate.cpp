#include "critnls/groundstate.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace critnls {

namespace odeint = boost::numeric::odeint;
using ShootState = std::array<double, 2>;  // (W, W')

double sobolev_constant(GridPtr grid) {
  const Field bubble = aubin_talenti(1.0, grid);
  return std::pow(grad_norm_sq(bubble), 2.0 / grid->dim());
}

Field aubin_talenti(double eps, GridPtr grid) {
  if (!(eps > 0.0)) throw std::domain_error("aubin_talenti: eps must be positive");
  const int N = grid->dim();
  const double amp = std::pow(N * (N - 2.0), 0.25 * (N - 2.0));
  const double half_power = 0.5 * (N - 2.0);
  Field u = sample_field(grid, [&](double r) {
    return amp * std::pow(eps / (eps * eps + r * r), half_power);
  });
  u.set_real_nonnegative(true);
  return u;
}

double bubble_eps_for_amplitude(double b, int dim) {
  const int N = dim;
  const double amp = std::pow(N * (N - 2.0), 0.25 * (N - 2.0));
  return std::pow(amp / b, 2.0 / (N - 2.0));
}

namespace {

struct ShootRhs {
  const RadialPotentialFn* V;
  int N;
  double crit_exp;  // 4/(N-2)

  void operator()(const ShootState& y, ShootState& dy, double r) const {
    const double W = y[0];
    const double nonlin = std::pow(std::abs(W), crit_exp) * W;
    dy[0] = y[1];
    dy[1] = -(N - 1) / r * y[1] + V->value(r) * W - nonlin;
  }
};

// Series start at small r0 from the leading potential behaviour c r^{-sigma}:
// integrating (r^{N-1} W')' = r^{N-1} (V W - W^{2*-1}) with W ~ b gives
//   W'(r) = c b r^{1-sigma}/(N-sigma) - b^{2*-1} r/N,
//   W(r)  = b + c b r^{2-sigma}/((2-sigma)(N-sigma)) - b^{2*-1} r^2/(2N).
ShootState series_start(const RadialPotentialFn& V, int N, double b, double r0) {
  const double crit = std::pow(b, (N + 2.0) / (N - 2.0));
  double c = 0.0, s = 0.0;
  if (!V.zero) {
    c = V.singular_coeff;
    s = V.singular_exp;
    if (s >= 2.0)
      throw std::domain_error("shoot: potential singularity sigma >= 2 unsupported");
  }
  ShootState y;
  y[0] = b + c * b * std::pow(r0, 2.0 - s) / ((2.0 - s) * (N - s)) -
         crit * r0 * r0 / (2.0 * N);
  y[1] = c * b * std::pow(r0, 1.0 - s) / (N - s) - crit * r0 / N;
  return y;
}

using DenseStepper =
    odeint::result_of::make_dense_output<odeint::runge_kutta_dopri5<ShootState>>::type;

DenseStepper make_stepper(const ShootOptions& opts) {
  return odeint::make_dense_output(opts.abs_tol, opts.rel_tol,
                                   odeint::runge_kutta_dopri5<ShootState>());
}

}  // namespace

ShootOutcome shoot(const RadialPotentialFn& V, int dim, double b,
                   const ShootOptions& opts) {
  if (!(b > 0.0)) throw std::domain_error("shoot: amplitude must be positive");
  const int N = dim;
  ShootRhs rhs{&V, N, 4.0 / (N - 2.0)};
  const double r0 = 1e-6 * std::min(1.0, opts.r_end);
  ShootState y = series_start(V, N, b, r0);

  auto stepper = make_stepper(opts);
  stepper.initialize(y, r0, 1e-4);

  ShootOutcome out;
  out.classification = ShootClass::Indeterminate;
  out.tail_value = y[0];

  double prev_r = r0;
  double prev_W = y[0];
  while (stepper.current_time() < opts.r_end) {
    try {
      stepper.do_step(rhs);
    } catch (const std::exception&) {
      out.tail_value = stepper.current_state()[0];
      return out;  // step-size underflow and friends
    }
    const double r = std::min(stepper.current_time(), opts.r_end);
    ShootState cur;
    stepper.calc_state(r, cur);
    const double W = cur[0];
    if (!std::isfinite(W)) {
      out.tail_value = prev_W;
      return out;
    }
    if (W <= 0.0) {
      // refine the crossing by bisection on the dense interpolant
      double lo = prev_r, hi = r;
      for (int it = 0; it < 60 && hi - lo > 1e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        ShootState ym;
        stepper.calc_state(std::max(mid, stepper.previous_time()), ym);
        (ym[0] > 0.0 ? lo : hi) = mid;
      }
      out.classification = ShootClass::CrossesZero;
      out.crossing_radius = hi;
      out.tail_value = W;
      return out;
    }
    if (std::abs(W) > opts.growth_factor * b) {
      out.classification = ShootClass::GrowsUnbounded;
      out.tail_value = W;
      return out;
    }
    prev_r = r;
    prev_W = W;
  }

  ShootState yend;
  stepper.calc_state(opts.r_end, yend);
  out.tail_value = yend[0];
  if (yend[0] < opts.decay_floor * b && yend[1] <= 0.0)
    out.classification = ShootClass::DecaysClean;
  return out;
}

namespace {

std::string potential_id_of(const std::optional<YukawaPotential>& pot) {
  if (!pot) return "zero";
  std::ostringstream os;
  os << "yukawa c=" << pot->c << " sigma=" << pot->sigma << " a=" << pot->a
     << " N=" << pot->dim;
  return os.str();
}

}  // namespace

// Negative values past a zero crossing are truncated: at the accepted
// amplitude the trajectory crosses essentially at r_max, so the sample is the
// Dirichlet-ball standing wave.
Field shoot_profile(const RadialPotentialFn& V, GridPtr grid, double b,
                    const ShootOptions& opts) {
  const int N = grid->dim();
  ShootRhs rhs{&V, N, 4.0 / (N - 2.0)};
  const double r0 = 1e-6 * std::min(1.0, opts.r_end);
  ShootState y = series_start(V, N, b, r0);
  auto stepper = make_stepper(opts);
  stepper.initialize(y, r0, 1e-4);

  Field W(grid);
  int j = 0;
  bool crossed = false;
  const int m = grid->size();
  while (j < m && grid->r(j) <= r0) {
    ShootState ys = series_start(V, N, b, grid->r(j));
    W[j++] = ys[0];
  }
  while (j < m && !crossed) {
    if (stepper.current_time() >= grid->r_max()) break;
    stepper.do_step(rhs);
    while (j < m && grid->r(j) <= stepper.current_time()) {
      ShootState ys;
      stepper.calc_state(grid->r(j), ys);
      if (ys[0] <= 0.0) {
        crossed = true;
        break;
      }
      W[j++] = ys[0];
    }
  }
  for (; j < m; ++j) W[j] = 0.0;
  W.set_real_nonnegative(true);
  return W;
}

GroundState find_ground_state(const std::optional<YukawaPotential>& pot,
                              GridPtr grid, double tol) {
  const bool zero = !pot || pot->c == 0.0;
  GroundState gs;
  gs.potential_id = potential_id_of(pot);
  const SampledPotential Vs =
      zero ? zero_potential(grid) : sample_potential(*pot, grid);

  if (zero) {
    // scale-invariant case: pin eps = 1
    gs.profile = aubin_talenti(1.0, grid);
    const int N = grid->dim();
    gs.shoot_amplitude = std::pow(N * (N - 2.0), 0.25 * (N - 2.0));
  } else {
    const PotentialCertificate cert = certify(*pot);
    if (!cert.admissible)
      throw std::invalid_argument("find_ground_state: potential not admissible");
    const double S = sobolev_constant(grid);
    const double neg_lq = (pot->c < 0.0) ? cert.lq_norm : 0.0;
    if (neg_lq > S)
      throw std::invalid_argument(
          "find_ground_state: ||V_-||_{N/2} exceeds the Sobolev constant");

    const RadialPotentialFn fn = yukawa_fn(*pot);
    ShootOptions opts;
    opts.r_end = grid->r_max();

    auto crosses = [&](double b) {
      return shoot(fn, grid->dim(), b, opts).classification ==
             ShootClass::CrossesZero;
    };

    // bracket scan over six decades of amplitude
    const int n_scan = 25;
    const double b_lo_scan = 1e-3, b_hi_scan = 1e3;
    double b_lo = -1.0, b_hi = -1.0;
    bool prev = crosses(b_lo_scan);
    double prev_b = b_lo_scan;
    std::ostringstream trace;
    trace << "b=" << prev_b << (prev ? " crosses" : " stays-positive");
    for (int i = 1; i < n_scan; ++i) {
      const double b = b_lo_scan * std::pow(b_hi_scan / b_lo_scan,
                                            static_cast<double>(i) / (n_scan - 1));
      const bool cur = crosses(b);
      trace << ", b=" << b << (cur ? " crosses" : " stays-positive");
      if (cur != prev) {
        b_lo = prev ? b : prev_b;   // non-crossing endpoint
        b_hi = prev ? prev_b : b;   // crossing endpoint
        break;
      }
      prev = cur;
      prev_b = b;
    }
    if (b_lo < 0.0)
      throw NoGroundStateBracket(
          "find_ground_state: no sign change of the shooting predicate in "
          "[1e-3, 1e3]; trace: " + trace.str());

    for (int it = 0; it < 200 && std::abs(b_hi - b_lo) > tol * std::abs(b_hi);
         ++it) {
      const double mid = 0.5 * (b_lo + b_hi);
      (crosses(mid) ? b_hi : b_lo) = mid;
    }
    // crossing endpoint: the trajectory reaches zero essentially at r_max, so
    // the sample is the Dirichlet-ball standing wave and the identity
    // residuals carry only O(1/r_max) boundary flux
    gs.shoot_amplitude = b_hi;
    gs.profile = shoot_profile(fn, grid, b_hi, opts);
  }

  gs.energy = static_energy(gs.profile, Vs);
  gs.grad_sq = grad_norm_sq(gs.profile);
  gs.pohozaev_residual = pohozaev_residual(gs.profile, Vs);
  gs.nehari_residual = nehari_residual(gs.profile, Vs);
  return gs;
}

GroundState ground_state_at_amplitude(
    const std::optional<YukawaPotential>& pot, GridPtr grid, double b) {
  const bool zero = !pot || pot->c == 0.0;
  if (zero) return find_ground_state(std::nullopt, grid);
  GroundState gs;
  gs.potential_id = potential_id_of(pot);
  gs.shoot_amplitude = b;
  ShootOptions opts;
  opts.r_end = grid->r_max();
  gs.profile = shoot_profile(yukawa_fn(*pot), grid, b, opts);
  const SampledPotential Vs = sample_potential(*pot, grid);
  gs.energy = static_energy(gs.profile, Vs);
  gs.grad_sq = grad_norm_sq(gs.profile);
  gs.pohozaev_residual = pohozaev_residual(gs.profile, Vs);
  gs.nehari_residual = nehari_residual(gs.profile, Vs);
  return gs;
}

double static_energy(const Field& u, const SampledPotential& V) {
  return total_energy(u, V);
}

double pohozaev_residual(const Field& W, const SampledPotential& V) {
  if (!V.radial_derivative)
    throw std::invalid_argument("pohozaev_residual: V needs radial_derivative");
  require_same_grid(W, *V.grid);
  const RadialGrid& g = W.grid();
  const int N = g.dim();
  const double two_star = 2.0 * N / (N - 2.0);

  double xdV = 0.0, pot = 0.0, crit = 0.0;
  for (int j = 0; j < W.size(); ++j) {
    const double w2 = std::norm(W[j]);
    xdV += g.weight(j) * g.r(j) * (*V.radial_derivative)[j] * w2;
    pot += g.weight(j) * V.values[j] * w2;
    crit += g.weight(j) * std::pow(std::abs(W[j]), two_star);
  }
  const double area = g.ball().sphere_area;
  return (N - 2.0) / (2.0 * N) * grad_norm_sq(W) + area * xdV / (2.0 * N) +
         0.5 * area * pot - area * crit / two_star;
}

double nehari_residual(const Field& W, const SampledPotential& V) {
  require_same_grid(W, *V.grid);
  const int N = W.grid().dim();
  const double two_star = 2.0 * N / (N - 2.0);
  return grad_norm_sq(W) + potential_energy(V, W) -
         std::pow(lp_norm(W, two_star), two_star);
}

ThresholdPair threshold(const GroundState& gs, const SampledPotential& V) {
  if (!V.radial_derivative)
    throw std::invalid_argument("threshold: V needs radial_derivative");
  const Field& W = gs.profile;
  require_same_grid(W, *V.grid);
  const RadialGrid& g = W.grid();
  const int N = g.dim();
  double xdV = 0.0;
  for (int j = 0; j < W.size(); ++j)
    xdV += g.weight(j) * g.r(j) * (*V.radial_derivative)[j] * std::norm(W[j]);
  ThresholdPair tp;
  tp.grad_sq = grad_norm_sq(W);
  tp.energy = tp.grad_sq / N - g.ball().sphere_area * xdV / (2.0 * N);
  tp.consistency = std::abs(tp.energy - static_energy(W, V));
  return tp;
}

MountainPassReport mountain_pass_diagnostic(
    const std::optional<YukawaPotential>& pot, GridPtr grid, double eps) {
  const bool zero = !pot || pot->c == 0.0;
  Field u = aubin_talenti(eps, grid);
  if (!zero) {
    // compact support via a wide ramp: the slope cost of cutting a r^{2-N}
    // tail scales like 1/width under the r^{N-1} measure, so the ramp covers
    // most of the domain to keep it below the potential's gain
    const double rc = 0.25 * grid->r_max();
    const double rw = 0.70 * grid->r_max();
    for (int j = 0; j < u.size(); ++j) {
      const double r = grid->r(j);
      if (r <= rc) continue;
      if (r >= rc + rw) {
        u[j] = 0.0;
      } else {
        const double s = (r - rc) / rw;
        const double ramp =
            1.0 - s * s * s * s * (35.0 - 84.0 * s + 70.0 * s * s - 20.0 * s * s * s);
        u[j] *= ramp;
      }
    }
  }
  const SampledPotential Vs =
      zero ? zero_potential(grid) : sample_potential(*pot, grid);
  const int N = grid->dim();
  const double two_star = 2.0 * N / (N - 2.0);
  const double quad = grad_norm_sq(u) + potential_energy(Vs, u);
  const double crit = std::pow(lp_norm(u, two_star), two_star);

  MountainPassReport rep;
  const double S = sobolev_constant(grid);
  rep.sobolev_level = std::pow(S, 0.5 * N) / N;
  if (quad <= 0.0 || crit <= 0.0) {
    rep.value = 0.0;
    rep.t_star = 0.0;
    return rep;
  }
  // h(t) = t^2/2 quad - t^{2*}/2* crit peaks at t* = (quad/crit)^{1/(2*-2)}
  rep.t_star = std::pow(quad / crit, 1.0 / (two_star - 2.0));
  const double ts = rep.t_star;
  rep.value = 0.5 * ts * ts * quad - std::pow(ts, two_star) / two_star * crit;
  return rep;
}

}  // namespace critnls
