#include "critnls/propagator.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace critnls {

namespace {
// FFTW plan creation is not thread-safe; execution on per-instance buffers is.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

LinearPropagator::LinearPropagator(GridPtr grid, std::vector<double> potential,
                                   double dt)
    : grid_(std::move(grid)), dt_(dt) {
  if (!std::isfinite(dt))
    throw std::domain_error("LinearPropagator: dt not finite");
  const int m = grid_->size();
  if (!potential.empty() && static_cast<int>(potential.size()) != m)
    throw std::invalid_argument("LinearPropagator: potential size mismatch");
  const bool v_zero =
      potential.empty() || std::all_of(potential.begin(), potential.end(),
                                       [](double v) { return v == 0.0; });
  use_dst_ = v_zero && grid_->dim() == 3;

  if (use_dst_) {
    dst_re_.resize(m);
    dst_im_.resize(m);
    phase_cos_.resize(m);
    phase_sin_.resize(m);
    for (int k = 0; k < m; ++k) {
      const double mu = (k + 1) * M_PI / grid_->r_max();
      // sine mode k evolves by exp(-i mu^2 t)
      phase_cos_[k] = std::cos(mu * mu * dt_);
      phase_sin_[k] = std::sin(mu * mu * dt_);
    }
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan_ = fftw_plan_r2r_1d(m, dst_re_.data(), dst_re_.data(), FFTW_RODFT00,
                             FFTW_ESTIMATE);
    if (!plan_) throw std::runtime_error("LinearPropagator: FFTW plan failed");
  } else {
    // Flux-form radial Laplacian minus V: (A u)_j =
    //   [a_j (u_{j+1}-u_j) - a_{j-1} (u_j-u_{j-1})] / (r_j^{N-1} dr^2) - V_j u_j,
    // a_j = r_{j+1/2}^{N-1}, with zero inner flux (regularity at 0) and a
    // Dirichlet ghost at r_max.
    const double dr = grid_->dr();
    const int N = grid_->dim();
    cn_lower_.resize(m);
    cn_diag_.resize(m);
    cn_upper_.resize(m);
    cn_rhs_.resize(m);
    cn_scratch_.resize(m);
    auto face = [&](int j) {  // r_{j+1/2}^{N-1}, faces between nodes j and j+1
      return std::pow((j + 1.5) * dr, N - 1);
    };
    for (int j = 0; j < m; ++j) {
      const double dj = std::pow(grid_->r(j), N - 1) * dr * dr;
      const double a_lo = (j == 0) ? 0.0 : face(j - 1);
      const double a_hi = face(j);
      cn_lower_[j] = a_lo / dj;
      cn_upper_[j] = a_hi / dj;
      cn_diag_[j] = -(a_lo + a_hi) / dj - (potential.empty() ? 0.0 : potential[j]);
    }
  }
}

LinearPropagator::~LinearPropagator() {
  if (plan_) {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(reinterpret_cast<fftw_plan>(plan_));
  }
}

void LinearPropagator::apply(Field& u) const {
  require_same_grid(u, *grid_);
  if (dt_ == 0.0) return;
  if (use_dst_)
    apply_dst(u);
  else
    apply_cn(u);
}

void LinearPropagator::apply_dst(Field& u) const {
  const int m = grid_->size();
  for (int j = 0; j < m; ++j) {
    const complexd v = grid_->r(j) * u[j];
    dst_re_[j] = v.real();
    dst_im_[j] = v.imag();
  }
  auto p = reinterpret_cast<fftw_plan>(plan_);
  fftw_execute_r2r(p, dst_re_.data(), dst_re_.data());
  fftw_execute_r2r(p, dst_im_.data(), dst_im_.data());
  for (int k = 0; k < m; ++k) {
    const double c = phase_cos_[k], s = phase_sin_[k];
    const double re = dst_re_[k], im = dst_im_[k];
    dst_re_[k] = c * re + s * im;  // (re + i im) * exp(-i theta)
    dst_im_[k] = c * im - s * re;
  }
  fftw_execute_r2r(p, dst_re_.data(), dst_re_.data());
  fftw_execute_r2r(p, dst_im_.data(), dst_im_.data());
  const double norm = 1.0 / (2.0 * (m + 1));  // RODFT00 applied twice scales by 2(m+1)
  for (int j = 0; j < m; ++j)
    u[j] = complexd(dst_re_[j] * norm, dst_im_[j] * norm) / grid_->r(j);
}

void LinearPropagator::apply_cn(Field& u) const {
  // (I - i dt/2 A) u_new = (I + i dt/2 A) u, complex Thomas solve.
  const int m = grid_->size();
  const complexd itheta(0.0, 0.5 * dt_);
  for (int j = 0; j < m; ++j) {
    complexd au = cn_diag_[j] * u[j];
    if (j > 0) au += cn_lower_[j] * u[j - 1];
    if (j + 1 < m) au += cn_upper_[j] * u[j + 1];
    cn_rhs_[j] = u[j] + itheta * au;
  }
  // forward elimination on rows [1 - i theta diag, -i theta offdiag]
  std::vector<complexd>& cp = cn_scratch_;
  complexd denom = 1.0 - itheta * cn_diag_[0];
  cp[0] = (-itheta * cn_upper_[0]) / denom;
  cn_rhs_[0] /= denom;
  for (int j = 1; j < m; ++j) {
    const complexd lower = -itheta * cn_lower_[j];
    denom = (1.0 - itheta * cn_diag_[j]) - lower * cp[j - 1];
    cp[j] = (-itheta * cn_upper_[j]) / denom;
    cn_rhs_[j] = (cn_rhs_[j] - lower * cn_rhs_[j - 1]) / denom;
  }
  u[m - 1] = cn_rhs_[m - 1];
  for (int j = m - 2; j >= 0; --j) u[j] = cn_rhs_[j] - cp[j] * u[j + 1];
}

Field free_half_step(const Field& u, double dt) {
  FreePropagator prop(u.grid_ptr(), dt);
  Field out = u;
  prop.apply(out);
  return out;
}

}  // namespace critnls
