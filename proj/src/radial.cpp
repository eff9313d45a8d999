#include "critnls/radial.hpp"

#include <cmath>
#include <stdexcept>

namespace critnls {

double unit_ball_volume(int n) {
  if (n < 1) throw std::domain_error("unit_ball_volume: dimension must be >= 1");
  return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

RadialGrid::RadialGrid(int dim, double r_max, int m)
    : dim_(dim), r_max_(r_max), m_(m), dr_(r_max / (m + 1)), ball_(dim) {
  if (dim < 3 || dim > 5)
    throw std::domain_error("RadialGrid: dim must be in {3,4,5}");
  if (!(r_max > 0.0) || !std::isfinite(r_max))
    throw std::domain_error("RadialGrid: r_max must be positive");
  if (m < 4) throw std::domain_error("RadialGrid: need at least 4 interior nodes");
  r_.resize(m_);
  w_.resize(m_);
  for (int j = 0; j < m_; ++j) {
    r_[j] = (j + 1) * dr_;
    w_[j] = std::pow(r_[j], dim_ - 1) * dr_;
  }
}

bool RadialGrid::same_as(const RadialGrid& other) const {
  return this == &other ||
         (dim_ == other.dim_ && m_ == other.m_ && r_max_ == other.r_max_);
}

GridPtr make_grid(int dim, double r_max, int m) {
  return std::make_shared<const RadialGrid>(dim, r_max, m);
}

Field::Field(GridPtr grid) : grid_(std::move(grid)), values_(grid_->size()) {}

Field::Field(GridPtr grid, std::vector<complexd> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_->size())
    throw std::invalid_argument("Field: value count does not match grid");
}

bool Field::finite() const {
  for (const auto& z : values_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

Field& Field::operator*=(complexd z) {
  for (auto& v : values_) v *= z;
  return *this;
}

Field& Field::operator*=(double s) {
  for (auto& v : values_) v *= s;
  return *this;
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(*this, other);
  for (int j = 0; j < size(); ++j) values_[j] += other[j];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(*this, other);
  for (int j = 0; j < size(); ++j) values_[j] -= other[j];
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(complexd z, Field a) { return a *= z; }
Field operator*(double s, Field a) { return a *= s; }

void require_same_grid(const Field& a, const Field& b) {
  if (!a.grid().same_as(b.grid()))
    throw std::invalid_argument("fields live on different grids");
}

void require_same_grid(const Field& a, const RadialGrid& g) {
  if (!a.grid().same_as(g))
    throw std::invalid_argument("field does not live on the given grid");
}

double integrate_samples(const RadialGrid& g, const std::vector<double>& f) {
  if (static_cast<int>(f.size()) != g.size())
    throw std::invalid_argument("integrate_samples: sample count mismatch");
  double acc = 0.0;
  for (int j = 0; j < g.size(); ++j) acc += g.weight(j) * f[j];
  return g.ball().sphere_area * acc;
}

double integrate(const Field& f) {
  const RadialGrid& g = f.grid();
  double acc = 0.0;
  for (int j = 0; j < f.size(); ++j) acc += g.weight(j) * f[j].real();
  return g.ball().sphere_area * acc;
}

double mass(const Field& u) {
  const RadialGrid& g = u.grid();
  double acc = 0.0;
  for (int j = 0; j < u.size(); ++j) acc += g.weight(j) * std::norm(u[j]);
  return g.ball().sphere_area * acc;
}

std::vector<complexd> radial_derivative(const Field& u) {
  const int m = u.size();
  const double dr = u.grid().dr();
  std::vector<complexd> d(m);
  if (m < 3) throw std::invalid_argument("radial_derivative: grid too small");
  // j=0 (node r_1): centered stencil with the origin value eliminated via the
  // even extension u(r) = a + c r^2 near 0; exact for quadratics.
  d[0] = (u[1] - u[0]) * (2.0 / (3.0 * dr));
  for (int j = 1; j + 1 < m; ++j) d[j] = (u[j + 1] - u[j - 1]) / (2.0 * dr);
  // outer node: one-sided second-order stencil (no ghost), so constants
  // differentiate to zero exactly.
  d[m - 1] = (3.0 * u[m - 1] - 4.0 * u[m - 2] + u[m - 3]) / (2.0 * dr);
  return d;
}

double grad_norm_sq(const Field& u) {
  const RadialGrid& g = u.grid();
  const auto d = radial_derivative(u);
  double acc = 0.0;
  for (int j = 0; j < u.size(); ++j) acc += g.weight(j) * std::norm(d[j]);
  return g.ball().sphere_area * acc;
}

double lp_norm(const Field& u, double p) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw std::domain_error("lp_norm: p must be finite and >= 1");
  const RadialGrid& g = u.grid();
  double acc = 0.0;
  for (int j = 0; j < u.size(); ++j)
    acc += g.weight(j) * std::pow(std::abs(u[j]), p);
  return std::pow(g.ball().sphere_area * acc, 1.0 / p);
}

double h1_norm_sq(const Field& u) { return mass(u) + grad_norm_sq(u); }

}  // namespace critnls
