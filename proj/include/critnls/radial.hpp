#pragma once

#include <complex>
#include <memory>
#include <vector>

namespace critnls {

using complexd = std::complex<double>;

/// Volume of the unit ball in dimension n, alpha(n) = pi^{n/2} / Gamma(n/2 + 1).
double unit_ball_volume(int n);

/// Surface area of the unit sphere S^{n-1}, n * alpha(n).
double unit_sphere_area(int n);

struct BallVolume {
  int dim;
  double alpha;        // volume of the unit ball
  double sphere_area;  // N * alpha(N)

  explicit BallVolume(int n)
      : dim(n), alpha(unit_ball_volume(n)), sphere_area(unit_sphere_area(n)) {}
};

/// Uniform radial grid on (0, r_max) with m interior nodes r_j = j*dr,
/// dr = r_max/(m+1). The node r=0 is excluded; fields are extended there by
/// parity, and r_max carries a homogeneous Dirichlet condition.
class RadialGrid {
public:
  RadialGrid(int dim, double r_max, int m);

  int dim() const { return dim_; }
  double r_max() const { return r_max_; }
  int size() const { return m_; }
  double dr() const { return dr_; }
  double r(int j) const { return r_[j]; }  // j = 0..m-1 holds r_{j+1} = (j+1)*dr
  const std::vector<double>& nodes() const { return r_; }

  /// r_j^{N-1} dr, the radial quadrature weight at node j (trapezoid interior
  /// weight; both endpoints of the rule vanish: r^{N-1}=0 at 0, Dirichlet at r_max).
  double weight(int j) const { return w_[j]; }

  const BallVolume& ball() const { return ball_; }

  bool same_as(const RadialGrid& other) const;

private:
  int dim_;
  double r_max_;
  int m_;
  double dr_;
  BallVolume ball_;
  std::vector<double> r_;
  std::vector<double> w_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr make_grid(int dim, double r_max, int m);

/// Complex radial field sampled at the interior nodes of a RadialGrid.
class Field {
public:
  Field() = default;
  explicit Field(GridPtr grid);
  Field(GridPtr grid, std::vector<complexd> values);

  const RadialGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  int size() const { return static_cast<int>(values_.size()); }

  complexd& operator[](int j) { return values_[j]; }
  const complexd& operator[](int j) const { return values_[j]; }
  std::vector<complexd>& values() { return values_; }
  const std::vector<complexd>& values() const { return values_; }

  bool real_nonnegative() const { return real_nonnegative_; }
  void set_real_nonnegative(bool flag) { real_nonnegative_ = flag; }

  bool finite() const;

  Field& operator*=(complexd z);
  Field& operator*=(double s);
  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);

private:
  GridPtr grid_;
  std::vector<complexd> values_;
  bool real_nonnegative_ = false;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(complexd z, Field a);
Field operator*(double s, Field a);

/// Builds a field by sampling f(r) at the grid nodes.
template <typename F>
Field sample_field(GridPtr grid, F&& f) {
  Field u(grid);
  for (int j = 0; j < u.size(); ++j) u[j] = f(grid->r(j));
  return u;
}

void require_same_grid(const Field& a, const Field& b);
void require_same_grid(const Field& a, const RadialGrid& g);

/// integrate(f) = N alpha(N) sum_j w_j f_j, the composite-trapezoid value of
/// int_{R^N} f dx for a real-valued radial sample. Caller keeps f negligible
/// near r_max.
double integrate(const Field& f);
double integrate_samples(const RadialGrid& g, const std::vector<double>& f);

/// int |u|^2 dx (the square of the L^2 norm; Eq-level mass observable).
double mass(const Field& u);

/// Radial derivative by second-order differences: even extension through the
/// origin (regular radial fields have u'(0)=0) and a one-sided second-order
/// stencil at the outer node, so discretely constant fields have zero
/// derivative exactly.
std::vector<complexd> radial_derivative(const Field& u);

/// int |d_r u|^2 dx. Nonnegative; zero only for discretely constant fields.
double grad_norm_sq(const Field& u);

/// (int |u|^p dx)^{1/p}, p >= 1.
double lp_norm(const Field& u, double p);

/// mass + grad_norm_sq.
double h1_norm_sq(const Field& u);

}  // namespace critnls
