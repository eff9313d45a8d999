#include "critnls/propagator.hpp"
#include "critnls/radial.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace critnls;

namespace {
const double kPi = M_PI;
GridPtr default_grid() { return make_grid(3, 30.0, 4096); }
}  // namespace

TEST_CASE("unit ball volumes") {
  CHECK(unit_ball_volume(2) == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-14));
  CHECK(unit_ball_volume(4) == doctest::Approx(kPi * kPi / 2.0).epsilon(1e-14));
  CHECK(unit_ball_volume(5) ==
        doctest::Approx(8.0 * kPi * kPi / 15.0).epsilon(1e-14));
  CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * kPi).epsilon(1e-14));
}

TEST_CASE("grid invariants") {
  auto g = default_grid();
  CHECK(g->dr() == doctest::Approx(30.0 / 4097));
  CHECK(g->r(0) == doctest::Approx(g->dr()));
  CHECK(g->r(g->size() - 1) == doctest::Approx(30.0 - g->dr()));
  CHECK_THROWS_AS(RadialGrid(2, 30.0, 128), std::domain_error);
  CHECK_THROWS_AS(RadialGrid(6, 30.0, 128), std::domain_error);
  CHECK_THROWS_AS(RadialGrid(3, -1.0, 128), std::domain_error);
}

TEST_CASE("integrate: unit-ball indicator, zero, Gaussian") {
  auto g = default_grid();
  Field ind = sample_field(g, [](double r) { return r <= 1.0 ? 1.0 : 0.0; });
  // indicator is discontinuous: first-order accuracy, tolerance ~ dr
  CHECK(integrate(ind) ==
        doctest::Approx(4.0 * kPi / 3.0).epsilon(4.0 * g->dr()));

  Field zero(g);
  CHECK(integrate(zero) == 0.0);

  Field gauss = sample_field(g, [](double r) { return std::exp(-r * r); });
  CHECK(integrate(gauss) == doctest::Approx(std::pow(kPi, 1.5)).epsilon(1e-12));
}

TEST_CASE("integrate: trapezoid order on a non-even integrand") {
  // the weighted integrand of exp(-r)/r is r e^{-r}, whose first derivative
  // at 0 is nonzero, so the Euler-Maclaurin dr^2 term survives; refining 2x
  // should shrink the error ~4x.
  const double exact = 4.0 * kPi;  // 4 pi int r e^{-r} dr
  auto err = [&](int m) {
    auto g = make_grid(3, 30.0, m);
    Field f = sample_field(g, [](double r) { return std::exp(-r) / r; });
    return std::abs(integrate(f) - exact);
  };
  const double e1 = err(1024), e2 = err(2048);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("mass: zero, Gaussian oracle, phase invariance") {
  auto g = default_grid();
  CHECK(mass(Field(g)) == 0.0);

  Field u = sample_field(g, [](double r) { return std::exp(-r * r / 2.0); });
  // |u|^2 = e^{-r^2}: mass = pi^{3/2}
  CHECK(mass(u) == doctest::Approx(std::pow(kPi, 1.5)).epsilon(1e-12));

  Field v = u;
  v *= std::polar(1.0, 0.7345);
  CHECK(mass(v) == doctest::Approx(mass(u)).epsilon(1e-14));
  CHECK(grad_norm_sq(v) == doctest::Approx(grad_norm_sq(u)).epsilon(1e-13));
}

TEST_CASE("grad_norm_sq: constant, Gaussian oracle, positivity") {
  auto g = default_grid();
  Field c = sample_field(g, [](double) { return 2.5; });
  CHECK(grad_norm_sq(c) == 0.0);  // one-sided outer stencil kills constants

  Field u = sample_field(g, [](double r) { return std::exp(-r * r / 2.0); });
  // int r^2 e^{-r^2} dx = (3/2) pi^{3/2}
  CHECK(grad_norm_sq(u) ==
        doctest::Approx(1.5 * std::pow(kPi, 1.5)).epsilon(1e-4));

  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> amp(0.1, 2.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double A = amp(rng), w = amp(rng);
    Field f = sample_field(
        g, [&](double r) { return A * std::exp(-r * r / (2.0 * w * w)); });
    CHECK(grad_norm_sq(f) > 0.0);
  }
}

TEST_CASE("lp_norm: domain, p=2 consistency, zero") {
  auto g = default_grid();
  Field u = sample_field(g, [](double r) { return std::exp(-r * r / 2.0); });
  CHECK_THROWS_AS(lp_norm(u, 0.5), std::domain_error);
  CHECK(lp_norm(u, 2.0) == doctest::Approx(std::sqrt(mass(u))).epsilon(1e-14));
  CHECK(lp_norm(Field(g), 6.0) == 0.0);
}

TEST_CASE("h1_norm_sq: zero, homogeneity, Gaussian oracle") {
  auto g = default_grid();
  CHECK(h1_norm_sq(Field(g)) == 0.0);
  Field u = sample_field(g, [](double r) { return std::exp(-r * r / 2.0); });
  Field u3 = 3.0 * u;
  CHECK(h1_norm_sq(u3) == doctest::Approx(9.0 * h1_norm_sq(u)).epsilon(1e-13));
  CHECK(h1_norm_sq(u) ==
        doctest::Approx(2.5 * std::pow(kPi, 1.5)).epsilon(1e-4));
}

TEST_CASE("grid mismatch is a structural error") {
  auto g1 = default_grid();
  auto g2 = make_grid(3, 30.0, 2048);
  Field a(g1), b(g2);
  CHECK_THROWS_AS(a += b, std::invalid_argument);
}

TEST_CASE("free_half_step: identity at dt=0 and free-Gaussian oracle (N=3)") {
  auto g = default_grid();
  Field u = sample_field(g, [](double r) { return std::exp(-r * r); });
  Field same = free_half_step(u, 0.0);
  for (int j = 0; j < u.size(); ++j) CHECK(same[j] == u[j]);

  const double t = 0.1;
  Field ut = free_half_step(u, t);
  // closed form (1+4it)^{-3/2} exp(-r^2/(1+4it))
  const complexd beta(1.0, 4.0 * t);
  double max_err = 0.0;
  for (int j = 0; j < u.size(); ++j) {
    const complexd exact =
        std::pow(beta, -1.5) * std::exp(-g->r(j) * g->r(j) / beta);
    max_err = std::max(max_err, std::abs(ut[j] - exact));
  }
  CHECK(max_err < 1e-11);
  CHECK_THROWS_AS(free_half_step(u, std::nan("")), std::domain_error);
}

TEST_CASE("free_half_step: mass preservation and reversibility (N=3)") {
  auto g = default_grid();
  Field u = sample_field(g, [](double r) {
    return complexd(std::exp(-r * r / 2.0), 0.3 * std::exp(-r * r));
  });
  const double m0 = mass(u);
  FreePropagator fwd(g, 0.01), bwd(g, -0.01);
  Field v = u;
  fwd.apply(v);
  CHECK(std::abs(mass(v) - m0) <=
        10.0 * std::numeric_limits<double>::epsilon() * g->size() *
            std::max(1.0, m0));
  bwd.apply(v);
  double max_err = 0.0;
  for (int j = 0; j < u.size(); ++j)
    max_err = std::max(max_err, std::abs(v[j] - u[j]));
  CHECK(max_err <= 100.0 * std::numeric_limits<double>::epsilon() * g->size());
}

TEST_CASE("free_half_step: Crank-Nicolson branch for N=4,5") {
  for (int N : {4, 5}) {
    CAPTURE(N);
    auto g = make_grid(N, 20.0, 1024);
    Field u = sample_field(g, [](double r) { return std::exp(-r * r); });
    const double m0 = mass(u);

    // unitarity in the weighted product and reversibility
    FreePropagator fwd(g, 1e-3), bwd(g, -1e-3);
    Field v = u;
    fwd.apply(v);
    CHECK(mass(v) == doctest::Approx(m0).epsilon(1e-13));
    bwd.apply(v);
    double max_err = 0.0;
    for (int j = 0; j < u.size(); ++j)
      max_err = std::max(max_err, std::abs(v[j] - u[j]));
    CHECK(max_err < 1e-12);

    // coarse accuracy against the closed-form Gaussian
    const double t = 0.05;
    const int steps = 500;
    FreePropagator prop(g, t / steps);
    Field w = u;
    for (int s = 0; s < steps; ++s) prop.apply(w);
    const complexd beta(1.0, 4.0 * t);
    double num = 0.0, den = 0.0;
    for (int j = 0; j < u.size(); ++j) {
      const complexd exact =
          std::pow(beta, -0.5 * N) * std::exp(-g->r(j) * g->r(j) / beta);
      num += std::norm(w[j] - exact) * g->weight(j);
      den += std::norm(exact) * g->weight(j);
    }
    CHECK(std::sqrt(num / den) < 2e-3);
  }
}
