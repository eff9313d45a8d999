#include "critnls/potential.hpp"

#include <doctest.h>

#include <cmath>

using namespace critnls;

namespace {
const double kPi = M_PI;
}

TEST_CASE("yukawa parameter invariants") {
  CHECK_THROWS_AS(YukawaPotential(1.0, 2.5, 1.0, 3), std::domain_error);
  CHECK_THROWS_AS(YukawaPotential(1.0, 0.0, 1.0, 3), std::domain_error);
  CHECK_THROWS_AS(YukawaPotential(1.0, 1.0, 0.0, 3), std::domain_error);
  CHECK_NOTHROW(YukawaPotential(-3.0, 1.9, 0.5, 3));
  CHECK_NOTHROW(YukawaPotential(1.0, 2.5, 1.0, 4));
}

TEST_CASE("yukawa_eval pointwise") {
  YukawaPotential p(1.0, 1.0, 1.0, 3);
  CHECK(yukawa_eval(p, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  YukawaPotential q(-0.5, 1.0, 1.0, 3);
  CHECK(yukawa_eval(q, 2.0) ==
        doctest::Approx(-0.5 * 0.5 * std::exp(-2.0)).epsilon(1e-14));
  YukawaPotential z(0.0, 1.0, 1.0, 3);
  CHECK(yukawa_eval(z, 0.37) == 0.0);
  CHECK_THROWS_AS(yukawa_eval(p, 0.0), std::domain_error);
}

TEST_CASE("kato_norm_closed reference values") {
  CHECK(kato_norm_closed(YukawaPotential(1.0, 1.0, 1.0, 3)) ==
        doctest::Approx(4.0 * kPi).epsilon(1e-13));
  CHECK(kato_norm_closed(YukawaPotential(-0.5, 1.0, 1.0, 3)) ==
        doctest::Approx(2.0 * kPi).epsilon(1e-13));
  // a^{sigma-N+1} = 1/a for N=3, sigma=1
  CHECK(kato_norm_closed(YukawaPotential(1.0, 1.0, 2.0, 3)) ==
        doctest::Approx(2.0 * kPi).epsilon(1e-13));
}

TEST_CASE("kato quadrature oracle agrees with the closed form") {
  struct Case {
    double c, sigma, a;
    int N;
  };
  const Case cases[] = {
      {1.0, 1.0, 1.0, 3}, {-0.5, 0.5, 2.0, 3}, {2.0, 1.5, 0.7, 4},
      {0.3, 2.2, 1.3, 5},
  };
  for (const auto& cs : cases) {
    CAPTURE(cs.c);
    CAPTURE(cs.N);
    YukawaPotential p(cs.c, cs.sigma, cs.a, cs.N);
    const double closed = kato_norm_closed(p);
    const auto quad = kato_norm_quadrature(
        [&](double r) { return yukawa_eval(p, r); }, cs.N);
    REQUIRE(!quad.divergent);
    CHECK(std::abs(quad.value - closed) / closed < 1e-5);
  }
}

TEST_CASE("kato quadrature: zero potential and x-monotonicity") {
  const auto zero = kato_norm_quadrature([](double) { return 0.0; }, 3);
  CHECK(zero.value == 0.0);

  YukawaPotential p(1.0, 1.0, 1.0, 3);
  const auto quad =
      kato_norm_quadrature([&](double r) { return yukawa_eval(p, r); }, 3);
  // sup is attained in the |x| -> 0 limit and the sweep decreases in |x|
  CHECK(quad.sup_at_x == 0.0);
  for (std::size_t i = 2; i < quad.profile_value.size(); ++i)
    CHECK(quad.profile_value[i] < quad.profile_value[i - 1]);
}

TEST_CASE("lq_norm_closed: reference value, homogeneity, domain") {
  YukawaPotential p(1.0, 1.0, 1.0, 3);
  const double q = 1.5;
  const double expected = std::pow(
      4.0 * kPi * std::pow(1.5, -1.5) * std::tgamma(1.5), 1.0 / 1.5);
  CHECK(lq_norm_closed(p, q) == doctest::Approx(expected).epsilon(1e-13));

  YukawaPotential p2(2.0, 1.0, 1.0, 3);
  CHECK(lq_norm_closed(p2, q) ==
        doctest::Approx(2.0 * lq_norm_closed(p, q)).epsilon(1e-13));

  CHECK(lq_norm_closed(YukawaPotential(0.0, 1.0, 1.0, 3), q) == 0.0);
  CHECK_THROWS_AS(lq_norm_closed(p, 3.0), std::domain_error);
}

TEST_CASE("lq quadrature agrees with the closed form") {
  struct Case {
    double c, sigma, a;
    int N;
  };
  const Case cases[] = {{1.0, 1.0, 1.0, 3}, {-0.5, 0.8, 2.0, 3}, {3.0, 1.2, 0.5, 4}};
  for (const auto& cs : cases) {
    CAPTURE(cs.c);
    YukawaPotential p(cs.c, cs.sigma, cs.a, cs.N);
    const double q = 0.5 * cs.N;
    const double closed = lq_norm_closed(p, q);
    const double quad = lq_norm_quadrature(
        [&](double r) { return yukawa_eval(p, r); }, cs.N, q);
    CHECK(std::abs(quad - closed) / closed < 1e-5);
  }
}

TEST_CASE("certify: margins and the borderline rejection") {
  const auto ok = certify(YukawaPotential(-0.5, 1.0, 1.0, 3));
  CHECK(ok.admissible);
  CHECK(ok.threshold == doctest::Approx(4.0 * kPi).epsilon(1e-13));
  CHECK(ok.margin == doctest::Approx(2.0 * kPi).epsilon(1e-12));
  CHECK(ok.kato_norm_negative_part == doctest::Approx(2.0 * kPi).epsilon(1e-13));

  // ||V_-||_K equals the threshold: strict inequality fails
  const auto borderline = certify(YukawaPotential(-1.0, 1.0, 1.0, 3));
  CHECK_FALSE(borderline.admissible);
  CHECK(std::abs(borderline.margin) < 1e-10);

  const auto positive = certify(YukawaPotential(5.0, 1.0, 1.0, 3));
  CHECK(positive.admissible);
  CHECK(positive.kato_norm_negative_part == 0.0);
}

TEST_CASE("certify: margin decreases as the attractive coupling grows") {
  double prev = std::numeric_limits<double>::infinity();
  for (double c = -0.1; c > -0.95; c -= 0.1) {
    const auto cert = certify(YukawaPotential(c, 1.0, 1.0, 3));
    CHECK(cert.margin < prev);
    prev = cert.margin;
  }
}

TEST_CASE("sample_potential matches pointwise evaluation") {
  auto grid = make_grid(3, 30.0, 59);  // dr = 0.5: nodes hit 0.5, 1, 2
  YukawaPotential p(-0.7, 1.0, 1.3, 3);
  const auto sp = sample_potential(p, grid);
  REQUIRE(sp.radial_derivative.has_value());
  for (int j : {0, 1, 3}) {
    const double r = grid->r(j);
    CHECK(sp.values[j] == doctest::Approx(yukawa_eval(p, r)).epsilon(1e-14));
    const double dv = p.c * std::exp(-p.a * r) *
                      (-p.sigma * std::pow(r, -p.sigma - 1.0) -
                       p.a * std::pow(r, -p.sigma));
    CHECK((*sp.radial_derivative)[j] == doctest::Approx(dv).epsilon(1e-14));
  }
}

TEST_CASE("hardy_check: Kato bound on the test corpus") {
  auto grid = make_grid(3, 30.0, 4096);
  Field u = sample_field(grid, [](double r) { return std::exp(-r * r / 2.0); });

  YukawaPotential p(1.0, 1.0, 1.0, 3);
  const auto cert = certify(p);
  const auto rep = hardy_check(sample_potential(p, grid), u, cert);
  CHECK(rep.holds);
  CHECK(rep.lhs < rep.rhs);  // strict slack for this pair

  // homogeneity: amplitude scaling leaves the ratio unchanged
  Field u_small = 1e-3 * u;
  const auto rep2 = hardy_check(sample_potential(p, grid), u_small, cert);
  CHECK(rep2.lhs / rep2.rhs == doctest::Approx(rep.lhs / rep.rhs).epsilon(1e-10));

  const auto zero_rep =
      hardy_check(zero_potential(grid), u, zero_certificate(3));
  CHECK(zero_rep.lhs == 0.0);
  CHECK(zero_rep.holds);
}

TEST_CASE("hardy_check holds across an admissible corpus") {
  auto grid = make_grid(3, 30.0, 4096);
  const double widths[] = {0.5, 1.0, 2.0};
  const double couplings[] = {-0.9, -0.25, 0.5, 3.0};
  for (double c : couplings) {
    YukawaPotential p(c, 1.0, 1.0, 3);
    const auto cert = certify(p);
    REQUIRE(cert.admissible);
    const auto sp = sample_potential(p, grid);
    for (double w : widths) {
      Field u = sample_field(
          grid, [&](double r) { return std::exp(-r * r / (2.0 * w * w)); });
      CHECK(hardy_check(sp, u, cert).holds);
    }
  }
}

TEST_CASE("sandwich_check: zero potential collapses, attractive case holds") {
  auto grid = make_grid(3, 30.0, 4096);
  Field u = sample_field(grid, [](double r) { return std::exp(-r * r / 2.0); });

  const auto zrep = sandwich_check(zero_potential(grid), u, zero_certificate(3));
  const double grad = grad_norm_sq(u);
  CHECK(zrep.lower == doctest::Approx(grad).epsilon(1e-14));
  CHECK(zrep.quad_form == doctest::Approx(grad).epsilon(1e-14));
  CHECK(zrep.upper == doctest::Approx(grad).epsilon(1e-14));

  YukawaPotential p(-0.5, 1.0, 1.0, 3);
  const auto cert = certify(p);
  const auto rep = sandwich_check(sample_potential(p, grid), u, cert);
  CHECK(rep.lower_holds);
  CHECK(rep.upper_holds);
  CHECK(rep.lower > 0.0);  // discrete positivity of the quadratic form

  // scaling u leaves the booleans untouched
  Field u2 = 7.0 * u;
  const auto rep2 = sandwich_check(sample_potential(p, grid), u2, cert);
  CHECK(rep2.lower_holds);
  CHECK(rep2.upper_holds);
  CHECK(rep2.quad_form == doctest::Approx(49.0 * rep.quad_form).epsilon(1e-12));

  // inadmissible certificate is a precondition error
  const auto bad = certify(YukawaPotential(-1.0, 1.0, 1.0, 3));
  CHECK_THROWS_AS(sandwich_check(sample_potential(p, grid), u, bad),
                  std::invalid_argument);
}
