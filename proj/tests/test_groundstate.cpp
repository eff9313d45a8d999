#include "critnls/groundstate.hpp"

#include <doctest.h>

#include <cmath>

using namespace critnls;

namespace {
// large enough that the slow r^{-(N-2)} tails of the critical profiles are
// resolved without making unit tests slow; acceptance uses a bigger one
GridPtr medium_grid() { return make_grid(3, 3000.0, 131072); }
}  // namespace

TEST_CASE("aubin_talenti: pointwise values and central amplitude") {
  auto g = medium_grid();
  Field U = aubin_talenti(1.0, g);
  CHECK(U.real_nonnegative());
  const double amp = std::pow(3.0, 0.25);
  // r -> 0 value is [N(N-2)]^{(N-2)/4} = 3^{1/4} for N=3
  CHECK(std::abs(U[0].real() - amp) < 1e-3);
  for (int j : {100, 5000, 70000}) {
    const double r = g->r(j);
    const double expect = amp * std::pow(1.0 / (1.0 + r * r), 0.5);
    CHECK(U[j].real() == doctest::Approx(expect).epsilon(1e-14));
  }
  CHECK_THROWS_AS(aubin_talenti(0.0, g), std::domain_error);
}

TEST_CASE("aubin_talenti: gradient norm is scale invariant") {
  auto g = medium_grid();
  const double g1 = grad_norm_sq(aubin_talenti(1.0, g));
  const double g2 = grad_norm_sq(aubin_talenti(2.0, g));
  CHECK(std::abs(g1 - g2) / g1 < 1e-3);
}

TEST_CASE("aubin_talenti: far field decays like r^{2-N}") {
  auto g = medium_grid();
  Field U = aubin_talenti(1.0, g);
  auto at = [&](double r) {
    const int j = static_cast<int>(std::llround(r / g->dr())) - 1;
    return U[j].real();
  };
  CHECK(at(200.0) / at(100.0) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("sobolev constant from the bubble") {
  auto g = medium_grid();
  const double S = sobolev_constant(g);
  // continuum value S^{3/2} = (3 sqrt(3)/4) pi^2; truncated tail is O(1/r_max)
  const double exact = std::pow(0.75 * std::sqrt(3.0) * M_PI * M_PI, 2.0 / 3.0);
  CHECK(S == doctest::Approx(exact).epsilon(1e-3));
}

TEST_CASE("shoot: V=0 decays clean for moderate amplitudes") {
  auto V = zero_fn();
  for (double b : {1.0, 1.3, 2.0, 5.0}) {
    CAPTURE(b);
    const auto out = shoot(V, 3, b);
    CHECK(out.classification == ShootClass::DecaysClean);
  }
  CHECK_THROWS_AS(shoot(V, 3, -1.0), std::domain_error);
}

TEST_CASE("shoot: V=0 profile maps onto the bubble family") {
  // shoot(0, b) must reproduce aubin_talenti(eps(b)) with
  // eps(b) = ([N(N-2)]^{(N-2)/4}/b)^{2/(N-2)}
  auto g = make_grid(3, 30.0, 4096);
  const double b = 2.0;
  const double eps = bubble_eps_for_amplitude(b, 3);
  CHECK(eps == doctest::Approx(std::pow(std::pow(3.0, 0.25) / b, 2.0)));
  Field W = shoot_profile(zero_fn(), g, b);
  Field U = aubin_talenti(eps, g);
  double worst = 0.0;
  for (int j = 0; j < W.size() && g->r(j) <= 10.0; ++j)
    worst = std::max(worst,
                     std::abs(W[j].real() - U[j].real()) / U[j].real());
  CHECK(worst < 1e-6);
}

TEST_CASE("shoot: attractive Yukawa has two distinct branches") {
  YukawaPotential pot(-0.25, 1.0, 1.0, 3);
  auto V = yukawa_fn(pot);
  ShootOptions opts;
  opts.r_end = 3000.0;
  const auto low = shoot(V, 3, 0.5, opts);
  const auto high = shoot(V, 3, 5.0, opts);
  CHECK(high.classification == ShootClass::CrossesZero);
  CHECK(high.crossing_radius.has_value());
  CHECK(low.classification != ShootClass::CrossesZero);
}

TEST_CASE("find_ground_state: V=0 short-circuits to the eps=1 bubble") {
  auto g = medium_grid();
  const GroundState gs = find_ground_state(std::nullopt, g);
  Field U = aubin_talenti(1.0, g);
  for (int j : {0, 1000, 50000})
    CHECK(gs.profile[j].real() == doctest::Approx(U[j].real()).epsilon(1e-14));
  CHECK(gs.shoot_amplitude == doctest::Approx(std::pow(3.0, 0.25)));
  CHECK(gs.potential_id == "zero");
  // identity residuals on this grid are tail-limited at O(1/r_max)
  CHECK(std::abs(gs.nehari_residual) < 1e-2);
  CHECK(std::abs(gs.pohozaev_residual) < 2e-3);
}

TEST_CASE("find_ground_state: attractive Yukawa") {
  auto g = medium_grid();
  YukawaPotential pot(-0.25, 1.0, 1.0, 3);
  const GroundState gs = find_ground_state(pot, g);

  // shooting converged to the decaying separatrix
  CHECK(gs.shoot_amplitude > 1.0);
  CHECK(gs.shoot_amplitude < 2.0);

  // positive and monotone nonincreasing profile
  bool positive_core = true, monotone = true;
  for (int j = 0; j + 1 < gs.profile.size(); ++j) {
    const double w0 = gs.profile[j].real(), w1 = gs.profile[j + 1].real();
    if (g->r(j) < 100.0 && w0 <= 0.0) positive_core = false;
    if (w1 > w0 + 1e-12) monotone = false;
  }
  CHECK(positive_core);
  CHECK(monotone);

  // identity residuals within the acceptance-scale bound
  CHECK(std::abs(gs.nehari_residual) < 1e-4 * gs.grad_sq);
  CHECK(std::abs(gs.pohozaev_residual) < 1e-4 * gs.grad_sq);

  // the attractive potential lowers the threshold below the free bubble
  const GroundState bubble = find_ground_state(std::nullopt, g);
  CHECK(gs.grad_sq < bubble.grad_sq);
  CHECK(gs.energy < bubble.energy);
}

TEST_CASE("find_ground_state rejects inadmissible potentials") {
  auto g = make_grid(3, 30.0, 512);
  YukawaPotential borderline(-1.0, 1.0, 1.0, 3);
  CHECK_THROWS_AS(find_ground_state(borderline, g), std::invalid_argument);
}

TEST_CASE("static_energy: zero field, bubble level, Nehari maximum at t=1") {
  auto g = medium_grid();
  const auto Vz = zero_potential(g);
  CHECK(static_energy(Field(g), Vz) == 0.0);

  Field U = aubin_talenti(1.0, g);
  const double S = sobolev_constant(g);
  CHECK(static_energy(U, Vz) ==
        doctest::Approx(std::pow(S, 1.5) / 3.0).epsilon(1e-3));

  // 1-D scan oracle over t in [0.5, 1.5]: I(tU) is maximized at t ~ 1
  double best_t = 0.0, best_I = -1e30;
  for (int k = 0; k <= 100; ++k) {
    const double t = 0.5 + 0.01 * k;
    Field tu = t * U;
    const double I = static_energy(tu, Vz);
    if (I > best_I) {
      best_I = I;
      best_t = t;
    }
  }
  CHECK(best_t == doctest::Approx(1.0).epsilon(0.011));
}

TEST_CASE("pohozaev and nehari residuals detect non-solutions") {
  auto g = medium_grid();
  const auto Vz = zero_potential(g);
  Field U = aubin_talenti(1.0, g);

  CHECK(std::abs(nehari_residual(U, Vz)) < 1e-2);
  CHECK(std::abs(pohozaev_residual(U, Vz)) < 2e-3);

  Field U2 = 2.0 * U;
  // the 2^{2*} overweight of the critical term makes both residuals negative
  CHECK(pohozaev_residual(U2, Vz) < -1.0);
  CHECK(nehari_residual(U2, Vz) < -1.0);

  Field Uh = 0.5 * U;
  CHECK(nehari_residual(Uh, Vz) > 1.0);

  SampledPotential no_deriv = Vz;
  no_deriv.radial_derivative.reset();
  CHECK_THROWS_AS(pohozaev_residual(U, no_deriv), std::invalid_argument);
}

TEST_CASE("threshold: V=0 values and x.grad V sign") {
  auto g = medium_grid();
  const GroundState gs = find_ground_state(std::nullopt, g);
  const auto Vz = zero_potential(g);
  const ThresholdPair thr = threshold(gs, Vz);
  CHECK(thr.grad_sq == doctest::Approx(gs.grad_sq));
  CHECK(thr.energy == doctest::Approx(gs.grad_sq / 3.0).epsilon(1e-12));
  CHECK(thr.consistency < 1e-4 * thr.grad_sq);

  // x.grad V <= 0 pushes the threshold energy above grad^2/N
  SampledPotential repulsive = Vz;
  for (int j = 0; j < g->size(); ++j) {
    repulsive.values[j] = std::exp(-g->r(j));
    (*repulsive.radial_derivative)[j] = -std::exp(-g->r(j));
  }
  const ThresholdPair thr2 = threshold(gs, repulsive);
  CHECK(thr2.energy >= thr2.grad_sq / 3.0);
}

TEST_CASE("mountain pass diagnostic") {
  auto g = medium_grid();
  const MountainPassReport free_rep = mountain_pass_diagnostic(std::nullopt, g);
  CHECK(free_rep.t_star > 0.0);
  CHECK(free_rep.value ==
        doctest::Approx(free_rep.sobolev_level).epsilon(1e-3));

  auto g_small = make_grid(3, 30.0, 4096);
  YukawaPotential pot(-0.25, 1.0, 1.0, 3);
  const MountainPassReport rep = mountain_pass_diagnostic(pot, g_small);
  CHECK(rep.t_star > 0.0);
  CHECK(std::isfinite(rep.t_star));
  CHECK(rep.value <= rep.sobolev_level * (1.0 + 1e-3));
}
