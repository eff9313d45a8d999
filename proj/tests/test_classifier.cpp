#include "critnls/classifier.hpp"

#include <doctest.h>

#include <cmath>

using namespace critnls;

namespace {
GridPtr test_grid() { return make_grid(3, 30.0, 4096); }
}  // namespace

TEST_CASE("potential hypotheses per condition") {
  auto g = test_grid();
  const double S = sobolev_constant(g);

  const auto zero = potential_hypotheses(std::nullopt, S);
  CHECK(zero.continuous);
  CHECK(zero.grad_x_nonpositive);
  CHECK(zero.neg_lq_below_S);
  CHECK(zero.admissible);

  const auto attractive =
      potential_hypotheses(YukawaPotential(-0.25, 1.0, 1.0, 3), S);
  CHECK_FALSE(attractive.continuous);        // r^{-sigma} singularity
  CHECK_FALSE(attractive.grad_x_nonpositive);  // x.grad V flips sign for c<0
  CHECK(attractive.neg_lq_below_S);
  CHECK(attractive.admissible);

  const auto repulsive =
      potential_hypotheses(YukawaPotential(0.5, 1.0, 1.0, 3), S);
  CHECK(repulsive.grad_x_nonpositive);
  CHECK(repulsive.admissible);
}

TEST_CASE("classify_initial: scaled ground-state data") {
  auto g = test_grid();
  auto Vz = zero_potential(g);
  const GroundState gs = find_ground_state(std::nullopt, g);
  const ThresholdPair thr = threshold(gs, Vz);
  const auto hyp = potential_hypotheses(std::nullopt, sobolev_constant(g));

  Field small = 0.1 * gs.profile;
  const auto f1 = classify_initial(small, Vz, thr, hyp);
  CHECK(f1.below_threshold);
  CHECK_FALSE(f1.energy_negative);

  Field big = 3.0 * gs.profile;
  const auto f2 = classify_initial(big, Vz, thr, hyp);
  CHECK(f2.energy_negative);
  CHECK_FALSE(f2.below_threshold);

  // the ground state itself sits on the boundary of both strict inequalities
  const auto f3 = classify_initial(gs.profile, Vz, thr, hyp);
  CHECK_FALSE(f3.below_threshold);
  CHECK_FALSE(f3.energy_negative);
}

TEST_CASE("scattering_residual: linear flow back-propagates to a point") {
  auto g = test_grid();
  YukawaPotential pot(-0.25, 1.0, 1.0, 3);
  auto Vs = sample_potential(pot, g);
  Field u0 = sample_field(g, [](double r) { return 0.4 * std::exp(-r * r / 2.0); });

  std::vector<std::pair<double, Field>> snaps;
  for (double t : {0.5, 1.0, 1.5, 2.0})
    snaps.emplace_back(t, linear_evolve(u0, Vs, t, 1e-3));
  const auto res = scattering_residual(snaps, Vs, 1e-3);
  REQUIRE(res.size() == 3);
  for (double r : res) CHECK(r < 1e-9);

  snaps.resize(2);
  CHECK_THROWS_AS(scattering_residual(snaps, Vs), std::invalid_argument);
}

TEST_CASE("initial_data kinds") {
  auto g = test_grid();
  CHECK(initial_kind_from_string("gaussian") == InitialKind::Gaussian);
  CHECK(initial_kind_from_string("bubble") == InitialKind::Bubble);
  CHECK(initial_kind_from_string("scaled_ground_state") ==
        InitialKind::ScaledGroundState);
  CHECK_THROWS_AS(initial_kind_from_string("plane_wave"), std::invalid_argument);

  Field gauss = initial_data(InitialKind::Gaussian, 0.7, 2.0, g);
  CHECK(gauss[0].real() == doctest::Approx(0.7).epsilon(1e-5));

  Field bub = initial_data(InitialKind::Bubble, 1.0, 1.0, g);
  // truncated inside the domain: zero past half the radius, finite mass
  CHECK(bub[g->size() - 1] == complexd(0.0, 0.0));
  CHECK(mass(bub) < 300.0);  // the raw bubble diverges linearly in r_max
  CHECK(boundary_mass_fraction(bub) == 0.0);

  CHECK_THROWS_AS(initial_data(InitialKind::ScaledGroundState, 1.0, 1.0, g),
                  std::invalid_argument);
}

TEST_CASE("boundary_mass_fraction flags wall-hugging data") {
  auto g = test_grid();
  Field inner = sample_field(g, [](double r) { return std::exp(-r * r); });
  CHECK(boundary_mass_fraction(inner) < 1e-10);
  Field ring = sample_field(g, [&](double r) {
    return std::exp(-(r - 28.0) * (r - 28.0));
  });
  CHECK(boundary_mass_fraction(ring) > 0.5);
}

TEST_CASE("run_dichotomy: three regimes") {
  auto g = test_grid();

  SUBCASE("small Gaussian with attractive Yukawa scatters") {
    YukawaPotential pot(-0.25, 1.0, 1.0, 3);
    auto Vs = sample_potential(pot, g);
    const GroundState gs = find_ground_state(pot, g);
    Field u0 =
        sample_field(g, [](double r) { return 0.05 * std::exp(-r * r / 2.0); });
    DichotomyInputs in;
    in.pot = pot;
    in.grid = g;
    in.cfg.dt = 2e-3;
    in.cfg.t_end = 4.0;
    in.cfg.record_stride = 25;
    const Verdict v = run_dichotomy(u0, in, gs, Vs);
    CHECK(v.outcome == Outcome::ScatteringEvidence);
    CHECK(v.flags.below_threshold);
    CHECK(v.linear_residual_ratio < 0.5);
    CHECK(v.strichartz_saturation < 0.75);
    CHECK(v.boundary_mass_fraction < 1e-4);
  }

  SUBCASE("amplified bubble blows up") {
    auto Vz = zero_potential(g);
    const GroundState gs = find_ground_state(std::nullopt, g);
    Field u0 = initial_data(InitialKind::Bubble, 3.0, 1.0, g, &gs);
    DichotomyInputs in;
    in.grid = g;
    in.cfg.dt = 1e-3;
    in.cfg.t_end = 2.0;
    in.cfg.record_stride = 10;
    const Verdict v = run_dichotomy(u0, in, gs, Vz);
    CHECK(v.outcome == Outcome::BlowUpEvidence);
    CHECK(v.termination == Termination::BlowupDetected);
    CHECK(v.flags.energy_negative);
    CHECK(v.final_grad_ratio > in.cfg.blowup_grad_factor);
  }

  SUBCASE("standing wave is undecided at desk horizon") {
    YukawaPotential pot(-0.25, 1.0, 1.0, 3);
    auto Vs = sample_potential(pot, g);
    const GroundState gs = find_ground_state(pot, g);
    DichotomyInputs in;
    in.pot = pot;
    in.grid = g;
    in.cfg.dt = 1e-3;
    in.cfg.t_end = 0.5;
    in.cfg.record_stride = 25;
    const Verdict v = run_dichotomy(gs.profile, in, gs, Vs);
    CHECK(v.outcome == Outcome::Undecided);
    CHECK(v.termination == Termination::Completed);
  }
}

TEST_CASE("sweep: determinism, order, per-cell failures") {
  auto g = test_grid();
  EvolutionConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1.0;
  cfg.record_stride = 20;

  SweepCell blow;
  blow.kind = InitialKind::Bubble;
  blow.amplitude = 3.0;
  SweepCell bad;  // borderline coupling: certification rejects it
  bad.pot = YukawaPotential(-1.0, 1.0, 1.0, 3);
  bad.kind = InitialKind::Gaussian;
  bad.amplitude = 0.05;

  const auto rows = sweep({blow, bad, blow}, g, cfg);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].error.empty());
  CHECK(rows[0].verdict.outcome == Outcome::BlowUpEvidence);
  CHECK_FALSE(rows[1].error.empty());  // failure recorded, sweep continued
  CHECK(rows[2].verdict.outcome == rows[0].verdict.outcome);
  CHECK(rows[2].E0 == rows[0].E0);  // duplicate rows are identical
  CHECK(rows[2].verdict.final_grad_ratio == rows[0].verdict.final_grad_ratio);
}
