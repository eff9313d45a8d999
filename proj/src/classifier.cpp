#include "critnls/classifier.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace critnls {

PotentialHypotheses potential_hypotheses(
    const std::optional<YukawaPotential>& pot, double S) {
  PotentialHypotheses hyp;
  if (!pot || pot->c == 0.0) return hyp;  // V = 0 satisfies everything
  hyp.continuous = false;  // r^{-sigma} singularity at the origin, sigma > 0
  // x.grad V = -(sigma + a r) V: nonpositive iff V >= 0, i.e. c >= 0
  hyp.grad_x_nonpositive = pot->c >= 0.0;
  const PotentialCertificate cert = certify(*pot);
  hyp.admissible = cert.admissible;
  const double neg_lq = (pot->c < 0.0) ? cert.lq_norm : 0.0;
  hyp.neg_lq_below_S = neg_lq <= S;
  return hyp;
}

RegimeFlags classify_initial(const Field& u0, const SampledPotential& V,
                             const ThresholdPair& thr,
                             const PotentialHypotheses& hyp) {
  RegimeFlags flags;
  flags.E0 = total_energy(u0, V);
  flags.grad0 = grad_norm_sq(u0);
  flags.energy_negative = flags.E0 < 0.0;
  flags.below_threshold = flags.E0 < thr.energy && flags.grad0 < thr.grad_sq;
  flags.hypotheses = hyp;
  return flags;
}

std::vector<double> scattering_residual(
    const std::vector<std::pair<double, Field>>& snapshots,
    const SampledPotential& V, double lin_dt) {
  if (snapshots.size() < 3)
    throw std::invalid_argument("scattering_residual: need >= 3 snapshots");
  std::vector<Field> w;
  w.reserve(snapshots.size());
  for (const auto& [t, u] : snapshots) w.push_back(linear_evolve(u, V, -t, lin_dt));
  std::vector<double> res;
  for (std::size_t i = 1; i < w.size(); ++i)
    res.push_back(std::sqrt(h1_norm_sq(w[i] - w[i - 1])));
  return res;
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::ScatteringEvidence: return "ScatteringEvidence";
    case Outcome::BlowUpEvidence: return "BlowUpEvidence";
    case Outcome::Undecided: return "Undecided";
  }
  return "?";
}

InitialKind initial_kind_from_string(const std::string& s) {
  if (s == "gaussian") return InitialKind::Gaussian;
  if (s == "bubble") return InitialKind::Bubble;
  if (s == "scaled_ground_state") return InitialKind::ScaledGroundState;
  throw std::invalid_argument("unknown initial-data kind: " + s);
}

const char* to_string(InitialKind k) {
  switch (k) {
    case InitialKind::Gaussian: return "gaussian";
    case InitialKind::Bubble: return "bubble";
    case InitialKind::ScaledGroundState: return "scaled_ground_state";
  }
  return "?";
}

namespace {

double smooth_cut(double r, double rc, double rw) {
  if (r <= rc) return 1.0;
  if (r >= rc + rw) return 0.0;
  const double s = (r - rc) / rw;
  return 1.0 - s * s * s * s * (35.0 - 84.0 * s + 70.0 * s * s - 20.0 * s * s * s);
}

}  // namespace

Field initial_data(InitialKind kind, double amplitude, double width,
                   GridPtr grid, const GroundState* gs) {
  switch (kind) {
    case InitialKind::Gaussian:
      return sample_field(grid, [&](double r) {
        return amplitude * std::exp(-r * r / (2.0 * width * width));
      });
    case InitialKind::Bubble: {
      Field u = aubin_talenti(1.0, grid);
      const double rc = 0.3 * grid->r_max();
      const double rw = 0.2 * grid->r_max();
      for (int j = 0; j < u.size(); ++j)
        u[j] *= amplitude * smooth_cut(grid->r(j), rc, rw);
      u.set_real_nonnegative(amplitude >= 0.0);
      return u;
    }
    case InitialKind::ScaledGroundState: {
      if (!gs) throw std::invalid_argument("initial_data: ground state required");
      require_same_grid(gs->profile, *grid);
      Field u = gs->profile;
      u *= amplitude;
      u.set_real_nonnegative(amplitude >= 0.0);
      return u;
    }
  }
  throw std::logic_error("initial_data: unreachable");
}

double boundary_mass_fraction(const Field& u) {
  const RadialGrid& g = u.grid();
  const double edge = 0.9 * g.r_max();
  double outer = 0.0, total = 0.0;
  for (int j = 0; j < u.size(); ++j) {
    const double cell = g.weight(j) * std::norm(u[j]);
    total += cell;
    if (g.r(j) >= edge) outer += cell;
  }
  return (total > 0.0) ? outer / total : 0.0;
}

Verdict run_dichotomy(const Field& u0, const DichotomyInputs& in,
                      const GroundState& gs, const SampledPotential& Vs,
                      EvolveResult* evolution_out) {
  Verdict v;
  const double S = sobolev_constant(in.grid);
  const ThresholdPair thr = threshold(gs, Vs);
  v.flags = classify_initial(u0, Vs, thr, potential_hypotheses(in.pot, S));

  const double R = (in.psi_R > 0.0) ? in.psi_R : 0.25 * in.grid->r_max();
  const VirialProfile psi = make_psi(R, in.grid);

  EvolveProbes probes;
  probes.psi = &psi;
  const int total_records =
      static_cast<int>(in.cfg.steps() / in.cfg.record_stride);
  probes.snapshot_stride =
      std::max(1, total_records / std::max(1, in.snapshot_count));

  EvolveResult run = evolve(u0, Vs, in.cfg, {}, probes);
  v.termination = run.termination;

  const double grad0 = v.flags.grad0;
  double worst_boundary = 0.0;
  for (const auto& [t, snap] : run.snapshots)
    worst_boundary = std::max(worst_boundary, boundary_mass_fraction(snap));
  worst_boundary = std::max(worst_boundary, boundary_mass_fraction(run.final));
  v.boundary_mass_fraction = worst_boundary;

  if (!run.records.empty() && grad0 > 0.0)
    v.final_grad_ratio = run.records.back().grad_sq / grad0;

  // virial slope sign over the recorded tail
  if (run.records.size() >= 3) {
    const SlopeCheck sc = virial_slope_check(run.records, v.flags.E0);
    const bool all_neg = std::all_of(sc.slopes.begin(), sc.slopes.end(),
                                     [](double s) { return s < 0.0; });
    const bool all_pos = std::all_of(sc.slopes.begin(), sc.slopes.end(),
                                     [](double s) { return s > 0.0; });
    v.virial_slope_sign = all_neg ? -1 : (all_pos ? 1 : 0);
  }

  if (run.termination == Termination::NumericalBreakdown) {
    v.outcome = Outcome::Undecided;
    v.reason = "numerical breakdown";
    if (evolution_out) *evolution_out = std::move(run);
    return v;
  }

  if (run.termination == Termination::BlowupDetected) {
    // grad ratio exceeded the factor; corroborate with an inward-momentum
    // tail. The record emitted at the detection step itself is already inside
    // the collapse and can rebound, so judge the last full-stride pair.
    const auto& recs = run.records;
    const std::size_t k = recs.size();
    std::size_t idx = (k >= 3) ? k - 2 : k - 1;
    const bool tail_negative = k >= 2 && recs[idx].virial_M < 0.0 &&
                               recs[idx].virial_M < recs[idx - 1].virial_M;
    if (tail_negative) {
      v.outcome = Outcome::BlowUpEvidence;
      v.reason = "gradient ratio exceeded with decreasing virial tail";
    } else {
      v.outcome = Outcome::Undecided;
      v.reason = "gradient ratio exceeded but virial tail not decreasing";
    }
    if (evolution_out) *evolution_out = std::move(run);
    return v;
  }

  // Completed run: truncation guard first
  if (worst_boundary > 1e-4) {
    v.outcome = Outcome::Undecided;
    v.reason = "mass reached the outer 10% of the domain";
    if (evolution_out) *evolution_out = std::move(run);
    return v;
  }

  v.strichartz_saturation = strichartz_increment_ratio(run.records);
  if (run.snapshots.size() >= 3) {
    const std::vector<double> res = scattering_residual(run.snapshots, Vs);
    if (res.front() > 0.0) v.linear_residual_ratio = res.back() / res.front();
  }

  const bool residuals_decreasing =
      v.linear_residual_ratio > 0.0 && v.linear_residual_ratio <= 0.5;
  const bool strichartz_saturating =
      std::isfinite(v.strichartz_saturation) && v.strichartz_saturation < 0.75;

  if (v.flags.below_threshold && residuals_decreasing && strichartz_saturating) {
    v.outcome = Outcome::ScatteringEvidence;
    v.reason = "below threshold, linear residuals decreasing, accumulator saturating";
  } else {
    v.outcome = Outcome::Undecided;
    v.reason = "completed without decisive evidence";
  }
  if (evolution_out) *evolution_out = std::move(run);
  return v;
}

namespace {

int sweep_thread_cap() {
  if (const char* env = std::getenv("CRITNLS_NUM_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

}  // namespace

std::vector<SweepRow> sweep(const std::vector<SweepCell>& cells, GridPtr grid,
                            const EvolutionConfig& cfg,
                            const GroundStateProvider& provider) {
  std::vector<SweepRow> rows(cells.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      SweepRow& row = rows[i];
      row.cell = cells[i];
      try {
        const SampledPotential Vs = row.cell.pot
                                        ? sample_potential(*row.cell.pot, grid)
                                        : zero_potential(grid);
        const GroundState gs = provider
                                   ? provider(row.cell.pot, grid)
                                   : find_ground_state(row.cell.pot, grid);
        const ThresholdPair thr = threshold(gs, Vs);
        row.E_W = thr.energy;
        row.grad_W = thr.grad_sq;
        const Field u0 =
            initial_data(row.cell.kind, row.cell.amplitude, row.cell.width,
                         grid, &gs);
        DichotomyInputs in;
        in.pot = row.cell.pot;
        in.grid = grid;
        in.cfg = cfg;
        row.verdict = run_dichotomy(u0, in, gs, Vs);
        row.E0 = row.verdict.flags.E0;
        row.grad0 = row.verdict.flags.grad0;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };

  const int n_threads =
      std::min<int>(sweep_thread_cap(), static_cast<int>(cells.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return rows;
}

}  // namespace critnls
