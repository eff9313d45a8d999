// critnls: desk-scale laboratory for the focusing energy-critical Schroedinger
// equation with a radial Kato-class potential. Subcommands certify potentials,
// compute ground states and thresholds, evolve radial data, and classify
// trajectories into scattering/blow-up evidence.

#include "critnls/config.hpp"
#include "critnls/diagnostics.hpp"
#include "critnls/io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>

namespace fs = std::filesystem;
using namespace critnls;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;  // overrides [output] dir when set
  long long seed = 0;   // reserved; runs are deterministic
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "run configuration file")
      ->required();
  cmd->add_option("--out", args.out_dir, "output directory (overrides config)");
  cmd->add_option("--seed", args.seed, "reserved; runs are deterministic");
  cmd->add_flag("--quiet", args.quiet, "suppress progress output");
}

struct Loaded {
  RunConfig cfg;
  fs::path out;
};

Loaded load(const CommonArgs& args) {
  Loaded l;
  l.cfg = RunConfig::parse_file(args.config_path);
  l.out = args.out_dir.empty() ? fs::path(l.cfg.out_dir) : fs::path(args.out_dir);
  fs::create_directories(l.out);
  // sidecar carries the canonical config; data files stay timestamp-free
  std::ofstream meta(l.out / "run_config.meta");
  meta << l.cfg.canonical();
  return l;
}

// Consults the on-disk cache before shooting; a hit replays the stored
// amplitude instead of re-running the bisection.
GroundState ground_state_cached(const std::optional<YukawaPotential>& pot,
                                GridPtr grid, const fs::path& out, bool quiet,
                                std::mutex* cache_mutex = nullptr) {
  const fs::path cache_path = out / "ground_states.tsv";
  std::unique_lock<std::mutex> lock;
  if (cache_mutex) lock = std::unique_lock<std::mutex>(*cache_mutex);
  GroundStateCache cache = GroundStateCache::load(cache_path.string());
  if (const auto hit = cache.lookup(pot, *grid)) {
    if (!quiet) std::cout << "ground state: cache hit (b=" << hit->b << ")\n";
    return ground_state_at_amplitude(pot, grid, hit->b);
  }
  const GroundState gs = find_ground_state(pot, grid);
  cache.upsert(cache_entry_from(gs, pot, *grid));
  cache.save(cache_path.string());
  if (!quiet)
    std::cout << "ground state: b=" << gs.shoot_amplitude
              << " E(W)=" << gs.energy << " grad^2=" << gs.grad_sq
              << " pohozaev=" << gs.pohozaev_residual
              << " nehari=" << gs.nehari_residual << "\n";
  return gs;
}

int cmd_potential_info(const CommonArgs& args) {
  const Loaded l = load(args);
  const auto pot = l.cfg.potential();
  if (!pot) {
    std::cout << "potential: zero (trivially admissible)\n";
    return 0;
  }
  const PotentialCertificate cert = certify(*pot);
  const KatoQuadratureResult quad = kato_norm_quadrature(
      [&](double r) { return yukawa_eval(*pot, r); }, pot->dim);
  const double lq_quad = lq_norm_quadrature(
      [&](double r) { return yukawa_eval(*pot, r); }, pot->dim, 0.5 * pot->dim);
  std::cout << "potential: yukawa c=" << pot->c << " sigma=" << pot->sigma
            << " a=" << pot->a << " N=" << pot->dim << "\n"
            << "kato_norm (closed form)   = " << cert.kato_norm << "\n"
            << "kato_norm (quadrature)    = " << quad.value
            << (quad.divergent ? "  [divergent]" : "") << "\n"
            << "kato_norm_negative_part   = " << cert.kato_norm_negative_part
            << "\n"
            << "lq_norm N/2 (closed form) = " << cert.lq_norm << "\n"
            << "lq_norm N/2 (quadrature)  = " << lq_quad << "\n"
            << "threshold N(N-2)alpha(N)  = " << cert.threshold << "\n"
            << "margin                    = " << cert.margin << "\n"
            << "admissible                = " << (cert.admissible ? "yes" : "no")
            << "\n";
  return cert.admissible ? 0 : 1;
}

int cmd_ground_state(const CommonArgs& args) {
  const Loaded l = load(args);
  const GridPtr grid = l.cfg.make_run_grid();
  try {
    ground_state_cached(l.cfg.potential(), grid, l.out, args.quiet);
  } catch (const NoGroundStateBracket& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}

int cmd_evolve(const CommonArgs& args) {
  const Loaded l = load(args);
  const GridPtr grid = l.cfg.make_run_grid();
  const auto pot = l.cfg.potential();
  const SampledPotential Vs =
      pot ? sample_potential(*pot, grid) : zero_potential(grid);
  const GroundState gs = ground_state_cached(pot, grid, l.out, args.quiet);
  const Field u0 =
      initial_data(l.cfg.initial(), l.cfg.amplitude, l.cfg.width, grid, &gs);

  const double R = l.cfg.psi_radii.empty() ? 0.25 * grid->r_max()
                                           : l.cfg.psi_radii.front();
  const VirialProfile psi = make_psi(R, grid);
  EvolveProbes probes;
  probes.psi = &psi;
  const EvolveResult res = evolve(u0, Vs, l.cfg.evolution(), {}, probes);

  // midpoint finite-difference slope column
  std::vector<TrajectoryRecord> recs = res.records;
  for (std::size_t i = 1; i + 1 < recs.size(); ++i)
    recs[i].virial_dM_fd = (recs[i + 1].virial_M - recs[i - 1].virial_M) /
                           (recs[i + 1].t - recs[i - 1].t);
  write_trajectory_csv(recs, (l.out / "trajectory.csv").string());
  try {
    const auto adj = adjudicate_virial_forms(recs);
    write_adjudication_table(adj, (l.out / "virial_adjudication.csv").string());
  } catch (const std::invalid_argument&) {
    // too few samples for the oracle table; trajectory.csv still stands
  }
  if (!args.quiet)
    std::cout << "evolve: " << to_string(res.termination) << " after "
              << recs.back().t << " time units, " << recs.size()
              << " records -> " << (l.out / "trajectory.csv").string() << "\n";
  return res.termination == Termination::NumericalBreakdown ? 1 : 0;
}

int run_sweep_cells(const Loaded& l, const std::vector<SweepCell>& cells,
                    bool quiet) {
  const GridPtr grid = l.cfg.make_run_grid();
  std::mutex cache_mutex;
  const GroundStateProvider provider =
      [&](const std::optional<YukawaPotential>& pot, GridPtr g) {
        return ground_state_cached(pot, g, l.out, true, &cache_mutex);
      };
  const std::vector<SweepRow> rows =
      sweep(cells, grid, l.cfg.evolution(), provider);
  write_sweep_csv(rows, (l.out / "verdicts.csv").string());
  write_outcome_plot_data(rows, (l.out / "outcome_vs_amplitude.dat").string());
  bool any_error = false;
  for (const auto& row : rows) {
    if (!quiet)
      std::cout << "amplitude " << row.cell.amplitude << ": "
                << (row.error.empty() ? to_string(row.verdict.outcome)
                                      : ("error: " + row.error))
                << "\n";
    if (!row.error.empty()) any_error = true;
  }
  if (!quiet)
    std::cout << "wrote " << (l.out / "verdicts.csv").string() << "\n";
  return any_error ? 1 : 0;
}

int cmd_classify(const CommonArgs& args) {
  const Loaded l = load(args);
  const GridPtr grid = l.cfg.make_run_grid();
  const auto pot = l.cfg.potential();
  const SampledPotential Vs =
      pot ? sample_potential(*pot, grid) : zero_potential(grid);
  const GroundState gs = ground_state_cached(pot, grid, l.out, args.quiet);
  const Field u0 =
      initial_data(l.cfg.initial(), l.cfg.amplitude, l.cfg.width, grid, &gs);

  DichotomyInputs in;
  in.pot = pot;
  in.grid = grid;
  in.cfg = l.cfg.evolution();
  if (!l.cfg.psi_radii.empty()) in.psi_R = l.cfg.psi_radii.front();
  EvolveResult ev;
  const Verdict v = run_dichotomy(u0, in, gs, Vs, &ev);

  SweepRow row;
  row.cell.pot = pot;
  row.cell.kind = l.cfg.initial();
  row.cell.amplitude = l.cfg.amplitude;
  row.cell.width = l.cfg.width;
  row.verdict = v;
  row.E0 = v.flags.E0;
  row.grad0 = v.flags.grad0;
  const ThresholdPair thr = threshold(gs, Vs);
  row.E_W = thr.energy;
  row.grad_W = thr.grad_sq;
  write_sweep_csv({row}, (l.out / "verdicts.csv").string());
  write_outcome_plot_data({row}, (l.out / "outcome_vs_amplitude.dat").string());
  std::vector<TrajectoryRecord> recs = ev.records;
  for (std::size_t i = 1; i + 1 < recs.size(); ++i)
    recs[i].virial_dM_fd = (recs[i + 1].virial_M - recs[i - 1].virial_M) /
                           (recs[i + 1].t - recs[i - 1].t);
  write_trajectory_csv(recs, (l.out / "trajectory.csv").string());
  if (!args.quiet)
    std::cout << "verdict: " << to_string(v.outcome) << " (" << v.reason
              << ")\n";
  return 0;
}

int cmd_sweep(const CommonArgs& args) {
  const Loaded l = load(args);
  if (l.cfg.amplitudes.empty()) {
    std::cerr << "sweep: [sweep] amplitudes is empty\n";
    return 2;
  }
  std::vector<SweepCell> cells;
  for (double amp : l.cfg.amplitudes) {
    SweepCell cell;
    cell.pot = l.cfg.potential();
    cell.kind = l.cfg.initial();
    cell.amplitude = amp;
    cell.width = l.cfg.width;
    cells.push_back(cell);
  }
  return run_sweep_cells(l, cells, args.quiet);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"critical NLS laboratory"};
  app.require_subcommand(1);

  CommonArgs args;
  CLI::App* info = app.add_subcommand("potential-info",
                                      "admissibility certificate for the potential");
  CLI::App* gs = app.add_subcommand("ground-state",
                                    "shooting ground state and threshold pair");
  CLI::App* ev = app.add_subcommand("evolve", "time integration with diagnostics");
  CLI::App* cl = app.add_subcommand("classify", "single dichotomy verdict");
  CLI::App* sw = app.add_subcommand("sweep", "amplitude sweep of verdicts");
  for (CLI::App* cmd : {info, gs, ev, cl, sw}) add_common(cmd, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (info->parsed()) return cmd_potential_info(args);
    if (gs->parsed()) return cmd_ground_state(args);
    if (ev->parsed()) return cmd_evolve(args);
    if (cl->parsed()) return cmd_classify(args);
    if (sw->parsed()) return cmd_sweep(args);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
