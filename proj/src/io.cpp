#include "critnls/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace critnls {

namespace {

constexpr const char* kCacheHeader = "# critnls-gscache v1";

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string opt_num(double x) { return std::isfinite(x) ? num(x) : "nan"; }

}  // namespace

void write_trajectory_csv(const std::vector<TrajectoryRecord>& records,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "t,mass,energy,grad_sq,virial_M,virial_dM_fd,strichartz_accum,"
         "h1_vs_linear\n";
  for (const auto& r : records)
    out << num(r.t) << ',' << num(r.mass) << ',' << num(r.energy) << ','
        << num(r.grad_sq) << ',' << opt_num(r.virial_M) << ','
        << opt_num(r.virial_dM_fd) << ',' << num(r.strichartz_accum) << ','
        << opt_num(r.h1_vs_linear) << '\n';
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "kind,c,sigma,a,initial,amplitude,E0,E_W,grad0,gradW,outcome,"
         "final_grad_ratio,strichartz_saturation,linear_residual_ratio,"
         "virial_slope_sign,termination,error\n";
  for (const auto& row : rows) {
    const auto& p = row.cell.pot;
    out << (p ? "yukawa" : "zero") << ',' << num(p ? p->c : 0.0) << ','
        << num(p ? p->sigma : 0.0) << ',' << num(p ? p->a : 0.0) << ','
        << to_string(row.cell.kind) << ',' << num(row.cell.amplitude) << ','
        << num(row.E0) << ',' << num(row.E_W) << ',' << num(row.grad0) << ','
        << num(row.grad_W) << ',' << to_string(row.verdict.outcome) << ','
        << num(row.verdict.final_grad_ratio) << ','
        << opt_num(row.verdict.strichartz_saturation) << ','
        << num(row.verdict.linear_residual_ratio) << ','
        << row.verdict.virial_slope_sign << ','
        << to_string(row.verdict.termination) << ',' << row.error << '\n';
  }
}

void write_outcome_plot_data(const std::vector<SweepRow>& rows,
                             const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "# amplitude outcome_code (0 scattering, 1 undecided, 2 blow-up)\n";
  for (const auto& row : rows) {
    int code = 1;
    if (row.verdict.outcome == Outcome::ScatteringEvidence) code = 0;
    if (row.verdict.outcome == Outcome::BlowUpEvidence) code = 2;
    out << num(row.cell.amplitude) << ' ' << code << '\n';
  }
}

GroundStateCache GroundStateCache::load(const std::string& path) {
  GroundStateCache cache;
  std::ifstream in(path);
  if (!in) return cache;
  std::string line;
  if (!std::getline(in, line) || line != kCacheHeader)
    throw std::runtime_error("ground-state cache: bad header in " + path);
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    CacheEntry e;
    if (!(ss >> e.dim >> e.kind >> e.c >> e.sigma >> e.a >> e.r_max >> e.m >>
          e.b >> e.E_W >> e.grad_W_sq >> e.pohozaev >> e.nehari))
      throw std::runtime_error("ground-state cache: malformed row: " + line);
    cache.entries_.push_back(e);
  }
  return cache;
}

void GroundStateCache::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << kCacheHeader << '\n';
  out << "# dim kind c sigma a r_max m b E_W grad_W_sq pohozaev nehari\n";
  for (const auto& e : entries_)
    out << e.dim << ' ' << e.kind << ' ' << num(e.c) << ' ' << num(e.sigma)
        << ' ' << num(e.a) << ' ' << num(e.r_max) << ' ' << e.m << ' '
        << num(e.b) << ' ' << num(e.E_W) << ' ' << num(e.grad_W_sq) << ' '
        << num(e.pohozaev) << ' ' << num(e.nehari) << '\n';
}

namespace {

bool matches(const CacheEntry& e, const std::optional<YukawaPotential>& pot,
             const RadialGrid& grid) {
  if (e.dim != grid.dim() || e.m != grid.size() || e.r_max != grid.r_max())
    return false;
  if (!pot || pot->c == 0.0) return e.kind == "zero";
  return e.kind == "yukawa" && e.c == pot->c && e.sigma == pot->sigma &&
         e.a == pot->a;
}

}  // namespace

std::optional<CacheEntry> GroundStateCache::lookup(
    const std::optional<YukawaPotential>& pot, const RadialGrid& grid) const {
  for (const auto& e : entries_)
    if (matches(e, pot, grid)) return e;
  return std::nullopt;
}

void GroundStateCache::upsert(const CacheEntry& entry) {
  for (auto& e : entries_) {
    if (e.dim == entry.dim && e.kind == entry.kind && e.c == entry.c &&
        e.sigma == entry.sigma && e.a == entry.a && e.r_max == entry.r_max &&
        e.m == entry.m) {
      e = entry;
      return;
    }
  }
  entries_.push_back(entry);
}

CacheEntry cache_entry_from(const GroundState& gs,
                            const std::optional<YukawaPotential>& pot,
                            const RadialGrid& grid) {
  CacheEntry e;
  e.dim = grid.dim();
  e.kind = (!pot || pot->c == 0.0) ? "zero" : "yukawa";
  if (pot) {
    e.c = pot->c;
    e.sigma = pot->sigma;
    e.a = pot->a;
  }
  e.r_max = grid.r_max();
  e.m = grid.size();
  e.b = gs.shoot_amplitude;
  e.E_W = gs.energy;
  e.grad_W_sq = gs.grad_sq;
  e.pohozaev = gs.pohozaev_residual;
  e.nehari = gs.nehari_residual;
  return e;
}

}  // namespace critnls
