#pragma once

#include "critnls/classifier.hpp"
#include "critnls/evolution.hpp"
#include "critnls/groundstate.hpp"

#include <optional>
#include <string>
#include <vector>

namespace critnls {

/// Trajectory CSV with the fixed column order
/// t,mass,energy,grad_sq,virial_M,virial_dM_fd,strichartz_accum,h1_vs_linear.
void write_trajectory_csv(const std::vector<TrajectoryRecord>& records,
                          const std::string& path);

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

/// Two-column (amplitude, outcome code) series for plotting; codes:
/// 0 scattering, 1 undecided, 2 blow-up.
void write_outcome_plot_data(const std::vector<SweepRow>& rows,
                             const std::string& path);

/// Ground-state cache: versioned fixed-width text table keyed by potential
/// parameters and grid, so classifier runs do not re-shoot.
struct CacheEntry {
  int dim = 3;
  std::string kind = "zero";
  double c = 0.0, sigma = 0.0, a = 0.0;
  double r_max = 0.0;
  int m = 0;
  double b = 0.0;
  double E_W = 0.0;
  double grad_W_sq = 0.0;
  double pohozaev = 0.0;
  double nehari = 0.0;
};

class GroundStateCache {
public:
  static GroundStateCache load(const std::string& path);  // missing file -> empty
  void save(const std::string& path) const;

  std::optional<CacheEntry> lookup(const std::optional<YukawaPotential>& pot,
                                   const RadialGrid& grid) const;
  void upsert(const CacheEntry& entry);

  const std::vector<CacheEntry>& entries() const { return entries_; }

private:
  std::vector<CacheEntry> entries_;
};

CacheEntry cache_entry_from(const GroundState& gs,
                            const std::optional<YukawaPotential>& pot,
                            const RadialGrid& grid);

}  // namespace critnls
