#pragma once

#include "critnls/classifier.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace critnls {

class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Flat sectioned key=value run configuration. Parsing is strict: unknown
/// sections or keys are errors that name the offender, and re-serializing a
/// parsed config reproduces a canonical form byte for byte.
struct RunConfig {
  // [grid]
  int dim = 3;
  double r_max = 30.0;
  int m = 4096;
  // [potential]
  std::string potential_kind = "zero";  // zero | yukawa
  double c = 0.0;
  double sigma = 1.0;
  double a = 1.0;
  // [initial]
  std::string initial_kind = "gaussian";
  double amplitude = 0.05;
  double width = 1.0;
  // [evolution]
  double dt = 1e-3;
  double t_end = 2.0;
  int record_stride = 50;
  double blowup_grad_factor = 25.0;
  // [diagnostics]
  std::vector<double> psi_radii = {5.0, 8.0, 10.0};
  double tolerance = 1e-6;
  // [output]
  std::string out_dir = "out";
  // [sweep]
  std::vector<double> amplitudes;

  static RunConfig parse_file(const std::string& path);
  static RunConfig parse_string(const std::string& text);

  std::string canonical() const;

  GridPtr make_run_grid() const;
  std::optional<YukawaPotential> potential() const;
  EvolutionConfig evolution() const;
  InitialKind initial() const;
};

}  // namespace critnls
