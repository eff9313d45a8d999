#include "critnls/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace critnls {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' has non-numeric value '" + v + "'");
  }
}

int parse_int(const std::string& key, const std::string& v) {
  const double x = parse_double(key, v);
  const int n = static_cast<int>(x);
  if (x != n) throw ConfigError("config: key '" + key + "' must be an integer");
  return n;
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(key, item));
  }
  return out;
}

std::string strip_quotes(std::string v) {
  if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') ||
                        (v.front() == '\'' && v.back() == '\'')))
    return v.substr(1, v.size() - 2);
  return v;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

RunConfig RunConfig::parse_string(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "grid" && section != "potential" && section != "initial" &&
          section != "evolution" && section != "diagnostics" &&
          section != "output" && section != "sweep")
        throw ConfigError("config: unknown section '" + section + "'");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = strip_quotes(trim(line.substr(eq + 1)));
    const std::string qual = section + "." + key;

    if (qual == "grid.dim") cfg.dim = parse_int(qual, value);
    else if (qual == "grid.r_max") cfg.r_max = parse_double(qual, value);
    else if (qual == "grid.m") cfg.m = parse_int(qual, value);
    else if (qual == "potential.kind") cfg.potential_kind = value;
    else if (qual == "potential.c") cfg.c = parse_double(qual, value);
    else if (qual == "potential.sigma") cfg.sigma = parse_double(qual, value);
    else if (qual == "potential.a") cfg.a = parse_double(qual, value);
    else if (qual == "initial.kind") cfg.initial_kind = value;
    else if (qual == "initial.amplitude") cfg.amplitude = parse_double(qual, value);
    else if (qual == "initial.width") cfg.width = parse_double(qual, value);
    else if (qual == "evolution.dt") cfg.dt = parse_double(qual, value);
    else if (qual == "evolution.t_end") cfg.t_end = parse_double(qual, value);
    else if (qual == "evolution.record_stride")
      cfg.record_stride = parse_int(qual, value);
    else if (qual == "evolution.blowup_grad_factor")
      cfg.blowup_grad_factor = parse_double(qual, value);
    else if (qual == "diagnostics.psi_radii") cfg.psi_radii = parse_list(qual, value);
    else if (qual == "diagnostics.tolerance")
      cfg.tolerance = parse_double(qual, value);
    else if (qual == "output.dir") cfg.out_dir = value;
    else if (qual == "sweep.amplitudes") cfg.amplitudes = parse_list(qual, value);
    else
      throw ConfigError("config: unknown key '" + qual + "'");
  }

  if (cfg.potential_kind != "zero" && cfg.potential_kind != "yukawa")
    throw ConfigError("config: potential.kind must be 'zero' or 'yukawa', got '" +
                      cfg.potential_kind + "'");
  initial_kind_from_string(cfg.initial_kind);  // validates
  return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

std::string RunConfig::canonical() const {
  std::ostringstream os;
  os << "[grid]\n"
     << "dim = " << dim << "\n"
     << "r_max = " << fmt(r_max) << "\n"
     << "m = " << m << "\n"
     << "[potential]\n"
     << "kind = " << potential_kind << "\n"
     << "c = " << fmt(c) << "\n"
     << "sigma = " << fmt(sigma) << "\n"
     << "a = " << fmt(a) << "\n"
     << "[initial]\n"
     << "kind = " << initial_kind << "\n"
     << "amplitude = " << fmt(amplitude) << "\n"
     << "width = " << fmt(width) << "\n"
     << "[evolution]\n"
     << "dt = " << fmt(dt) << "\n"
     << "t_end = " << fmt(t_end) << "\n"
     << "record_stride = " << record_stride << "\n"
     << "blowup_grad_factor = " << fmt(blowup_grad_factor) << "\n"
     << "[diagnostics]\n"
     << "psi_radii = ";
  for (std::size_t i = 0; i < psi_radii.size(); ++i)
    os << (i ? ", " : "") << fmt(psi_radii[i]);
  os << "\n"
     << "tolerance = " << fmt(tolerance) << "\n"
     << "[output]\n"
     << "dir = " << out_dir << "\n";
  if (!amplitudes.empty()) {
    os << "[sweep]\n"
       << "amplitudes = ";
    for (std::size_t i = 0; i < amplitudes.size(); ++i)
      os << (i ? ", " : "") << fmt(amplitudes[i]);
    os << "\n";
  }
  return os.str();
}

GridPtr RunConfig::make_run_grid() const { return make_grid(dim, r_max, m); }

std::optional<YukawaPotential> RunConfig::potential() const {
  if (potential_kind == "zero") return std::nullopt;
  return YukawaPotential(c, sigma, a, dim);
}

EvolutionConfig RunConfig::evolution() const {
  EvolutionConfig ec;
  ec.dt = dt;
  ec.t_end = t_end;
  ec.record_stride = record_stride;
  ec.blowup_grad_factor = blowup_grad_factor;
  return ec;
}

InitialKind RunConfig::initial() const {
  return initial_kind_from_string(initial_kind);
}

}  // namespace critnls
