#include "heatctl/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace heatctl {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  }
}

long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + value + "'");
  }
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(value);
  while (in >> item) {
    if (!item.empty() && item.back() == ',') item.pop_back();
    if (item.empty()) continue;
    out.push_back(parse_double(key, item));
  }
  return out;
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += format_g17(v[i]);
  }
  return out;
}

} // namespace

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": empty key or value");

    if (key == "domain.L") cfg.L = parse_double(key, value);
    else if (key == "domain.a") cfg.a = parse_double(key, value);
    else if (key == "domain.b") cfg.b = parse_double(key, value);
    else if (key == "domain.J") cfg.J = static_cast<int>(parse_int(key, value));
    else if (key == "problem.y0") cfg.y0 = parse_list(key, value);
    else if (key == "problem.r") cfg.r = parse_double(key, value);
    else if (key == "norm.T") cfg.T_list = parse_list(key, value);
    else if (key == "norm.delta") cfg.norm_delta = parse_double(key, value);
    else if (key == "norm.k") {
      cfg.norm_k_list.clear();
      for (double v : parse_list(key, value))
        cfg.norm_k_list.push_back(static_cast<int>(v));
    }
    else if (key == "time.M") cfg.M_list = parse_list(key, value);
    else if (key == "time.delta") cfg.time_delta = parse_double(key, value);
    else if (key == "sweep.M") cfg.sweep_M = parse_double(key, value);
    else if (key == "sweep.M_frac") cfg.sweep_M_frac = parse_double(key, value);
    else if (key == "sweep.deltas") cfg.deltas = parse_list(key, value);
    else if (key == "sweep.dyadic_levels") cfg.dyadic_levels = static_cast<int>(parse_int(key, value));
    else if (key == "sweep.eta") cfg.eta = parse_double(key, value);
    else if (key == "sweep.k_min") cfg.k_min = static_cast<int>(parse_int(key, value));
    else if (key == "sweep.k_max") cfg.k_max = static_cast<int>(parse_int(key, value));
    else if (key == "sweep.hunt_k_min") cfg.hunt_k_min = static_cast<int>(parse_int(key, value));
    else if (key == "sweep.hunt_k_max") cfg.hunt_k_max = static_cast<int>(parse_int(key, value));
    else if (key == "tol.bisection") cfg.tol_bisection = parse_double(key, value);
    else if (key == "tol.residual") cfg.tol_residual = parse_double(key, value);
    else if (key == "quad.nodes") cfg.quad_nodes = static_cast<int>(parse_int(key, value));
    else if (key == "output.dir") cfg.out_dir = value;
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "threads") cfg.threads = static_cast<int>(parse_int(key, value));
    else throw ConfigError("unknown config key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void RunConfig::validate() const {
  if (!(L > 0.0)) throw ConfigError("domain.L: must be positive");
  if (!(a >= 0.0)) throw ConfigError("domain.a: must be >= 0");
  if (!(a < b)) throw ConfigError("domain.b: window requires a < b");
  if (!(b <= L)) throw ConfigError("domain.b: window end exceeds domain.L");
  if (J < 1) throw ConfigError("domain.J: must be >= 1");
  if (y0.empty()) throw ConfigError("problem.y0: at least one coefficient required");
  if (static_cast<int>(y0.size()) > J)
    throw ConfigError("problem.y0: more coefficients than domain.J modes");
  if (!(r > 0.0)) throw ConfigError("problem.r: must be positive");
  if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("sweep.eta: must lie in (0, 1)");
  if (k_min < 1 || k_max < k_min) throw ConfigError("sweep.k_min/k_max: empty range");
  if (hunt_k_min < 2 || hunt_k_max < hunt_k_min)
    throw ConfigError("sweep.hunt_k_min/hunt_k_max: invalid range");
  if (dyadic_levels < 1) throw ConfigError("sweep.dyadic_levels: must be >= 1");
  if (!(tol_bisection > 0.0)) throw ConfigError("tol.bisection: must be positive");
  if (!(tol_residual > 0.0)) throw ConfigError("tol.residual: must be positive");
  if (quad_nodes < 1) throw ConfigError("quad.nodes: must be >= 1");
  if (threads < 0) throw ConfigError("threads: must be >= 0");
  for (double t : T_list)
    if (!(t > 0.0)) throw ConfigError("norm.T: horizons must be positive");
  for (double m : M_list)
    if (m < 0.0) throw ConfigError("time.M: budgets must be nonnegative");
}

std::string RunConfig::serialize() const {
  std::ostringstream out;
  out << "domain.L = " << format_g17(L) << '\n'
      << "domain.a = " << format_g17(a) << '\n'
      << "domain.b = " << format_g17(b) << '\n'
      << "domain.J = " << J << '\n'
      << "problem.y0 = " << format_list(y0) << '\n'
      << "problem.r = " << format_g17(r) << '\n';
  if (!T_list.empty()) out << "norm.T = " << format_list(T_list) << '\n';
  if (norm_delta > 0.0) out << "norm.delta = " << format_g17(norm_delta) << '\n';
  if (!norm_k_list.empty()) {
    out << "norm.k =";
    for (int k : norm_k_list) out << ' ' << k;
    out << '\n';
  }
  if (!M_list.empty()) out << "time.M = " << format_list(M_list) << '\n';
  if (time_delta > 0.0) out << "time.delta = " << format_g17(time_delta) << '\n';
  if (sweep_M > 0.0) out << "sweep.M = " << format_g17(sweep_M) << '\n';
  out << "sweep.M_frac = " << format_g17(sweep_M_frac) << '\n';
  if (!deltas.empty()) out << "sweep.deltas = " << format_list(deltas) << '\n';
  out << "sweep.dyadic_levels = " << dyadic_levels << '\n'
      << "sweep.eta = " << format_g17(eta) << '\n'
      << "sweep.k_min = " << k_min << '\n'
      << "sweep.k_max = " << k_max << '\n'
      << "sweep.hunt_k_min = " << hunt_k_min << '\n'
      << "sweep.hunt_k_max = " << hunt_k_max << '\n'
      << "tol.bisection = " << format_g17(tol_bisection) << '\n'
      << "tol.residual = " << format_g17(tol_residual) << '\n'
      << "quad.nodes = " << quad_nodes << '\n'
      << "output.dir = " << out_dir << '\n'
      << "seed = " << seed << '\n'
      << "threads = " << threads << '\n';
  return out.str();
}

} // namespace heatctl
