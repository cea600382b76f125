#include "onebit/config.hpp"

#include <cstdio>
#include <sstream>

namespace onebit {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_real(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': invalid real '" + v + "'");
  }
  if (pos != v.size()) throw ConfigError("config key '" + key + "': invalid real '" + v + "'");
  return x;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  std::uint64_t x = 0;
  try {
    x = std::stoull(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': invalid integer '" + v + "'");
  }
  if (pos != v.size())
    throw ConfigError("config key '" + key + "': invalid integer '" + v + "'");
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError("config key '" + key + "': expected true/false, got '" + v + "'");
}

std::string fmt_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmt_real_list(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += fmt_real(xs[i]);
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line without '=': " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "dims.n") {
      cfg.dims.antennas = parse_uint(key, value);
    } else if (key == "dims.m") {
      cfg.dims.users = parse_uint(key, value);
    } else if (key == "schemes") {
      cfg.schemes.clear();
      for (const auto& name : split_list(value)) {
        const auto s = scheme_from_name(name);
        if (!s) throw ConfigError("unknown scheme '" + name + "' in schemes");
        cfg.schemes.push_back(*s);
      }
    } else if (key == "etx_db_grid") {
      cfg.etx_db_grid.clear();
      for (const auto& v : split_list(value)) cfg.etx_db_grid.push_back(parse_real(key, v));
    } else if (key == "epsilon_grid") {
      cfg.epsilon_grid.clear();
      for (const auto& v : split_list(value)) cfg.epsilon_grid.push_back(parse_real(key, v));
    } else if (key == "channels") {
      cfg.channels = parse_uint(key, value);
    } else if (key == "symbols_per_channel") {
      cfg.symbols_per_channel = parse_uint(key, value);
    } else if (key == "solver.mu0") {
      cfg.solver.mu0 = parse_real(key, value);
    } else if (key == "solver.epsilon") {
      cfg.solver.epsilon = parse_real(key, value);
    } else if (key == "solver.max_iters") {
      cfg.solver.max_iters = static_cast<int>(parse_uint(key, value));
    } else if (key == "solver.max_halvings_per_iter") {
      cfg.solver.max_halvings_per_iter = static_cast<int>(parse_uint(key, value));
    } else if (key == "solver.polish_depth") {
      cfg.solver.polish_depth = static_cast<int>(parse_uint(key, value));
    } else if (key == "solver.max_restarts") {
      cfg.solver.max_restarts = static_cast<int>(parse_uint(key, value));
    } else if (key == "solver.restart_always") {
      cfg.solver.restart_always = parse_bool(key, value);
    } else if (key == "solver.exploit_symmetry") {
      cfg.solver.exploit_symmetry = parse_bool(key, value);
    } else if (key == "table_mi_etx_db") {
      cfg.table_mi_etx_db = parse_real(key, value);
    } else if (key == "master_seed") {
      cfg.master_seed = parse_uint(key, value);
    } else if (key == "output_dir") {
      cfg.output_dir = value;
    } else if (key == "threads") {
      cfg.threads = static_cast<int>(parse_uint(key, value));
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  return cfg;
}

std::string render_config(const ExperimentConfig& cfg) {
  std::string schemes;
  for (std::size_t i = 0; i < cfg.schemes.size(); ++i) {
    if (i) schemes += ",";
    schemes += scheme_name(cfg.schemes[i]);
  }
  std::ostringstream os;
  os << "dims.n = " << cfg.dims.antennas << "\n"
     << "dims.m = " << cfg.dims.users << "\n"
     << "schemes = " << schemes << "\n"
     << "etx_db_grid = " << fmt_real_list(cfg.etx_db_grid) << "\n"
     << "epsilon_grid = " << fmt_real_list(cfg.epsilon_grid) << "\n"
     << "channels = " << cfg.channels << "\n"
     << "symbols_per_channel = " << cfg.symbols_per_channel << "\n"
     << "solver.mu0 = " << fmt_real(cfg.solver.mu0) << "\n"
     << "solver.epsilon = " << fmt_real(cfg.solver.epsilon) << "\n"
     << "solver.max_iters = " << cfg.solver.max_iters << "\n"
     << "solver.max_halvings_per_iter = " << cfg.solver.max_halvings_per_iter << "\n"
     << "solver.polish_depth = " << cfg.solver.polish_depth << "\n"
     << "solver.max_restarts = " << cfg.solver.max_restarts << "\n"
     << "solver.restart_always = " << (cfg.solver.restart_always ? "true" : "false") << "\n"
     << "solver.exploit_symmetry = " << (cfg.solver.exploit_symmetry ? "true" : "false")
     << "\n"
     << "table_mi_etx_db = " << fmt_real(cfg.table_mi_etx_db) << "\n"
     << "master_seed = " << cfg.master_seed << "\n"
     << "output_dir = " << cfg.output_dir << "\n"
     << "threads = " << cfg.threads << "\n";
  return os.str();
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.dims.users < 1 || cfg.dims.antennas < cfg.dims.users)
    throw ConfigError("config: require N >= M >= 1");
  if (cfg.schemes.empty()) throw ConfigError("config: schemes list is empty");
  if (cfg.etx_db_grid.empty()) throw ConfigError("config: etx_db_grid is empty");
  if (cfg.epsilon_grid.empty()) throw ConfigError("config: epsilon_grid is empty");
  if (cfg.channels == 0) throw ConfigError("config: channels must be > 0");
  if (cfg.symbols_per_channel == 0)
    throw ConfigError("config: symbols_per_channel must be > 0");
  if (!(cfg.solver.mu0 > 0.0)) throw ConfigError("config: solver.mu0 must be > 0");
  if (!(cfg.solver.epsilon > 0.0)) throw ConfigError("config: solver.epsilon must be > 0");
  if (cfg.solver.max_iters <= 0) throw ConfigError("config: solver.max_iters must be > 0");
  if (cfg.solver.max_halvings_per_iter <= 0)
    throw ConfigError("config: solver.max_halvings_per_iter must be > 0");
  if (cfg.threads < 1) throw ConfigError("config: threads must be >= 1");
  if (cfg.output_dir.empty()) throw ConfigError("config: output_dir is empty");
}

}  // namespace onebit
