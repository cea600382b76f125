#include "onebit/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "onebit/version.hpp"

namespace onebit {

namespace {

std::string fmt_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path.string());
  os << text;
}

std::string manifest_json(const ExperimentConfig& cfg, const std::string& command,
                          const std::vector<std::string>& outputs) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["command"] = command;
  j["master_seed"] = cfg.master_seed;
  j["config_text"] = render_config(cfg);
  j["outputs"] = outputs;
  return j.dump(2) + "\n";
}

RunPaths write_outputs(const ExperimentConfig& cfg, const std::string& command,
                       const std::string& stem, const std::string& csv) {
  std::filesystem::create_directories(cfg.output_dir);
  const std::filesystem::path dir(cfg.output_dir);
  RunPaths paths{(dir / (stem + ".csv")).string(), (dir / (stem + ".manifest.json")).string()};
  write_file(paths.csv, csv);
  write_file(paths.manifest, manifest_json(cfg, command, {stem + ".csv"}));
  return paths;
}

}  // namespace

std::string ber_csv(const std::vector<BerRecord>& records) {
  std::ostringstream os;
  os << "scheme,etx_db,channels,symbols_per_channel,bit_errors,bits_total,ber\n";
  for (const auto& r : records) {
    os << scheme_name(r.scheme) << ',' << fmt_real(r.etx_db) << ',' << r.channels << ','
       << r.symbols_per_channel << ',' << r.bit_errors << ',' << r.bits_total << ','
       << fmt_real(r.ber) << '\n';
  }
  return os.str();
}

std::string mi_csv(const std::vector<MiRecord>& records) {
  std::ostringstream os;
  os << "scheme,etx_db,channels,mi_bpcu\n";
  for (const auto& r : records) {
    os << scheme_name(r.scheme) << ',' << fmt_real(r.etx_db) << ',' << r.channels << ','
       << fmt_real(r.mi_bpcu) << '\n';
  }
  return os.str();
}

std::string table_csv(const std::vector<TableRow>& rows) {
  std::ostringstream os;
  os << "epsilon,mean_iterations,snr_at_1e-3_db,mi_bpcu\n";
  for (const auto& r : rows) {
    os << fmt_real(r.epsilon) << ',' << fmt_real(r.mean_iterations) << ','
       << fmt_real(r.snr_at_1e3_db) << ',' << fmt_real(r.mi_bpcu) << '\n';
  }
  return os.str();
}

RunPaths cmd_ber(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const auto records =
      run_ber_sweep(cfg.schemes, cfg.etx_db_grid, cfg.channels, cfg.symbols_per_channel,
                    cfg.dims, cfg.solver, cfg.master_seed, cfg.threads);
  return write_outputs(cfg, "ber", "ber", ber_csv(records));
}

RunPaths cmd_mi(const ExperimentConfig& cfg) {
  validate_config(cfg);
  if (cfg.dims.users > 6)
    throw ConfigError("mi: exact MI enumerates 4^M outputs; reduce dims.m to 6 or less");
  const auto records = run_mi_sweep(cfg.schemes, cfg.etx_db_grid, cfg.channels, cfg.dims,
                                    cfg.solver, cfg.master_seed, cfg.threads);
  return write_outputs(cfg, "mi", "mi", mi_csv(records));
}

RunPaths cmd_table(const ExperimentConfig& cfg) {
  validate_config(cfg);
  if (cfg.dims.users > 6)
    throw ConfigError("table: exact MI enumerates 4^M outputs; reduce dims.m to 6 or less");
  const auto rows =
      run_table(cfg.epsilon_grid, cfg.etx_db_grid, cfg.table_mi_etx_db, cfg.channels,
                cfg.symbols_per_channel, cfg.dims, cfg.solver, cfg.master_seed, cfg.threads);
  return write_outputs(cfg, "table", "table", table_csv(rows));
}

RunPaths cmd_lut_dump(const ExperimentConfig& cfg, std::uint64_t channel_id) {
  validate_config(cfg);
  const ChannelRealization ch = make_channel(cfg.master_seed, cfg.dims, channel_id);
  const LookupTable lut = build_lut(ch, cfg.solver, cfg.threads);

  std::filesystem::create_directories(cfg.output_dir);
  const std::filesystem::path dir(cfg.output_dir);
  const std::string stem = "lut_" + std::to_string(channel_id);
  RunPaths paths{(dir / (stem + ".csv")).string(), (dir / (stem + ".manifest.json")).string()};
  std::ofstream os(paths.csv, std::ios::binary);
  if (!os) throw Error("cannot write " + paths.csv);
  write_lut_csv(lut, os);
  os.close();

  nlohmann::json j = nlohmann::json::parse(lut_manifest_json(lut, cfg.solver, kVersion));
  j["command"] = "lut-dump";
  j["master_seed"] = cfg.master_seed;
  j["config_text"] = render_config(cfg);
  j["outputs"] = {stem + ".csv"};
  write_file(paths.manifest, j.dump(2) + "\n");
  return paths;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << is.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("manifest '" + path + "' is not valid JSON: " + e.what());
    }
    if (!j.contains("config_text"))
      throw ConfigError("manifest '" + path + "' has no config_text field");
    return parse_config(j["config_text"].get<std::string>());
  }
  return parse_config(text);
}

}  // namespace onebit
