#pragma once

#include <string>
#include <vector>

#include "onebit/config.hpp"
#include "onebit/eval.hpp"

namespace onebit {

struct RunPaths {
  std::string csv;
  std::string manifest;
};

// CSV cores (also used by tests; the cmd_* functions add file + manifest).
std::string ber_csv(const std::vector<BerRecord>& records);
std::string mi_csv(const std::vector<MiRecord>& records);
std::string table_csv(const std::vector<TableRow>& rows);

/// BER sweep over schemes x etx grid -> <out>/ber.csv (+ manifest).
RunPaths cmd_ber(const ExperimentConfig& cfg);
/// Exact-MI sweep -> <out>/mi.csv (+ manifest).
RunPaths cmd_mi(const ExperimentConfig& cfg);
/// Per-epsilon complexity/performance summary -> <out>/table.csv (+ manifest).
RunPaths cmd_table(const ExperimentConfig& cfg);
/// Lookup table of one channel draw -> <out>/lut_<id>.csv (+ manifest).
RunPaths cmd_lut_dump(const ExperimentConfig& cfg, std::uint64_t channel_id);

/// Reads a config from either the flat key = value format or a previously
/// written run manifest (JSON with an embedded config_text field), so a run
/// can be reproduced from its manifest alone.
ExperimentConfig load_config_file(const std::string& path);

}  // namespace onebit
