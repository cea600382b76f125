#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "onebit/eval.hpp"
#include "onebit/pm_solver.hpp"

namespace onebit {

/// Experiment description. Serialized as a flat key = value text file
/// (lists comma-separated, '#' starts a comment); parse(render(c)) == c.
struct ExperimentConfig {
  Dims dims{32, 4};
  std::vector<Scheme> schemes{Scheme::PM, Scheme::WF, Scheme::WFQ, Scheme::WF_UNQ};
  std::vector<double> etx_db_grid{-2, 0, 2, 4, 6, 8, 10, 12};
  std::vector<double> epsilon_grid{1e-3, 1e-4, 1e-6};  // `table` subcommand
  std::size_t channels = 100;
  std::size_t symbols_per_channel = 2000;
  SolverConfig solver{};
  double table_mi_etx_db = 15.0;  // E_tx for the MI column of `table`
  std::uint64_t master_seed = 1;
  std::string output_dir = "out";
  int threads = 1;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses a flat-key config. Missing keys keep their defaults; unknown keys,
/// malformed values and unknown scheme names raise ConfigError naming the
/// offender.
ExperimentConfig parse_config(const std::string& text);

/// Canonical text form: every key, fixed order, 17-significant-digit reals.
std::string render_config(const ExperimentConfig& cfg);

/// Invariant check (N >= M >= 1, non-empty grids, positive counts...);
/// throws ConfigError.
void validate_config(const ExperimentConfig& cfg);

}  // namespace onebit
