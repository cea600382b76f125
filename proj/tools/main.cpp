#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "onebit/runner.hpp"
#include "onebit/version.hpp"

namespace {

struct GlobalOpts {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool paper_scale = false;
  int threads = 0;
};

onebit::ExperimentConfig resolve_config(const GlobalOpts& g) {
  onebit::ExperimentConfig cfg;
  if (!g.config_path.empty()) cfg = onebit::load_config_file(g.config_path);
  if (g.seed_set) cfg.master_seed = g.seed;
  if (!g.out_dir.empty()) cfg.output_dir = g.out_dir;
  if (g.threads > 0) cfg.threads = g.threads;
  if (g.paper_scale) {
    cfg.channels = 500;
    cfg.symbols_per_channel = 10000;
  }
  return cfg;
}

void report(const onebit::RunPaths& paths) {
  std::cout << "wrote " << paths.csv << "\n";
  std::cout << "wrote " << paths.manifest << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(onebit::kVersion) +
               " - 1-bit MU-MISO downlink precoding simulator"};
  app.require_subcommand(1);
  app.fallthrough();  // accept the global options after the subcommand too

  GlobalOpts g;
  app.add_option("--config", g.config_path,
                 "config file (flat key = value) or a previous run manifest");
  app.add_option("--seed", g.seed, "master seed override")->each([&](const std::string&) {
    g.seed_set = true;
  });
  app.add_option("--out", g.out_dir, "output directory override");
  app.add_option("--threads", g.threads, "worker thread count override");
  app.add_flag("--paper-scale", g.paper_scale,
               "500 channels x 10000 symbols instead of the desk-scale defaults");

  auto* ber = app.add_subcommand("ber", "Monte-Carlo uncoded BER sweep -> ber.csv");
  auto* mi = app.add_subcommand("mi", "exact mutual information sweep -> mi.csv");
  auto* table = app.add_subcommand(
      "table", "per-epsilon iteration/BER/MI summary of the PM scheme -> table.csv");
  auto* lut = app.add_subcommand("lut-dump", "solve and export one channel's lookup table");
  std::uint64_t lut_channel = 0;
  lut->add_option("--channel", lut_channel, "channel index to dump (default 0)");

  CLI11_PARSE(app, argc, argv);

  try {
    const onebit::ExperimentConfig cfg = resolve_config(g);
    if (ber->parsed()) report(onebit::cmd_ber(cfg));
    if (mi->parsed()) report(onebit::cmd_mi(cfg));
    if (table->parsed()) report(onebit::cmd_table(cfg));
    if (lut->parsed()) report(onebit::cmd_lut_dump(cfg, lut_channel));
  } catch (const onebit::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
