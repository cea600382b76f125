#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "onebit/airlink.hpp"
#include "onebit/pm_solver.hpp"
#include "onebit/precoders.hpp"

namespace onebit {

enum class Scheme { PM, WF, WFQ, WF_UNQ };

std::string scheme_name(Scheme s);
std::optional<Scheme> scheme_from_name(const std::string& name);

struct Dims {
  std::size_t antennas = 32;  // N
  std::size_t users = 4;      // M

  bool operator==(const Dims&) const = default;
};

struct BerRecord {
  Scheme scheme = Scheme::PM;
  double etx_db = 0.0;
  std::size_t channels = 0;
  std::size_t symbols_per_channel = 0;
  std::uint64_t bit_errors = 0;
  std::uint64_t bits_total = 0;
  double ber = 0.0;
  std::size_t channel_redraws = 0;  // degenerate draws replaced (not a CSV column)

  double binomial_se() const;
};

struct MiRecord {
  Scheme scheme = Scheme::PM;
  double etx_db = 0.0;
  std::size_t channels = 0;
  double mi_bpcu = 0.0;  // joint over all M users, in [0, 2M]
};

/// Pre-scaled antenna signal per input index u; entry u is exactly what the
/// antennas radiate for input s(u) (all power scaling included).
struct TransmitTable {
  std::vector<CVec> x;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Channel draw for (master_seed, channel_id). Numerically rank-deficient
/// draws (probability-zero events) are replaced from a derived sub-stream;
/// the replacement count is added to *redraws when given.
ChannelRealization make_channel(std::uint64_t master_seed, Dims dims, std::uint64_t channel_id,
                                std::size_t* redraws = nullptr);

TransmitTable transmit_table(const ChannelRealization& ch, Scheme scheme, double etx,
                             const SolverConfig& cfg);
TransmitTable transmit_table_from_lut(const LookupTable& lut, double etx);

/// Monte-Carlo uncoded BER at one (scheme, etx) point. Deterministic in
/// master_seed: channels, symbols and noise come from per-channel streams
/// and the per-channel partials are reduced in channel order, so the result
/// does not depend on `threads`.
BerRecord run_ber(Scheme scheme, std::size_t channels, std::size_t symbols_per_channel,
                  double etx_db, Dims dims, const SolverConfig& cfg, std::uint64_t master_seed,
                  int threads = 1);

/// Full sweep over schemes x etx grid. Equivalent to calling run_ber per
/// point (same streams, bit-identical counts); the PM lookup table is built
/// once per channel and shared across the grid.
std::vector<BerRecord> run_ber_sweep(const std::vector<Scheme>& schemes,
                                     const std::vector<double>& etx_db_grid,
                                     std::size_t channels, std::size_t symbols_per_channel,
                                     Dims dims, const SolverConfig& cfg,
                                     std::uint64_t master_seed, int threads = 1);

/// Exact mutual information averaged over channels, one record per
/// (scheme, etx) point.
std::vector<MiRecord> run_mi_sweep(const std::vector<Scheme>& schemes,
                                   const std::vector<double>& etx_db_grid, std::size_t channels,
                                   Dims dims, const SolverConfig& cfg, std::uint64_t master_seed,
                                   int threads = 1);

/// Variance-free BER cross-check: averages the per-bit Gaussian tail
/// probabilities Phi(-sqrt(2) * sign(s_comp) * comp(h_m^T x(u))) over the
/// 4^M equiprobable inputs and all 2M bits.
double semi_analytic_ber(const ChannelRealization& ch, const TransmitTable& table);

/// Exact I(s; s_hat) in bits per channel use for uniform inputs. The
/// conditional law factorizes over the 2M output sign bits, each a Bernoulli
/// with a Gaussian-tail parameter, which makes both H(s_hat|s) and the
/// 4^M-point output marginal exactly computable. Throws SizeBound for
/// users > max_users.
double exact_mi(const ChannelRealization& ch, const TransmitTable& table,
                std::size_t max_users = 6);

/// Brute-force reference: enumerates all x_Q in O^N (N <= 8) and returns the
/// det(P) maximizer among detection-valid candidates (a_m >= 0 and p_m >= 0
/// for every user, i.e. each received point lands in its correct quadrant).
/// Raw det(P) maxima with wrong-quadrant users exist for M >= 2 but are
/// useless transmit vectors; they are excluded here exactly as the solver's
/// step conditions exclude them. Falls back to the unrestricted maximum in
/// the (degenerate) case where no candidate is valid.
std::pair<CVec, double> exhaustive_oracle(const ChannelRealization& ch, const SymbolVector& s);

struct IterationStat {
  double epsilon = 0.0;
  double mean_iterations = 0.0;
};

/// Mean per-entry solver iterations over all LUT entries and channels, for
/// each stop tolerance in eps_grid.
std::vector<IterationStat> iteration_stats(std::size_t channels, Dims dims,
                                           const SolverConfig& base,
                                           const std::vector<double>& eps_grid,
                                           std::uint64_t master_seed, int threads = 1);

/// E_tx (dB) where a measured BER curve crosses `target`, by log-linear
/// interpolation between grid points. BER values below `floor` are clamped
/// before taking logs. Throws InterpolationRange when the curve never
/// crosses the target.
double snr_at_ber(const std::vector<std::pair<double, double>>& curve, double target,
                  double floor = 1e-12);

struct TableRow {
  double epsilon = 0.0;
  double mean_iterations = 0.0;
  double snr_at_1e3_db = 0.0;
  double mi_bpcu = 0.0;
};

/// Complexity/performance summary of the PM scheme per stop tolerance:
/// mean solver iterations, E_tx at BER 1e-3 (log-linear interpolation on the
/// measured curve over etx_db_grid), and exact MI at mi_etx_db. One channel
/// pass per tolerance; the lookup table is shared by all three measurements.
std::vector<TableRow> run_table(const std::vector<double>& eps_grid,
                                const std::vector<double>& etx_db_grid, double mi_etx_db,
                                std::size_t channels, std::size_t symbols_per_channel,
                                Dims dims, const SolverConfig& base, std::uint64_t master_seed,
                                int threads = 1);

}  // namespace onebit
