#include "onebit/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "onebit/parallel.hpp"

namespace onebit {

namespace {

// P(component sign flips to negative of `sent_sign`) for received mean
// `comp` and N(0, 1/2) real noise.
double tail_flip_prob(double sent_sign, double comp) {
  return 0.5 * std::erfc(sent_sign * comp);
}

double binary_entropy(double q) {
  double h = 0.0;
  if (q > 0.0) h -= q * std::log2(q);
  if (q < 1.0) h -= (1.0 - q) * std::log2(1.0 - q);
  return h;
}

std::uint64_t table_size(std::size_t users) { return 1ULL << (2 * users); }

// Monte-Carlo kernel for one channel: symbol and noise streams are tied to
// the channel id only, so every (scheme, etx) point sees the same draws.
std::uint64_t channel_bit_errors(const ChannelRealization& ch, const TransmitTable& table,
                                 std::size_t symbols, std::uint64_t master_seed) {
  const std::size_t m_users = ch.users();
  const std::uint64_t mask = table_size(m_users) - 1;
  SeededRng sym_rng(master_seed, derive_stream(ch.id, StreamPurpose::Symbols));
  SeededRng noise_rng(master_seed, derive_stream(ch.id, StreamPurpose::Noise));
  std::uint64_t errors = 0;
  for (std::size_t k = 0; k < symbols; ++k) {
    const std::uint64_t u = sym_rng.next_u64() & mask;
    const SymbolVector s = symbol_from_index(u, m_users);
    const SymbolVector detected = detect(ch, table.x[u], &noise_rng);
    errors += static_cast<std::uint64_t>(bit_errors(s, detected));
  }
  return errors;
}

}  // namespace

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::PM: return "pm";
    case Scheme::WF: return "wf";
    case Scheme::WFQ: return "wfq";
    case Scheme::WF_UNQ: return "wf_unq";
  }
  return "?";
}

std::optional<Scheme> scheme_from_name(const std::string& name) {
  if (name == "pm") return Scheme::PM;
  if (name == "wf") return Scheme::WF;
  if (name == "wfq") return Scheme::WFQ;
  if (name == "wf_unq") return Scheme::WF_UNQ;
  return std::nullopt;
}

double BerRecord::binomial_se() const {
  if (bits_total == 0) return 0.0;
  const double n = static_cast<double>(bits_total);
  return std::sqrt(std::max(ber * (1.0 - ber), 0.0) / n);
}

ChannelRealization make_channel(std::uint64_t master_seed, Dims dims, std::uint64_t channel_id,
                                std::size_t* redraws) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    SeededRng rng(master_seed, derive_stream(channel_id, StreamPurpose::Channel, attempt));
    ChannelRealization ch = ChannelRealization::from_matrix(
        sample_complex_gaussian(rng, dims.users, dims.antennas, 1.0), channel_id);
    try {
      hermitian_solve(gram_rows(ch.H), ComplexMatrix::identity(dims.users));
      return ch;
    } catch (const NotPositiveDefinite&) {
      if (redraws != nullptr) ++*redraws;
      if (attempt >= 16)
        throw RankDeficient("make_channel: persistent rank-deficient draws");
    }
  }
}

TransmitTable transmit_table_from_lut(const LookupTable& lut, double etx) {
  const double scale = std::sqrt(etx / static_cast<double>(lut.antennas));
  TransmitTable t;
  t.x.resize(lut.size());
  for (std::uint64_t u = 0; u < lut.size(); ++u) {
    t.x[u].resize(lut.antennas);
    for (std::size_t n = 0; n < lut.antennas; ++n) t.x[u][n] = scale * lut.entries[u][n];
  }
  return t;
}

TransmitTable transmit_table(const ChannelRealization& ch, Scheme scheme, double etx,
                             const SolverConfig& cfg) {
  if (scheme == Scheme::PM) return transmit_table_from_lut(build_lut(ch, cfg), etx);

  const std::uint64_t count = table_size(ch.users());
  TransmitTable t;
  t.x.resize(count);
  const PrecoderMatrix p =
      scheme == Scheme::WFQ ? wfq(ch, etx, 1.0) : wf(ch, etx, 1.0);
  for (std::uint64_t u = 0; u < count; ++u) {
    const SymbolVector s = symbol_from_index(u, ch.users());
    t.x[u] = scheme == Scheme::WF_UNQ ? apply_linear_unquantized(p, s)
                                      : apply_linear(p, s, etx);
  }
  return t;
}

BerRecord run_ber(Scheme scheme, std::size_t channels, std::size_t symbols_per_channel,
                  double etx_db, Dims dims, const SolverConfig& cfg, std::uint64_t master_seed,
                  int threads) {
  const double etx = db_to_linear(etx_db);
  std::vector<std::uint64_t> errors(channels, 0);
  std::vector<std::size_t> redraws(channels, 0);
  parallel_for(channels, threads, [&](std::size_t c) {
    const ChannelRealization ch = make_channel(master_seed, dims, c, &redraws[c]);
    const TransmitTable table = transmit_table(ch, scheme, etx, cfg);
    errors[c] = channel_bit_errors(ch, table, symbols_per_channel, master_seed);
  });

  BerRecord rec;
  rec.scheme = scheme;
  rec.etx_db = etx_db;
  rec.channels = channels;
  rec.symbols_per_channel = symbols_per_channel;
  for (std::size_t c = 0; c < channels; ++c) {
    rec.bit_errors += errors[c];
    rec.channel_redraws += redraws[c];
  }
  rec.bits_total = static_cast<std::uint64_t>(channels) * symbols_per_channel * 2 * dims.users;
  rec.ber = rec.bits_total ? static_cast<double>(rec.bit_errors) / static_cast<double>(rec.bits_total)
                           : 0.0;
  return rec;
}

std::vector<BerRecord> run_ber_sweep(const std::vector<Scheme>& schemes,
                                     const std::vector<double>& etx_db_grid,
                                     std::size_t channels, std::size_t symbols_per_channel,
                                     Dims dims, const SolverConfig& cfg,
                                     std::uint64_t master_seed, int threads) {
  const std::size_t points = schemes.size() * etx_db_grid.size();
  // errors[channel][point], reduced in channel order afterwards
  std::vector<std::vector<std::uint64_t>> errors(channels,
                                                 std::vector<std::uint64_t>(points, 0));
  std::vector<std::size_t> redraws(channels, 0);
  const bool wants_pm =
      std::find(schemes.begin(), schemes.end(), Scheme::PM) != schemes.end();

  parallel_for(channels, threads, [&](std::size_t c) {
    const ChannelRealization ch = make_channel(master_seed, dims, c, &redraws[c]);
    LookupTable lut;
    if (wants_pm) lut = build_lut(ch, cfg);
    std::size_t point = 0;
    for (const Scheme scheme : schemes) {
      for (const double etx_db : etx_db_grid) {
        const double etx = db_to_linear(etx_db);
        const TransmitTable table = scheme == Scheme::PM
                                        ? transmit_table_from_lut(lut, etx)
                                        : transmit_table(ch, scheme, etx, cfg);
        errors[c][point++] = channel_bit_errors(ch, table, symbols_per_channel, master_seed);
      }
    }
  });

  std::vector<BerRecord> out;
  out.reserve(points);
  std::size_t point = 0;
  for (const Scheme scheme : schemes) {
    for (const double etx_db : etx_db_grid) {
      BerRecord rec;
      rec.scheme = scheme;
      rec.etx_db = etx_db;
      rec.channels = channels;
      rec.symbols_per_channel = symbols_per_channel;
      for (std::size_t c = 0; c < channels; ++c) rec.bit_errors += errors[c][point];
      rec.bits_total =
          static_cast<std::uint64_t>(channels) * symbols_per_channel * 2 * dims.users;
      rec.ber = rec.bits_total
                    ? static_cast<double>(rec.bit_errors) / static_cast<double>(rec.bits_total)
                    : 0.0;
      for (std::size_t c = 0; c < channels; ++c) rec.channel_redraws += redraws[c];
      out.push_back(rec);
      ++point;
    }
  }
  return out;
}

std::vector<MiRecord> run_mi_sweep(const std::vector<Scheme>& schemes,
                                   const std::vector<double>& etx_db_grid, std::size_t channels,
                                   Dims dims, const SolverConfig& cfg, std::uint64_t master_seed,
                                   int threads) {
  const std::size_t points = schemes.size() * etx_db_grid.size();
  std::vector<std::vector<double>> mi(channels, std::vector<double>(points, 0.0));
  const bool wants_pm =
      std::find(schemes.begin(), schemes.end(), Scheme::PM) != schemes.end();

  parallel_for(channels, threads, [&](std::size_t c) {
    const ChannelRealization ch = make_channel(master_seed, dims, c);
    LookupTable lut;
    if (wants_pm) lut = build_lut(ch, cfg);
    std::size_t point = 0;
    for (const Scheme scheme : schemes) {
      for (const double etx_db : etx_db_grid) {
        const double etx = db_to_linear(etx_db);
        const TransmitTable table = scheme == Scheme::PM
                                        ? transmit_table_from_lut(lut, etx)
                                        : transmit_table(ch, scheme, etx, cfg);
        mi[c][point++] = exact_mi(ch, table);
      }
    }
  });

  std::vector<MiRecord> out;
  out.reserve(points);
  std::size_t point = 0;
  for (const Scheme scheme : schemes) {
    for (const double etx_db : etx_db_grid) {
      MiRecord rec;
      rec.scheme = scheme;
      rec.etx_db = etx_db;
      rec.channels = channels;
      double sum = 0.0;
      for (std::size_t c = 0; c < channels; ++c) sum += mi[c][point];
      rec.mi_bpcu = channels ? sum / static_cast<double>(channels) : 0.0;
      out.push_back(rec);
      ++point;
    }
  }
  return out;
}

double semi_analytic_ber(const ChannelRealization& ch, const TransmitTable& table) {
  const std::size_t m_users = ch.users();
  const std::uint64_t count = table_size(m_users);
  if (table.x.size() != count)
    throw DimensionMismatch("semi_analytic_ber: table size != 4^M");
  double total = 0.0;
  for (std::uint64_t u = 0; u < count; ++u) {
    const SymbolVector s = symbol_from_index(u, m_users);
    const CVec r = matvec(ch.H, table.x[u]);
    for (std::size_t m = 0; m < m_users; ++m) {
      total += tail_flip_prob(s.symbols[m].real() < 0.0 ? -1.0 : 1.0, r[m].real());
      total += tail_flip_prob(s.symbols[m].imag() < 0.0 ? -1.0 : 1.0, r[m].imag());
    }
  }
  return total / (static_cast<double>(count) * 2.0 * static_cast<double>(m_users));
}

double exact_mi(const ChannelRealization& ch, const TransmitTable& table,
                std::size_t max_users) {
  const std::size_t m_users = ch.users();
  if (m_users > max_users)
    throw SizeBound("exact_mi: 4^M output enumeration exceeds bound (M > " +
                    std::to_string(max_users) + ")");
  const std::uint64_t count = table_size(m_users);
  if (table.x.size() != count) throw DimensionMismatch("exact_mi: table size != 4^M");

  // q_plus[u][2m] = P(Re sign of user m is +), q_plus[u][2m+1] same for Im.
  std::vector<RVec> q_plus(count, RVec(2 * m_users));
  double h_out_given_in = 0.0;
  for (std::uint64_t u = 0; u < count; ++u) {
    const CVec r = matvec(ch.H, table.x[u]);
    for (std::size_t m = 0; m < m_users; ++m) {
      const double q_re = 0.5 * std::erfc(-r[m].real());
      const double q_im = 0.5 * std::erfc(-r[m].imag());
      q_plus[u][2 * m] = q_re;
      q_plus[u][2 * m + 1] = q_im;
      h_out_given_in += binary_entropy(q_re) + binary_entropy(q_im);
    }
  }
  h_out_given_in /= static_cast<double>(count);

  double h_out = 0.0;
  const double pu = 1.0 / static_cast<double>(count);
  for (std::uint64_t y = 0; y < count; ++y) {
    double py = 0.0;
    for (std::uint64_t u = 0; u < count; ++u) {
      double prob = pu;
      for (std::size_t m = 0; m < m_users; ++m) {
        const std::uint64_t code = (y >> (2 * m)) & 3ULL;
        const double q_re = q_plus[u][2 * m];
        const double q_im = q_plus[u][2 * m + 1];
        prob *= ((code & 2ULL) ? 1.0 - q_re : q_re) * ((code & 1ULL) ? 1.0 - q_im : q_im);
      }
      py += prob;
    }
    if (py > 0.0) h_out -= py * std::log2(py);
  }
  return h_out - h_out_given_in;
}

std::pair<CVec, double> exhaustive_oracle(const ChannelRealization& ch, const SymbolVector& s) {
  const std::size_t n = ch.antennas();
  if (n > 8) throw SizeBound("exhaustive_oracle: 4^N enumeration limited to N <= 8");
  const std::uint64_t count = 1ULL << (2 * n);
  CVec best, best_raw;
  double best_det = -std::numeric_limits<double>::infinity();
  double best_raw_det = -std::numeric_limits<double>::infinity();
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    const CVec x = symbol_from_index(idx, n).symbols;
    const ObjectiveState st = objective(ch, {stack(x)}, s);
    if (st.det_p > best_raw_det) {
      best_raw_det = st.det_p;
      best_raw = x;
    }
    bool valid = true;
    for (std::size_t m = 0; m < st.a.size(); ++m)
      if (st.a[m] < 0.0 || st.p[m] < 0.0) {
        valid = false;
        break;
      }
    if (valid && st.det_p > best_det) {
      best_det = st.det_p;
      best = x;
    }
  }
  if (best.empty()) return {best_raw, best_raw_det};
  return {best, best_det};
}

std::vector<IterationStat> iteration_stats(std::size_t channels, Dims dims,
                                           const SolverConfig& base,
                                           const std::vector<double>& eps_grid,
                                           std::uint64_t master_seed, int threads) {
  const std::size_t n_eps = eps_grid.size();
  std::vector<std::vector<std::uint64_t>> totals(channels,
                                                 std::vector<std::uint64_t>(n_eps, 0));
  parallel_for(channels, threads, [&](std::size_t c) {
    const ChannelRealization ch = make_channel(master_seed, dims, c);
    for (std::size_t e = 0; e < n_eps; ++e) {
      SolverConfig cfg = base;
      cfg.epsilon = eps_grid[e];
      const LookupTable lut = build_lut(ch, cfg);
      for (const auto& d : lut.diags)
        totals[c][e] += static_cast<std::uint64_t>(d.iterations);
    }
  });

  const double entries =
      static_cast<double>(channels) * static_cast<double>(table_size(dims.users));
  std::vector<IterationStat> out(n_eps);
  for (std::size_t e = 0; e < n_eps; ++e) {
    std::uint64_t total = 0;
    for (std::size_t c = 0; c < channels; ++c) total += totals[c][e];
    out[e] = {eps_grid[e], entries > 0 ? static_cast<double>(total) / entries : 0.0};
  }
  return out;
}

std::vector<TableRow> run_table(const std::vector<double>& eps_grid,
                                const std::vector<double>& etx_db_grid, double mi_etx_db,
                                std::size_t channels, std::size_t symbols_per_channel,
                                Dims dims, const SolverConfig& base, std::uint64_t master_seed,
                                int threads) {
  const std::size_t n_eps = eps_grid.size();
  const std::size_t n_etx = etx_db_grid.size();
  struct ChannelPartial {
    std::vector<std::uint64_t> iterations;  // per epsilon
    std::vector<std::uint64_t> errors;      // per (epsilon, etx)
    std::vector<double> mi;                 // per epsilon
  };
  std::vector<ChannelPartial> partials(channels);

  parallel_for(channels, threads, [&](std::size_t c) {
    ChannelPartial part;
    part.iterations.assign(n_eps, 0);
    part.errors.assign(n_eps * n_etx, 0);
    part.mi.assign(n_eps, 0.0);
    const ChannelRealization ch = make_channel(master_seed, dims, c);
    for (std::size_t e = 0; e < n_eps; ++e) {
      SolverConfig cfg = base;
      cfg.epsilon = eps_grid[e];
      const LookupTable lut = build_lut(ch, cfg);
      for (const auto& d : lut.diags)
        part.iterations[e] += static_cast<std::uint64_t>(d.iterations);
      for (std::size_t t = 0; t < n_etx; ++t) {
        const TransmitTable table = transmit_table_from_lut(lut, db_to_linear(etx_db_grid[t]));
        part.errors[e * n_etx + t] =
            channel_bit_errors(ch, table, symbols_per_channel, master_seed);
      }
      part.mi[e] = exact_mi(ch, transmit_table_from_lut(lut, db_to_linear(mi_etx_db)));
    }
    partials[c] = std::move(part);
  });

  const double entry_count =
      static_cast<double>(channels) * static_cast<double>(table_size(dims.users));
  const double bits_total = static_cast<double>(channels) *
                            static_cast<double>(symbols_per_channel) * 2.0 *
                            static_cast<double>(dims.users);
  std::vector<TableRow> rows(n_eps);
  for (std::size_t e = 0; e < n_eps; ++e) {
    std::uint64_t iters = 0;
    double mi_sum = 0.0;
    std::vector<std::pair<double, double>> curve(n_etx);
    for (std::size_t t = 0; t < n_etx; ++t) curve[t] = {etx_db_grid[t], 0.0};
    for (std::size_t c = 0; c < channels; ++c) {
      iters += partials[c].iterations[e];
      mi_sum += partials[c].mi[e];
      for (std::size_t t = 0; t < n_etx; ++t)
        curve[t].second += static_cast<double>(partials[c].errors[e * n_etx + t]);
    }
    for (auto& [etx_db, ber] : curve) ber /= bits_total;
    rows[e].epsilon = eps_grid[e];
    rows[e].mean_iterations = static_cast<double>(iters) / entry_count;
    rows[e].snr_at_1e3_db = snr_at_ber(curve, 1e-3, 0.5 / bits_total);
    rows[e].mi_bpcu = mi_sum / static_cast<double>(channels);
  }
  return rows;
}

double snr_at_ber(const std::vector<std::pair<double, double>>& curve, double target,
                  double floor) {
  const double lt = std::log10(target);
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    const double b0 = std::max(curve[i].second, floor);
    const double b1 = std::max(curve[i + 1].second, floor);
    if (b0 >= target && b1 <= target) {
      const double l0 = std::log10(b0);
      const double l1 = std::log10(b1);
      if (l0 == l1) return curve[i].first;
      return curve[i].first +
             (curve[i + 1].first - curve[i].first) * (l0 - lt) / (l0 - l1);
    }
  }
  throw InterpolationRange("snr_at_ber: curve never crosses target");
}

}  // namespace onebit
