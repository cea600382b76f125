#include <cmath>
#include <limits>

#include <doctest.h>

#include "onebit/eval.hpp"
#include "support.hpp"

using namespace onebit;

TEST_SUITE("eval") {

TEST_CASE("make_channel: deterministic per (seed, id), distinct across ids") {
  const ChannelRealization a = make_channel(9, {8, 2}, 3);
  const ChannelRealization b = make_channel(9, {8, 2}, 3);
  const ChannelRealization c = make_channel(9, {8, 2}, 4);
  REQUIRE(a.H.a.size() == b.H.a.size());
  for (std::size_t i = 0; i < a.H.a.size(); ++i) CHECK(a.H.a[i] == b.H.a[i]);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.H.a.size(); ++i) any_diff |= a.H.a[i] != c.H.a[i];
  CHECK(any_diff);
}

TEST_CASE("run_ber: unquantized WF detects noiselessly without errors") {
  const ChannelRealization ch = make_channel(4, {16, 2}, 0);
  const TransmitTable table = transmit_table(ch, Scheme::WF_UNQ, db_to_linear(30.0), {});
  int errors = 0;
  for (std::uint64_t u = 0; u < 16; ++u) {
    const SymbolVector s = symbol_from_index(u, 2);
    const SymbolVector got = detect(ch, table.x[u], nullptr);
    errors += bit_errors(s, got);
  }
  CHECK(errors == 0);
}

TEST_CASE("run_ber: zero transmit power gives coin-flip detection") {
  const double neg_inf = -std::numeric_limits<double>::infinity();
  const BerRecord rec = run_ber(Scheme::PM, 3, 2000, neg_inf, {4, 2}, {}, 11);
  const double se = std::sqrt(0.25 / static_cast<double>(rec.bits_total));
  CHECK(std::abs(rec.ber - 0.5) <= 3.0 * se);
}

TEST_CASE("run_ber: identical master seed reproduces bit counts") {
  const BerRecord a = run_ber(Scheme::WFQ, 4, 500, 6.0, {8, 2}, {}, 17);
  const BerRecord b = run_ber(Scheme::WFQ, 4, 500, 6.0, {8, 2}, {}, 17);
  CHECK(a.bit_errors == b.bit_errors);
  CHECK(a.bits_total == b.bits_total);
}

TEST_CASE("run_ber: independent of thread count") {
  const BerRecord a = run_ber(Scheme::PM, 6, 300, 4.0, {8, 2}, {}, 23, 1);
  const BerRecord b = run_ber(Scheme::PM, 6, 300, 4.0, {8, 2}, {}, 23, 3);
  CHECK(a.bit_errors == b.bit_errors);
}

TEST_CASE("run_ber_sweep: bit-identical to per-point runs") {
  const std::vector<Scheme> schemes{Scheme::PM, Scheme::WF};
  const std::vector<double> grid{0.0, 6.0};
  const auto sweep = run_ber_sweep(schemes, grid, 4, 400, {8, 2}, {}, 31);
  REQUIRE(sweep.size() == 4);
  std::size_t i = 0;
  for (const Scheme s : schemes) {
    for (const double etx_db : grid) {
      const BerRecord single = run_ber(s, 4, 400, etx_db, {8, 2}, {}, 31);
      CHECK(sweep[i].bit_errors == single.bit_errors);
      CHECK(sweep[i].scheme == s);
      CHECK(sweep[i].etx_db == etx_db);
      ++i;
    }
  }
}

TEST_CASE("semi_analytic_ber: tracks Monte Carlo within 3 standard errors") {
  const std::size_t symbols = 4000;
  for (std::uint64_t c = 0; c < 20; ++c) {
    const ChannelRealization ch = make_channel(37, {8, 2}, c);
    const double etx = db_to_linear(4.0);
    const TransmitTable table = transmit_table(ch, Scheme::PM, etx, {});
    const double sa = semi_analytic_ber(ch, table);

    SeededRng sym_rng(37, derive_stream(c, StreamPurpose::Symbols));
    SeededRng noise_rng(37, derive_stream(c, StreamPurpose::Noise));
    std::uint64_t errors = 0;
    for (std::size_t k = 0; k < symbols; ++k) {
      const std::uint64_t u = sym_rng.next_u64() & 15ULL;
      const SymbolVector s = symbol_from_index(u, 2);
      errors += bit_errors(s, detect(ch, table.x[u], &noise_rng));
    }
    const double bits = static_cast<double>(symbols) * 4.0;
    const double mc = static_cast<double>(errors) / bits;
    const double se = std::sqrt(std::max(sa * (1.0 - sa), 1e-12) / bits);
    CHECK(std::abs(mc - sa) <= 3.0 * se);
  }
}

TEST_CASE("semi_analytic_ber: exactly 1/2 at zero power") {
  const ChannelRealization ch = make_channel(41, {4, 2}, 0);
  const TransmitTable table = transmit_table(ch, Scheme::PM, 0.0, {});
  CHECK(semi_analytic_ber(ch, table) == 0.5);
}

TEST_CASE("semi_analytic_ber: a bit on the decision threshold contributes 1/2") {
  ComplexMatrix H(1, 1);
  H(0, 0) = 0.0;  // every received component sits exactly on the threshold
  const auto ch = ChannelRealization::from_matrix(H, 0);
  TransmitTable table;
  table.x.assign(4, CVec{cplx{kInvSqrt2, kInvSqrt2}});
  CHECK(semi_analytic_ber(ch, table) == 0.5);
}

TEST_CASE("exact_mi: zero power carries zero information, exactly") {
  const ChannelRealization ch = make_channel(43, {6, 2}, 0);
  const TransmitTable table = transmit_table(ch, Scheme::PM, 0.0, {});
  CHECK(exact_mi(ch, table) == 0.0);
}

TEST_CASE("exact_mi: a noise-dominating bijective table reaches 2M bits") {
  const auto ch = ChannelRealization::from_matrix(ComplexMatrix::identity(2), 0);
  TransmitTable table;
  table.x.resize(16);
  for (std::uint64_t u = 0; u < 16; ++u) {
    const SymbolVector s = symbol_from_index(u, 2);
    table.x[u].resize(2);
    for (std::size_t m = 0; m < 2; ++m) table.x[u][m] = 100.0 * s.symbols[m];
  }
  CHECK(exact_mi(ch, table) == 4.0);
}

TEST_CASE("exact_mi: bounded by 2M and monotone in transmit power") {
  const ChannelRealization ch = make_channel(47, {8, 2}, 0);
  const LookupTable lut = build_lut(ch, {});
  double prev = -1.0;
  for (int i = 0; i < 10; ++i) {
    const double etx_db = -6.0 + 3.0 * i;
    const double mi = exact_mi(ch, transmit_table_from_lut(lut, db_to_linear(etx_db)));
    CHECK(mi >= 0.0);
    CHECK(mi <= 4.0);
    CHECK(mi >= prev - 1e-9);
    prev = mi;
  }
}

TEST_CASE("exact_mi: agrees with the plug-in Monte-Carlo estimate") {
  for (std::uint64_t c = 0; c < 2; ++c) {
    const ChannelRealization ch = make_channel(53, {8, 2}, c);
    const TransmitTable table = transmit_table(ch, Scheme::PM, db_to_linear(5.0), {});
    const double exact = exact_mi(ch, table);
    SeededRng rng(53, derive_stream(c, StreamPurpose::Noise, 1));
    const double plug_in = testsupport::plug_in_mi(ch, table.x.data(), 16, 1000000, rng);
    CHECK(std::abs(exact - plug_in) <= 0.02);
  }
}

TEST_CASE("exact_mi: refuses oversized user counts") {
  const ChannelRealization ch = make_channel(59, {8, 7}, 0);
  CHECK_THROWS_AS(exact_mi(ch, TransmitTable{}), SizeBound);
}

TEST_CASE("exhaustive_oracle: scalar alignment") {
  ComplexMatrix H(1, 1);
  H(0, 0) = 1.0;
  const auto ch = ChannelRealization::from_matrix(H, 0);
  const SymbolVector s = symbol_from_index(2, 1);
  const auto [x, det] = exhaustive_oracle(ch, s);
  CHECK(det == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(x[0] == s.symbols[0]);
}

TEST_CASE("exhaustive_oracle: deterministic on a fixed channel") {
  const ChannelRealization ch = make_channel(61, {2, 2}, 0);
  const SymbolVector s = symbol_from_index(7, 2);
  const auto [x1, d1] = exhaustive_oracle(ch, s);
  const auto [x2, d2] = exhaustive_oracle(ch, s);
  CHECK(d1 == d2);
  for (std::size_t n = 0; n < 2; ++n) CHECK(x1[n] == x2[n]);
}

TEST_CASE("exhaustive_oracle: enforces the antenna bound") {
  const ChannelRealization ch = make_channel(67, {9, 1}, 0);
  CHECK_THROWS_AS(exhaustive_oracle(ch, symbol_from_index(0, 1)), SizeBound);
}

TEST_CASE("iteration_stats: monotone as the tolerance shrinks") {
  const auto stats = iteration_stats(5, {16, 2}, {}, {1e-3, 1e-4, 1e-6}, 71);
  REQUIRE(stats.size() == 3);
  CHECK(stats[0].mean_iterations <= stats[1].mean_iterations);
  CHECK(stats[1].mean_iterations <= stats[2].mean_iterations);
  CHECK(stats[0].mean_iterations > 0.0);
}

TEST_CASE("snr_at_ber: log-linear interpolation") {
  // log10 ber falls linearly from -2 to -4 over [0, 10] dB; 1e-3 sits at 5.
  const std::vector<std::pair<double, double>> curve{{0.0, 1e-2}, {10.0, 1e-4}};
  CHECK(snr_at_ber(curve, 1e-3) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK_THROWS_AS(snr_at_ber({{0.0, 1e-2}, {10.0, 2e-3}}, 1e-3), InterpolationRange);
}

TEST_CASE("lookup entries detect correctly without noise") {
  // Positive per-user margins (a_m > 0, p_m > 0) put every received point in
  // its correct quadrant, so the noise-free receiver returns the input.
  const ChannelRealization ch = make_channel(73, {32, 4}, 0);
  const LookupTable lut = build_lut(ch, {});
  int valid_entries = 0;
  for (std::uint64_t u = 0; u < lut.size(); ++u) {
    const SymbolVector s = symbol_from_index(u, 4);
    const ObjectiveState st = objective(ch, {stack(lut.entries[u])}, s);
    bool valid = true;
    for (std::size_t m = 0; m < 4; ++m) valid = valid && st.a[m] > 0 && st.p[m] > 0;
    if (!valid) continue;
    ++valid_entries;
    const SymbolVector got = transmit_receive_noiseless(ch, lut.entries[u], 6.31);
    CHECK(got.index == u);
    CHECK(bit_errors(s, got) == 0);
  }
  CHECK(valid_entries == 256);  // at N >> M every entry separates cleanly
}

TEST_CASE("solve_pm: hitting max_iters flags non-convergence") {
  const ChannelRealization ch = make_channel(79, {32, 4}, 0);
  SolverConfig cfg;
  cfg.max_iters = 3;
  const SolveResult r = solve_pm(ch, symbol_from_index(200, 4), cfg);
  CHECK(r.diag.iterations == 3);
  CHECK_FALSE(r.diag.converged);
}

TEST_CASE("scheme ordering at 8 dB on a modest ensemble") {
  const std::vector<Scheme> schemes{Scheme::PM, Scheme::WFQ, Scheme::WF};
  const auto recs = run_ber_sweep(schemes, {8.0}, 12, 1500, {32, 4}, {}, 5);
  REQUIRE(recs.size() == 3);
  const double pm = recs[0].ber, wfq = recs[1].ber, wf = recs[2].ber;
  CHECK(pm < wfq);
  CHECK(wfq < wf);
}

}  // TEST_SUITE
