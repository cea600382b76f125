#pragma once

// Shared helpers and independent oracles for the test suites. Everything in
// here stays off the library implementation paths it is used to check.

#include <cmath>
#include <cstdint>
#include <vector>

#include "onebit/airlink.hpp"
#include "onebit/numerics.hpp"
#include "onebit/pm_solver.hpp"

namespace testsupport {

inline onebit::ChannelRealization random_channel(std::uint64_t seed, std::size_t users,
                                                 std::size_t antennas,
                                                 std::uint64_t stream = 7777) {
  onebit::SeededRng rng(seed, stream);
  return onebit::ChannelRealization::from_matrix(
      onebit::sample_complex_gaussian(rng, users, antennas, 1.0), seed);
}

inline onebit::SymbolVector random_symbols(onebit::SeededRng& rng, std::size_t users) {
  const std::uint64_t u = rng.next_u64() & ((1ULL << (2 * users)) - 1);
  return onebit::symbol_from_index(u, users);
}

inline onebit::CVec random_cvec(onebit::SeededRng& rng, std::size_t n, double amplitude) {
  onebit::CVec x(n);
  for (auto& xi : x)
    xi = {amplitude * (2.0 * rng.uniform01() - 1.0), amplitude * (2.0 * rng.uniform01() - 1.0)};
  return x;
}

// Central finite differences of det(P) with respect to the stacked vector.
inline onebit::RVec fd_gradient(const onebit::ChannelRealization& ch,
                                const onebit::StackedTransmit& x,
                                const onebit::SymbolVector& s, double h = 1e-6) {
  onebit::RVec g(x.v.size());
  onebit::StackedTransmit probe = x;
  for (std::size_t k = 0; k < x.v.size(); ++k) {
    const double saved = probe.v[k];
    probe.v[k] = saved + h;
    const double fp = onebit::objective(ch, probe, s).det_p;
    probe.v[k] = saved - h;
    const double fm = onebit::objective(ch, probe, s).det_p;
    probe.v[k] = saved;
    g[k] = (fp - fm) / (2.0 * h);
  }
  return g;
}

inline double max_abs(const onebit::RVec& v) {
  double m = 0.0;
  for (const double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Complex-arithmetic route for the per-user scores: Re{((Hx)_m s_m^*)^2}.
// Independent of the stacked-real path used by the implementation.
inline onebit::RVec complex_route_p(const onebit::ChannelRealization& ch, const onebit::CVec& x,
                                    const onebit::SymbolVector& s) {
  const onebit::CVec r = onebit::matvec(ch.H, x);
  onebit::RVec p(r.size());
  for (std::size_t m = 0; m < r.size(); ++m) {
    const onebit::cplx rs = r[m] * std::conj(s.symbols[m]);
    p[m] = (rs * rs).real();
  }
  return p;
}

// Plug-in (histogram) mutual-information estimate from simulated
// transmissions: I_hat = sum p(u,y) log2(p(u,y)/(p(u)p(y))). Independent of
// the factorized exact computation it cross-checks.
inline double plug_in_mi(const onebit::ChannelRealization& ch, const onebit::CVec* table,
                         std::size_t table_size, std::size_t samples, onebit::SeededRng& rng) {
  const std::uint64_t mask = table_size - 1;
  std::vector<std::vector<double>> joint(table_size, std::vector<double>(table_size, 0.0));
  for (std::size_t i = 0; i < samples; ++i) {
    const std::uint64_t u = rng.next_u64() & mask;
    const onebit::SymbolVector got = onebit::detect(ch, table[u], &rng);
    joint[u][got.index] += 1.0;
  }
  std::vector<double> pu(table_size, 0.0), py(table_size, 0.0);
  for (std::size_t u = 0; u < table_size; ++u)
    for (std::size_t y = 0; y < table_size; ++y) {
      joint[u][y] /= static_cast<double>(samples);
      pu[u] += joint[u][y];
      py[y] += joint[u][y];
    }
  double mi = 0.0;
  for (std::size_t u = 0; u < table_size; ++u)
    for (std::size_t y = 0; y < table_size; ++y)
      if (joint[u][y] > 0.0) mi += joint[u][y] * std::log2(joint[u][y] / (pu[u] * py[y]));
  return mi;
}

}  // namespace testsupport
