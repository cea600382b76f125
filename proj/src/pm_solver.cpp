#include "onebit/pm_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "onebit/parallel.hpp"

namespace onebit {

namespace {

// (C x')_m and (D x')_m for one row, each as top-half dot + bottom-half dot.
// The blocked form keeps det(P) exactly invariant under the joint rotation
// (x, s) -> (jx, js): the two half-sums swap and negate, both exact in IEEE
// arithmetic.
void stacked_row_products(const ChannelRealization& ch, const RVec& x, std::size_t m,
                          double& cx, double& dx) {
  const std::size_t n = ch.antennas();
  double c_top = 0.0, c_bot = 0.0, d_top = 0.0, d_bot = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    c_top += ch.C(m, k) * x[k];
    c_bot += ch.C(m, n + k) * x[n + k];
    d_top += ch.D(m, k) * x[k];
    d_bot += ch.D(m, n + k) * x[n + k];
  }
  cx = c_top + c_bot;
  dx = d_top + d_bot;
}

ObjectiveState eval_objective(const ChannelRealization& ch, const RVec& x,
                              const SymbolVector& s) {
  const std::size_t m_users = ch.users();
  ObjectiveState st;
  st.a.resize(m_users);
  st.b.resize(m_users);
  st.p.resize(m_users);
  st.det_p = 1.0;
  for (std::size_t m = 0; m < m_users; ++m) {
    double cx, dx;
    stacked_row_products(ch, x, m, cx, dx);
    const double sr = s.symbols[m].real();
    const double si = s.symbols[m].imag();
    st.a[m] = cx * sr + dx * si;
    st.b[m] = cx * si - dx * sr;
    st.p[m] = st.a[m] * st.a[m] - st.b[m] * st.b[m];
    st.det_p *= st.p[m];
  }
  return st;
}

bool in_good_region(const ObjectiveState& st) {
  for (std::size_t m = 0; m < st.a.size(); ++m)
    if (st.a[m] < 0.0 || st.p[m] < 0.0) return false;
  return true;
}

void check_dims(const ChannelRealization& ch, const StackedTransmit& x,
                const SymbolVector& s) {
  if (x.v.size() != 2 * ch.antennas())
    throw DimensionMismatch("pm_solver: stacked vector length != 2N");
  if (s.users() != ch.users())
    throw DimensionMismatch("pm_solver: symbol vector length != M");
}

CVec rotate_j(const CVec& v) {
  CVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = {-v[i].imag(), v[i].real()};
  return out;
}

}  // namespace

ObjectiveState objective(const ChannelRealization& ch, const StackedTransmit& x,
                         const SymbolVector& s) {
  check_dims(ch, x, s);
  return eval_objective(ch, x.v, s);
}

RVec gradient(const ChannelRealization& ch, const StackedTransmit& x, const SymbolVector& s) {
  check_dims(ch, x, s);
  const std::size_t m_users = ch.users();
  const ObjectiveState st = eval_objective(ch, x.v, s);
  const RVec adj = diag_adjugate(st.p);

  RVec u(m_users), w(m_users);
  for (std::size_t m = 0; m < m_users; ++m) {
    const double sr = s.symbols[m].real();
    const double si = s.symbols[m].imag();
    u[m] = adj[m] * (st.a[m] * sr - st.b[m] * si);
    w[m] = adj[m] * (st.a[m] * si + st.b[m] * sr);
  }

  const std::size_t cols = 2 * ch.antennas();
  RVec g(cols, 0.0);
  for (std::size_t m = 0; m < m_users; ++m) {
    for (std::size_t k = 0; k < cols; ++k) g[k] += ch.C(m, k) * u[m] + ch.D(m, k) * w[m];
  }
  for (auto& gk : g) gk *= 2.0;
  return g;
}

StackedTransmit project_box(RVec x) {
  for (auto& v : x) v = std::clamp(v, -kInvSqrt2, kInvSqrt2);
  return {std::move(x)};
}

SolveResult solve_pm(const ChannelRealization& ch, const SymbolVector& s,
                     const SolverConfig& cfg) {
  return solve_pm(ch, zf(ch).W, s, cfg);
}

SolveResult solve_pm(const ChannelRealization& ch, const ComplexMatrix& W_zf,
                     const SymbolVector& s, const SolverConfig& cfg) {
  StackedTransmit x = project_box(stack(matvec(W_zf, s.symbols)));
  ObjectiveState st = eval_objective(ch, x.v, s);
  bool prev_good = in_good_region(st);

  double mu = cfg.mu0 / fro_norm_sq(ch.H);
  // Absolute fallback stop threshold while det(P) <= 0, where the relative
  // rule is undefined.
  const double fallback = cfg.epsilon * std::max(1.0, std::abs(st.det_p));

  SolveDiagnostics diag;
  if (cfg.record_trace) diag.det_trace.push_back(st.det_p);
  RVec trial(x.v.size());
  while (diag.iterations < cfg.max_iters) {
    const RVec g = gradient(ch, x, s);
    ++diag.iterations;

    bool accepted = false;
    double improvement = 0.0;
    double threshold = 0.0;
    for (int h = 0; h <= cfg.max_halvings_per_iter; ++h) {
      for (std::size_t k = 0; k < trial.size(); ++k)
        trial[k] = std::clamp(x.v[k] + mu * g[k], -kInvSqrt2, kInvSqrt2);
      const ObjectiveState st_t = eval_objective(ch, trial, s);
      const bool good_t = in_good_region(st_t);
      if (st_t.det_p >= st.det_p && (good_t || !prev_good)) {
        improvement = st_t.det_p - st.det_p;
        threshold = st.det_p > 0.0 ? cfg.epsilon * st.det_p : fallback;
        x.v.swap(trial);
        st = st_t;
        prev_good = good_t;
        accepted = true;
        break;
      }
      mu *= 0.5;
    }
    if (accepted && cfg.record_trace) diag.det_trace.push_back(st.det_p);
    if (!accepted || improvement <= threshold) {
      // Either the relative-improvement rule fired or the step collapsed at
      // a box/stationary point; both count as converged.
      diag.converged = true;
      break;
    }
  }

  diag.det_relaxed = st.det_p;
  diag.det_quantized = eval_objective(ch, stack(quantize(unstack(x.v))), s).det_p;
  return {std::move(x), diag};
}

namespace {

int valid_users(const ObjectiveState& st) {
  int n = 0;
  for (std::size_t m = 0; m < st.a.size(); ++m) n += st.a[m] >= 0.0 && st.p[m] >= 0.0;
  return n;
}

// Correct detection first, then margin product.
bool lex_better(const ObjectiveState& cand, const ObjectiveState& cur) {
  const int vc = valid_users(cand), vu = valid_users(cur);
  if (vc != vu) return vc > vu;
  return cand.det_p > cur.det_p;
}

}  // namespace

CVec polish_quantized(const ChannelRealization& ch, CVec x_q, const SymbolVector& s,
                      int depth, int* flips) {
  if (flips != nullptr) *flips = 0;
  if (depth <= 0) return x_q;

  RVec x = stack(x_q);
  ObjectiveState st = eval_objective(ch, x, s);
  const std::size_t nbits = x.size();

  auto try_move = [&](std::size_t i, std::size_t j, std::size_t k) {
    x[i] = -x[i];
    if (j != i) x[j] = -x[j];
    if (k != j) x[k] = -x[k];
    const ObjectiveState st_t = eval_objective(ch, x, s);
    if (lex_better(st_t, st)) {
      st = st_t;
      if (flips != nullptr) *flips += 1 + (j != i) + (k != j);
      return true;
    }
    x[i] = -x[i];
    if (j != i) x[j] = -x[j];
    if (k != j) x[k] = -x[k];
    return false;
  };

  for (;;) {
    bool improved = false;
    for (std::size_t i = 0; i < nbits; ++i) improved |= try_move(i, i, i);
    if (!improved && depth >= 2) {
      for (std::size_t i = 0; i < nbits && !improved; ++i)
        for (std::size_t j = i + 1; j < nbits && !improved; ++j) improved = try_move(i, j, j);
    }
    if (!improved && depth >= 3) {
      for (std::size_t i = 0; i < nbits && !improved; ++i)
        for (std::size_t j = i + 1; j < nbits && !improved; ++j)
          for (std::size_t k = j + 1; k < nbits && !improved; ++k)
            improved = try_move(i, j, k);
    }
    if (!improved) break;
  }
  return unstack(x);
}

namespace {

struct PipelineCandidate {
  CVec x_q;
  ObjectiveState st;
  SolveDiagnostics diag;
};

// One solve followed by the rounding search and polish. Independent sign
// rounding is only ambiguous on coordinates the relaxed optimum left
// strictly inside the box; enumerate their sign patterns jointly (capped to
// keep the candidate count bounded) and keep the lexicographically best
// (valid users, det) pattern before polishing.
PipelineCandidate solve_round_polish(const ChannelRealization& ch, const ComplexMatrix& W_init,
                                     const SymbolVector& s, const SolverConfig& cfg) {
  SolveResult r = solve_pm(ch, W_init, s, cfg);
  const RVec& x = r.x.v;

  std::vector<std::size_t> interior;
  for (std::size_t k = 0; k < x.size(); ++k)
    if (kInvSqrt2 - std::abs(x[k]) > 1e-9) interior.push_back(k);
  if (interior.size() > 12) {
    std::sort(interior.begin(), interior.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(x[a]) < std::abs(x[b]);
    });
    interior.resize(12);
  }
  RVec rounded(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) rounded[k] = x[k] < 0.0 ? -kInvSqrt2 : kInvSqrt2;
  RVec best = rounded;
  ObjectiveState best_st = eval_objective(ch, best, s);
  RVec cand = rounded;
  for (std::uint64_t bits = 1; bits < (1ULL << interior.size()); ++bits) {
    for (std::size_t i = 0; i < interior.size(); ++i)
      cand[interior[i]] = (bits >> i) & 1ULL ? -rounded[interior[i]] : rounded[interior[i]];
    const ObjectiveState st = eval_objective(ch, cand, s);
    if (lex_better(st, best_st)) {
      best_st = st;
      best = cand;
    }
  }

  PipelineCandidate out;
  out.diag = std::move(r.diag);
  out.x_q = polish_quantized(ch, unstack(best), s, cfg.polish_depth, &out.diag.polish_flips);
  out.st = eval_objective(ch, stack(out.x_q), s);
  out.diag.det_quantized = out.st.det_p;
  return out;
}

}  // namespace

CVec pm_transmit_vector(const ChannelRealization& ch, const ComplexMatrix& W_zf,
                        const SymbolVector& s, const SolverConfig& cfg,
                        SolveDiagnostics* diag) {
  PipelineCandidate best = solve_round_polish(ch, W_zf, s, cfg);

  // A wrong-quadrant user after rounding+polish means the entry is broken
  // for detection; retry from seeded random starts and keep the best
  // candidate. restart_always widens this to every input (used when chasing
  // the exhaustive optimum at small N, where the ZF basin alone is not
  // reliable).
  const auto damaged = [&](const PipelineCandidate& c) {
    return valid_users(c.st) < static_cast<int>(ch.users());
  };
  if ((cfg.restart_always || damaged(best)) && cfg.max_restarts > 0) {
    SeededRng init_rng(ch.id, derive_stream(s.index, StreamPurpose::Channel, 0x9D5F));
    int total_iterations = best.diag.iterations;
    int total_flips = best.diag.polish_flips;
    const ComplexMatrix Hh = adjoint(ch.H);
    for (int k = 0; k < cfg.max_restarts; ++k) {
      // Random positive mixture of per-user matched filters: column m is
      // g_m conj(h_m), so the start already points every user toward its
      // correct quadrant (unlike an arbitrary random start, which tends to
      // converge to a wrong-quadrant det maximum the selection rejects).
      ComplexMatrix W_k = Hh;
      for (std::size_t m = 0; m < ch.users(); ++m) {
        const double g = std::exp(2.0 * (2.0 * init_rng.uniform01() - 1.0));
        for (std::size_t n = 0; n < ch.antennas(); ++n) W_k(n, m) *= g;
      }
      PipelineCandidate cand = solve_round_polish(ch, W_k, s, cfg);
      total_iterations += cand.diag.iterations;
      total_flips += cand.diag.polish_flips;
      if (lex_better(cand.st, best.st)) best = std::move(cand);
    }
    best.diag.iterations = total_iterations;
    best.diag.polish_flips = total_flips;
  }

  if (diag != nullptr) *diag = std::move(best.diag);
  return best.x_q;
}

std::uint64_t rotate_index_j(std::uint64_t u, std::size_t users) {
  // Multiplying a QPSK point by j permutes the 2-bit codes as 0->2->3->1->0.
  static constexpr std::uint64_t map[4] = {2, 0, 3, 1};
  std::uint64_t out = 0;
  for (std::size_t m = 0; m < users; ++m) out |= map[(u >> (2 * m)) & 3ULL] << (2 * m);
  return out;
}

LookupTable build_lut(const ChannelRealization& ch, const SolverConfig& cfg, int threads) {
  const std::size_t m_users = ch.users();
  if (m_users > 10) throw SizeBound("build_lut: 4^M table too large for M > 10");
  const std::uint64_t count = 1ULL << (2 * m_users);

  LookupTable lut;
  lut.channel_id = ch.id;
  lut.users = m_users;
  lut.antennas = ch.antennas();
  lut.entries.resize(count);
  lut.diags.resize(count);

  const ComplexMatrix W = zf(ch).W;
  auto solve_entry = [&](std::uint64_t u) {
    const SymbolVector s = symbol_from_index(u, m_users);
    lut.entries[u] = pm_transmit_vector(ch, W, s, cfg, &lut.diags[u]);
  };

  if (!cfg.exploit_symmetry) {
    parallel_for(count, threads, [&](std::size_t u) { solve_entry(u); });
    return lut;
  }

  // Solve one representative per 4-element phase orbit, rotate the rest.
  std::vector<std::uint64_t> reps;
  std::vector<bool> seen(count, false);
  for (std::uint64_t u = 0; u < count; ++u) {
    if (seen[u]) continue;
    reps.push_back(u);
    std::uint64_t v = u;
    for (int k = 0; k < 4; ++k) {
      seen[v] = true;
      v = rotate_index_j(v, m_users);
    }
  }
  parallel_for(reps.size(), threads, [&](std::size_t i) { solve_entry(reps[i]); });
  for (const std::uint64_t u : reps) {
    std::uint64_t v = u;
    for (int k = 0; k < 3; ++k) {
      const std::uint64_t w = rotate_index_j(v, m_users);
      if (w == u) break;  // all-orbit fixed points cannot occur, but be safe
      lut.entries[w] = rotate_j(lut.entries[v]);
      lut.diags[w] = lut.diags[u];
      v = w;
    }
  }
  return lut;
}

void write_lut_csv(const LookupTable& lut, std::ostream& os) {
  os << "channel_id,index,antenna,re,im\n";
  char buf[128];
  for (std::uint64_t u = 0; u < lut.size(); ++u) {
    for (std::size_t n = 0; n < lut.antennas; ++n) {
      const cplx z = lut.entries[u][n];
      std::snprintf(buf, sizeof(buf), "%llu,%llu,%zu,%.17g,%.17g\n",
                    static_cast<unsigned long long>(lut.channel_id),
                    static_cast<unsigned long long>(u), n, z.real(), z.imag());
      os << buf;
    }
  }
}

LookupTable read_lut_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "channel_id,index,antenna,re,im")
    throw Error("read_lut_csv: missing or unexpected header");
  LookupTable lut;
  std::uint64_t max_index = 0;
  std::size_t max_antenna = 0;
  struct Row {
    std::uint64_t ch, u;
    std::size_t n;
    cplx z;
  };
  std::vector<Row> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    Row r;
    unsigned long long ch, u, n;
    double re, im;
    if (std::sscanf(line.c_str(), "%llu,%llu,%llu,%lg,%lg", &ch, &u, &n, &re, &im) != 5)
      throw Error("read_lut_csv: malformed row: " + line);
    r.ch = ch;
    r.u = u;
    r.n = static_cast<std::size_t>(n);
    r.z = {re, im};
    rows.push_back(r);
    max_index = std::max(max_index, r.u);
    max_antenna = std::max(max_antenna, r.n);
  }
  if (rows.empty()) throw Error("read_lut_csv: no rows");
  lut.channel_id = rows.front().ch;
  lut.antennas = max_antenna + 1;
  std::size_t users = 0;
  while ((1ULL << (2 * users)) < max_index + 1) ++users;
  if ((1ULL << (2 * users)) != max_index + 1)
    throw Error("read_lut_csv: entry count is not a power of 4");
  if (rows.size() != (max_index + 1) * lut.antennas)
    throw Error("read_lut_csv: missing or duplicate rows");
  lut.users = users;
  lut.entries.assign(max_index + 1, CVec(lut.antennas));
  lut.diags.assign(max_index + 1, {});
  for (const Row& r : rows) lut.entries[r.u][r.n] = r.z;
  return lut;
}

std::string lut_manifest_json(const LookupTable& lut, const SolverConfig& cfg,
                              const std::string& version) {
  nlohmann::json j;
  j["version"] = version;
  j["channel_id"] = lut.channel_id;
  j["users"] = lut.users;
  j["antennas"] = lut.antennas;
  j["solver"] = {{"mu0", cfg.mu0},
                 {"epsilon", cfg.epsilon},
                 {"max_iters", cfg.max_iters},
                 {"max_halvings_per_iter", cfg.max_halvings_per_iter},
                 {"polish_depth", cfg.polish_depth},
                 {"max_restarts", cfg.max_restarts},
                 {"restart_always", cfg.restart_always},
                 {"exploit_symmetry", cfg.exploit_symmetry}};
  nlohmann::json diags = nlohmann::json::array();
  for (const auto& d : lut.diags) {
    diags.push_back({{"iterations", d.iterations},
                     {"det_relaxed", d.det_relaxed},
                     {"det_quantized", d.det_quantized},
                     {"polish_flips", d.polish_flips},
                     {"converged", d.converged}});
  }
  j["diagnostics"] = std::move(diags);
  return j.dump(2);
}

}  // namespace onebit
