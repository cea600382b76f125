#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "onebit/airlink.hpp"
#include "onebit/numerics.hpp"
#include "onebit/precoders.hpp"

namespace onebit {

/// Stacked transmit vector x' = [Re x; Im x], length 2N, every entry inside
/// the box [-1/sqrt(2), 1/sqrt(2)].
struct StackedTransmit {
  RVec v;

  std::size_t antennas() const { return v.size() / 2; }
};

/// Per-user margin scores for one (H, x', s) triple:
///   a_m = (Cx')_m s_Rm + (Dx')_m s_Im   (= Re{r_m s_m^*}, r = Hx)
///   b_m = (Cx')_m s_Im - (Dx')_m s_Rm   (= -Im{r_m s_m^*})
///   p_m = a_m^2 - b_m^2                 (= Re{(r_m s_m^*)^2})
/// and det_p = prod_m p_m, the quantity the solver maximizes.
struct ObjectiveState {
  RVec a, b, p;
  double det_p = 0.0;
};

/// Gradient projection settings. `mu0` is dimensionless: the effective
/// initial step is mu0 / ||H||_F^2, which keeps first-step sizes
/// commensurate across channel draws.
struct SolverConfig {
  double mu0 = 0.1;
  double epsilon = 1e-6;           // relative-improvement stop rule
  int max_iters = 500;
  int max_halvings_per_iter = 30;  // step halvings within one iteration
  int polish_depth = 2;            // 0 off, 1 single sign flips, 2 also pairs
  int max_restarts = 8;            // extra seeded solves when rounding collapses
  bool restart_always = false;     // take the restarts unconditionally
  bool exploit_symmetry = false;   // solve 4^M/4 problems, rotate the rest
  bool record_trace = false;       // keep the accepted det(P) sequence

  bool operator==(const SolverConfig&) const = default;
};

struct SolveDiagnostics {
  int iterations = 0;
  double det_relaxed = 0.0;    // det(P) at the relaxed optimum
  double det_quantized = 0.0;  // det(P) of the stored 1-bit vector
  int polish_flips = 0;        // sign flips applied after quantization
  bool converged = false;
  RVec det_trace;              // init + accepted values, with record_trace
};

struct SolveResult {
  StackedTransmit x;
  SolveDiagnostics diag;
};

/// Per-channel mapping table: entry u holds the solved-and-quantized transmit
/// vector for input index u, u in [0, 4^M).
struct LookupTable {
  std::uint64_t channel_id = 0;
  std::size_t users = 0;
  std::size_t antennas = 0;
  std::vector<CVec> entries;             // 4^M vectors in O^N
  std::vector<SolveDiagnostics> diags;   // one per entry

  std::uint64_t size() const { return entries.size(); }
  const CVec& entry(std::uint64_t u) const { return entries.at(u); }
};

ObjectiveState objective(const ChannelRealization& ch, const StackedTransmit& x,
                         const SymbolVector& s);

/// d det(P)/d x' = 2 C^T adj(P)(A s_R - B s_I) + 2 D^T adj(P)(A s_I + B s_R),
/// with adj(P) the diagonal adjugate of the diagonal matrix P.
RVec gradient(const ChannelRealization& ch, const StackedTransmit& x, const SymbolVector& s);

/// Componentwise clamp to [-1/sqrt(2), 1/sqrt(2)].
StackedTransmit project_box(RVec x);

/// Gradient projection ascent on det(P) over the box, started from the
/// clipped zero-forcing point [Re Ws; Im Ws]. Steps that decrease det(P) or
/// make any a_m or p_m negative are reverted and retried with a halved step,
/// so det(P) is non-decreasing along accepted iterates. Stops when the
/// relative improvement drops below epsilon (absolute fallback while
/// det(P) <= 0), when the step size collapses, or at max_iters.
SolveResult solve_pm(const ChannelRealization& ch, const SymbolVector& s,
                     const SolverConfig& cfg);
/// Same, reusing an externally computed ZF precoder (one per channel).
SolveResult solve_pm(const ChannelRealization& ch, const ComplexMatrix& W_zf,
                     const SymbolVector& s, const SolverConfig& cfg);

/// Greedy sign-flip ascent on det(P) over O^N, starting from a quantized
/// vector. Flips (single coordinates, then coordinate pairs for depth 2) are
/// kept only when det(P) strictly increases and every user stays in its
/// correct quadrant (a_m >= 0, p_m >= 0). Closes the gap the box relaxation
/// leaves at small N; at N >> M most entries are already flip-optimal.
CVec polish_quantized(const ChannelRealization& ch, CVec x_q, const SymbolVector& s,
                      int depth, int* flips = nullptr);

/// Full per-input pipeline, exactly what build_lut stores for one entry:
/// solve_pm from the ZF start, joint sign search over the coordinates the
/// relaxed optimum left inside the box (independent rounding is only
/// ambiguous there), then polish. When the rounded result still loses more
/// than half the relaxed det(P) or leaves a user in a wrong quadrant, up to
/// max_restarts further solves from seeded random starts are taken and the
/// lexicographically best (valid users, det) candidate wins; restart
/// iterations are included in the reported count.
CVec pm_transmit_vector(const ChannelRealization& ch, const ComplexMatrix& W_zf,
                        const SymbolVector& s, const SolverConfig& cfg,
                        SolveDiagnostics* diag = nullptr);

/// Solves all 4^M inputs for one channel. With cfg.exploit_symmetry only one
/// representative per phase orbit is solved; the other three entries are the
/// representative rotated by j, -1, -j (det(P) is exactly invariant under the
/// joint rotation of x and s). Entries are independent, so `threads` > 1
/// splits them without affecting the result.
LookupTable build_lut(const ChannelRealization& ch, const SolverConfig& cfg, int threads = 1);

/// Index of the input vector j*s(u) under the bit encoding of SymbolVector.
std::uint64_t rotate_index_j(std::uint64_t u, std::size_t users);

// -- portable export/import ---------------------------------------------------
// CSV columns: channel_id,index,antenna,re,im with 17 significant digits.
void write_lut_csv(const LookupTable& lut, std::ostream& os);
LookupTable read_lut_csv(std::istream& is);
/// JSON manifest with the solver config and per-entry diagnostics.
std::string lut_manifest_json(const LookupTable& lut, const SolverConfig& cfg,
                              const std::string& version);

}  // namespace onebit
