#pragma once

#include <cstdint>

#include "onebit/numerics.hpp"

namespace onebit {

/// 1/sqrt(2): coordinate magnitude of every QPSK point and the box bound.
inline constexpr double kInvSqrt2 = 0.70710678118654752440;

/// AWG receiver noise, fixed unit covariance per complex dimension
/// (C_eta = I_M), i.e. variance 1/2 per real dimension.
struct NoiseModel {
  static constexpr double complex_variance = 1.0;
  static constexpr double per_real_variance = 0.5;
};

/// QPSK data vector for the M users plus its table index in [0, 4^M).
///
/// Encoding: per user, code(s) = 2*bit(Re s) + bit(Im s) with bit(+) = 0 and
/// bit(-) = 1; index = sum_m 4^m * code(s_m). Bit errors are counted on the
/// Re/Im sign pairs, not on index distance.
struct SymbolVector {
  CVec symbols;          // entries in {(+-1 +- j)/sqrt(2)}
  std::uint64_t index = 0;

  std::size_t users() const { return symbols.size(); }
};

/// Channel draw H (M x N) with its cached stacking blocks C, D.
struct ChannelRealization {
  ComplexMatrix H;
  RealMatrix C, D;
  std::uint64_t id = 0;

  std::size_t users() const { return H.rows; }
  std::size_t antennas() const { return H.cols; }

  static ChannelRealization from_matrix(ComplexMatrix H, std::uint64_t id = 0);
};

/// Component-wise 1-bit quantizer Q(x) = (sign(Re x) + j sign(Im x))/sqrt(2),
/// with sign(0) = 1.
cplx quantize(cplx v);
CVec quantize(const CVec& v);

SymbolVector symbol_from_index(std::uint64_t u, std::size_t users);
std::uint64_t index_from_symbols(const CVec& symbols);

/// Number of sign mismatches over both quadratures; range [0, 2M].
int bit_errors(const SymbolVector& sent, const SymbolVector& detected);

/// Receiver front end: s_hat = Q(H x_tx + eta) for an already-scaled antenna
/// signal x_tx. Pass rng = nullptr for the noise-free evaluation path.
SymbolVector detect(const ChannelRealization& ch, const CVec& x_tx, SeededRng* rng);

/// s_hat = Q(sqrt(etx/N) H x_q + eta) for a 1-bit antenna vector x_q.
SymbolVector transmit_receive(const ChannelRealization& ch, const CVec& x_q, double etx,
                              SeededRng& rng);
SymbolVector transmit_receive_noiseless(const ChannelRealization& ch, const CVec& x_q,
                                        double etx);

}  // namespace onebit
