#pragma once

#include <numbers>

#include "onebit/airlink.hpp"
#include "onebit/numerics.hpp"

namespace onebit {

/// Quantizer distortion factor of the linearized covariance model.
inline constexpr double kRhoQ = 1.0 - 2.0 / std::numbers::pi;

enum class PrecoderKind { ZF, WF, WFQ };

/// Linear precoder W (N x M). WFQ additionally carries the analog diagonal
/// gain stage (one positive real gain per antenna).
struct PrecoderMatrix {
  ComplexMatrix W;
  PrecoderKind kind = PrecoderKind::ZF;
  RVec analog_diag;  // WFQ only, length N, strictly positive
};

/// Zero-forcing W = H^H (H H^H)^-1; throws RankDeficient when H H^H is not
/// positive definite.
PrecoderMatrix zf(const ChannelRealization& ch);

/// MMSE (Wiener filter) precoder
///   W = (1/f) (H^H H + (M/etx) I_N)^-1 H^H,
///   f  = sqrt(sigma_s2/etx * tr((H^H H + (M/etx) I_N)^-2 H^H H)),
/// which forces sigma_s2 * tr(W W^H) = etx. The N x N inverse is evaluated
/// through the push-through identity as H^H (H H^H + (M/etx) I_M)^-1.
PrecoderMatrix wf(const ChannelRealization& ch, double etx, double sigma_s2);

/// Quantization-aware MMSE precoder
///   W = (1/f) (H^H H - rho_q nondiag(H^H H) + (M/etx) I_N)^-1 H^H,
///   f  = sqrt(sigma_s2 (1-rho_q)/etx * tr((...)^-2 H^H H)),
/// with rho_q = 1 - 2/pi, plus the analog stage
///   analog_diag = sqrt(2/pi) * diag(W W^H)^(1/2).
/// Throws SingularSystem when the regularized matrix cannot be factorized.
PrecoderMatrix wfq(const ChannelRealization& ch, double etx, double sigma_s2);

/// Full antenna signal for one input vector:
///   WF/ZF : sqrt(etx/N) * Q(W s)          (equal power per antenna)
///   WFQ   : analog_diag .* Q(W s), rescaled so the total transmit power is
///           exactly etx (every Q output has unit magnitude, so per-input
///           power is constant and the rescale is input independent).
CVec apply_linear(const PrecoderMatrix& p, const SymbolVector& s, double etx);

/// Transmitter-side ideal reference: x = W s with no quantization and no
/// per-antenna rescale (power etx holds in expectation over s).
CVec apply_linear_unquantized(const PrecoderMatrix& p, const SymbolVector& s);

}  // namespace onebit
