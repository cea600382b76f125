#include "onebit/precoders.hpp"

#include <cmath>

namespace onebit {

PrecoderMatrix zf(const ChannelRealization& ch) {
  try {
    const ComplexMatrix G = gram_rows(ch.H);  // H H^H, M x M
    const ComplexMatrix Ginv = hermitian_solve(G, ComplexMatrix::identity(ch.users()));
    return {matmul(adjoint(ch.H), Ginv), PrecoderKind::ZF, {}};
  } catch (const NotPositiveDefinite&) {
    throw RankDeficient("zf: H H^H is not positive definite");
  }
}

PrecoderMatrix wf(const ChannelRealization& ch, double etx, double sigma_s2) {
  const double c = static_cast<double>(ch.users()) / etx;
  ComplexMatrix A = gram_rows(ch.H);  // H H^H + c I_M
  for (std::size_t i = 0; i < A.rows; ++i) A(i, i) += c;
  const ComplexMatrix K = matmul(adjoint(ch.H), hermitian_solve(A, ComplexMatrix::identity(ch.users())));
  // tr((H^H H + c I)^-2 H^H H) = ||K||_F^2 since K = (H^H H + c I)^-1 H^H.
  const double f = std::sqrt(sigma_s2 / etx * fro_norm_sq(K));
  PrecoderMatrix p{K, PrecoderKind::WF, {}};
  for (auto& w : p.W.a) w /= f;
  return p;
}

PrecoderMatrix wfq(const ChannelRealization& ch, double etx, double sigma_s2) {
  const std::size_t n = ch.antennas();
  const double c = static_cast<double>(ch.users()) / etx;
  ComplexMatrix J = gram(ch.H);  // H^H H, N x N
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j)
        J(i, i) += c;  // diagonal untouched by the nondiag subtraction
      else
        J(i, j) *= 1.0 - kRhoQ;
    }
  }
  ComplexMatrix K;
  try {
    K = hermitian_solve(J, adjoint(ch.H));
  } catch (const NotPositiveDefinite&) {
    throw SingularSystem("wfq: regularized system is numerically singular");
  }
  const double f = std::sqrt(sigma_s2 * (1.0 - kRhoQ) / etx * fro_norm_sq(K));
  PrecoderMatrix p{K, PrecoderKind::WFQ, {}};
  for (auto& w : p.W.a) w /= f;

  p.analog_diag.resize(n);
  const double g = std::sqrt(2.0 / std::numbers::pi);
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < p.W.cols; ++j) row += std::norm(p.W(i, j));
    p.analog_diag[i] = g * std::sqrt(row);
  }
  return p;
}

CVec apply_linear(const PrecoderMatrix& p, const SymbolVector& s, double etx) {
  CVec x = quantize(matvec(p.W, s.symbols));
  if (p.kind == PrecoderKind::WFQ) {
    // |x_n| = 1 for every n, so the radiated power sum_n d_n^2 is the same
    // for all 4^M inputs; rescale it to exactly etx.
    double power = 0.0;
    for (const double d : p.analog_diag) power += d * d;
    const double gamma = std::sqrt(etx / power);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] *= gamma * p.analog_diag[i];
  } else {
    const double scale = std::sqrt(etx / static_cast<double>(p.W.rows));
    for (auto& xi : x) xi *= scale;
  }
  return x;
}

CVec apply_linear_unquantized(const PrecoderMatrix& p, const SymbolVector& s) {
  return matvec(p.W, s.symbols);
}

}  // namespace onebit
