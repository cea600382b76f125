#include "onebit/numerics.hpp"

#include <cmath>

namespace onebit {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

// SplitMix64 output finalizer.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix I(n, n);
  for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

std::uint64_t derive_stream(std::uint64_t channel_index, StreamPurpose purpose,
                            std::uint64_t attempt) {
  std::uint64_t h = mix64(channel_index + kGamma);
  h = mix64(h ^ (static_cast<std::uint64_t>(purpose) * 0xD6E8FEB86659FD93ULL));
  h = mix64(h ^ (attempt * 0xA5A3564E4E7A8C3DULL));
  return h;
}

SeededRng::SeededRng(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed), stream_id_(stream_id) {
  state_ = mix64(master_seed + kGamma) ^ mix64(stream_id + 2 * kGamma);
}

std::uint64_t SeededRng::next_u64() {
  state_ += kGamma;
  return mix64(state_);
}

double SeededRng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SeededRng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

cplx SeededRng::cgaussian(double variance) {
  const double sigma = std::sqrt(variance / 2.0);
  const double re = gaussian();
  const double im = gaussian();
  return {sigma * re, sigma * im};
}

ComplexMatrix sample_complex_gaussian(SeededRng& rng, std::size_t rows, std::size_t cols,
                                      double variance) {
  ComplexMatrix out(rows, cols);
  for (auto& z : out.a) z = rng.cgaussian(variance);
  return out;
}

ComplexMatrix hermitian_solve(const ComplexMatrix& A, const ComplexMatrix& B) {
  const std::size_t n = A.rows;
  if (A.cols != n) throw DimensionMismatch("hermitian_solve: A must be square");
  if (B.rows != n) throw DimensionMismatch("hermitian_solve: B row count must match A");

  // In-place lower Cholesky A = L L^H.
  ComplexMatrix L = A;
  for (std::size_t j = 0; j < n; ++j) {
    double d = L(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(L(j, k));
    if (!(d > 0.0)) throw NotPositiveDefinite("hermitian_solve: pivot <= 0");
    const double ljj = std::sqrt(d);
    L(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      cplx s = L(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= L(i, k) * std::conj(L(j, k));
      L(i, j) = s / ljj;
    }
  }

  // L Y = B, then L^H X = Y.
  ComplexMatrix X = B;
  const std::size_t k = B.cols;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      cplx s = X(i, c);
      for (std::size_t j = 0; j < i; ++j) s -= L(i, j) * X(j, c);
      X(i, c) = s / L(i, i).real();
    }
    for (std::size_t ii = n; ii-- > 0;) {
      cplx s = X(ii, c);
      for (std::size_t j = ii + 1; j < n; ++j) s -= std::conj(L(j, ii)) * X(j, c);
      X(ii, c) = s / L(ii, ii).real();
    }
  }
  return X;
}

std::pair<RealMatrix, RealMatrix> stacked_blocks(const ComplexMatrix& H) {
  const std::size_t m = H.rows, n = H.cols;
  RealMatrix C(m, 2 * n), D(m, 2 * n);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const cplx h = H(r, c);
      C(r, c) = h.real();
      C(r, n + c) = -h.imag();
      D(r, c) = h.imag();
      D(r, n + c) = h.real();
    }
  }
  return {std::move(C), std::move(D)};
}

RVec diag_adjugate(const RVec& p) {
  const std::size_t m = p.size();
  RVec out(m, 1.0);
  double prefix = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    out[i] = prefix;
    prefix *= p[i];
  }
  double suffix = 1.0;
  for (std::size_t i = m; i-- > 0;) {
    out[i] *= suffix;
    suffix *= p[i];
  }
  return out;
}

ComplexMatrix matmul(const ComplexMatrix& A, const ComplexMatrix& B) {
  if (A.cols != B.rows) throw DimensionMismatch("matmul: inner dimensions differ");
  ComplexMatrix out(A.rows, B.cols);
  for (std::size_t i = 0; i < A.rows; ++i) {
    for (std::size_t k = 0; k < A.cols; ++k) {
      const cplx aik = A(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < B.cols; ++j) out(i, j) += aik * B(k, j);
    }
  }
  return out;
}

ComplexMatrix adjoint(const ComplexMatrix& A) {
  ComplexMatrix out(A.cols, A.rows);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t j = 0; j < A.cols; ++j) out(j, i) = std::conj(A(i, j));
  return out;
}

ComplexMatrix gram(const ComplexMatrix& A) {
  ComplexMatrix out(A.cols, A.cols);
  for (std::size_t i = 0; i < A.cols; ++i) {
    for (std::size_t j = 0; j < A.cols; ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < A.rows; ++k) s += std::conj(A(k, i)) * A(k, j);
      out(i, j) = s;
    }
  }
  return out;
}

ComplexMatrix gram_rows(const ComplexMatrix& A) {
  ComplexMatrix out(A.rows, A.rows);
  for (std::size_t i = 0; i < A.rows; ++i) {
    for (std::size_t j = 0; j < A.rows; ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < A.cols; ++k) s += A(i, k) * std::conj(A(j, k));
      out(i, j) = s;
    }
  }
  return out;
}

CVec matvec(const ComplexMatrix& A, const CVec& x) {
  if (A.cols != x.size()) throw DimensionMismatch("matvec: size mismatch");
  CVec y(A.rows);
  for (std::size_t i = 0; i < A.rows; ++i) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < A.cols; ++j) s += A(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

double fro_norm_sq(const ComplexMatrix& A) {
  double s = 0.0;
  for (const auto& z : A.a) s += std::norm(z);
  return s;
}

RVec stack(const CVec& x) {
  const std::size_t n = x.size();
  RVec xp(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    xp[i] = x[i].real();
    xp[n + i] = x[i].imag();
  }
  return xp;
}

CVec unstack(const RVec& xp) {
  const std::size_t n = xp.size() / 2;
  CVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = {xp[i], xp[n + i]};
  return x;
}

}  // namespace onebit
