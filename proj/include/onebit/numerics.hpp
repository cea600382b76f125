#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "onebit/errors.hpp"

namespace onebit {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;
using RVec = std::vector<double>;

/// Dense complex matrix, row-major. Sizes in this project stay tiny
/// (users M <= 8, antennas N <= 64), so no blocking or sparsity anywhere.
struct ComplexMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  CVec a;  // rows*cols entries, row-major

  ComplexMatrix() = default;
  ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

  cplx& operator()(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

  static ComplexMatrix identity(std::size_t n);
};

/// Dense real matrix, row-major.
struct RealMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  RVec a;

  RealMatrix() = default;
  RealMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

  double& operator()(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  const double& operator()(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

/// Named sub-streams of the master seed. Every random quantity in an
/// experiment is drawn from hash(channel_index, purpose), so results do not
/// depend on evaluation order or thread count.
enum class StreamPurpose : std::uint64_t {
  Channel = 1,
  Symbols = 2,
  Noise = 3,
};

/// Stream id for (channel_index, purpose, attempt). `attempt` > 0 is used
/// when a degenerate channel draw has to be replaced.
std::uint64_t derive_stream(std::uint64_t channel_index, StreamPurpose purpose,
                            std::uint64_t attempt = 0);

/// Deterministic counter-style generator (SplitMix64 core). Identical
/// (master_seed, stream_id) pairs produce identical sequences; the Gaussian
/// path avoids std::normal_distribution, whose output is not portable.
class SeededRng {
 public:
  SeededRng(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64();
  /// Uniform in [0, 1), 53-bit resolution.
  double uniform01();
  /// Standard normal via the Marsaglia polar method.
  double gaussian();
  /// Circularly-symmetric complex Gaussian, E|z|^2 = variance.
  cplx cgaussian(double variance);

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// rows x cols matrix of i.i.d. CN(0, variance) entries; real and imaginary
/// parts each carry variance/2.
ComplexMatrix sample_complex_gaussian(SeededRng& rng, std::size_t rows, std::size_t cols,
                                      double variance);

/// Solves A X = B for Hermitian positive definite A via Cholesky (no explicit
/// inverse). Throws NotPositiveDefinite when a pivot is not strictly positive.
ComplexMatrix hermitian_solve(const ComplexMatrix& A, const ComplexMatrix& B);

/// Real stacking blocks of H: C = [Re H, -Im H], D = [Im H, Re H], both
/// M x 2N, so that Re(Hx) = C x' and Im(Hx) = D x' with x' = [Re x; Im x].
std::pair<RealMatrix, RealMatrix> stacked_blocks(const ComplexMatrix& H);

/// Diagonal of adj(diag(p)): a_m = prod_{k != m} p_k. Computed with
/// prefix/suffix products, so zero entries need no special casing.
RVec diag_adjugate(const RVec& p);

// -- small dense helpers ----------------------------------------------------

ComplexMatrix matmul(const ComplexMatrix& A, const ComplexMatrix& B);
ComplexMatrix adjoint(const ComplexMatrix& A);
/// A^H A (cols x cols).
ComplexMatrix gram(const ComplexMatrix& A);
/// A A^H (rows x rows).
ComplexMatrix gram_rows(const ComplexMatrix& A);
CVec matvec(const ComplexMatrix& A, const CVec& x);
double fro_norm_sq(const ComplexMatrix& A);

/// x' = [Re x; Im x].
RVec stack(const CVec& x);
CVec unstack(const RVec& xp);

}  // namespace onebit
