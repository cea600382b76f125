#include <cmath>
#include <complex>

#include <doctest.h>

#include "onebit/airlink.hpp"
#include "support.hpp"

using namespace onebit;

TEST_SUITE("airlink") {

TEST_CASE("quantize: sign read-off") {
  const cplx q = quantize(cplx{0.3, -0.2});
  CHECK(q.real() == kInvSqrt2);
  CHECK(q.imag() == -kInvSqrt2);
}

TEST_CASE("quantize: sign(0) = 1") {
  const cplx q = quantize(cplx{0.0, 0.0});
  CHECK(q.real() == kInvSqrt2);
  CHECK(q.imag() == kInvSqrt2);
  // negative zero behaves like zero
  const cplx qn = quantize(cplx{-0.0, -0.0});
  CHECK(qn.real() == kInvSqrt2);
  CHECK(qn.imag() == kInvSqrt2);
}

TEST_CASE("quantize: idempotent on O^N, magnitudes exact") {
  SeededRng rng(3, 100);
  const CVec v = quantize(testsupport::random_cvec(rng, 32, 2.0));
  const CVec w = quantize(v);
  for (std::size_t i = 0; i < v.size(); ++i) {
    CHECK(w[i] == v[i]);
    CHECK(std::abs(v[i].real()) == kInvSqrt2);
    CHECK(std::abs(v[i].imag()) == kInvSqrt2);
  }
}

TEST_CASE("symbol_from_index: stated encodings") {
  const SymbolVector s0 = symbol_from_index(0, 2);
  CHECK(s0.symbols[0] == cplx{kInvSqrt2, kInvSqrt2});
  CHECK(s0.symbols[1] == cplx{kInvSqrt2, kInvSqrt2});

  const SymbolVector s3 = symbol_from_index(3, 1);
  CHECK(s3.symbols[0] == cplx{-kInvSqrt2, -kInvSqrt2});
}

TEST_CASE("symbol_from_index: exhaustive round-trip at M = 4") {
  for (std::uint64_t u = 0; u < 256; ++u) {
    const SymbolVector s = symbol_from_index(u, 4);
    CHECK(s.index == u);
    CHECK(index_from_symbols(s.symbols) == u);
  }
}

TEST_CASE("symbol_from_index: rejects out-of-range indices") {
  CHECK_THROWS_AS(symbol_from_index(4, 1), IndexOutOfRange);
  CHECK_THROWS_AS(symbol_from_index(256, 4), IndexOutOfRange);
}

TEST_CASE("bit_errors: stated counts") {
  const SymbolVector a = symbol_from_index(27, 3);
  CHECK(bit_errors(a, a) == 0);

  SymbolVector neg = a;
  for (auto& s : neg.symbols) s = -s;
  neg.index = index_from_symbols(neg.symbols);
  CHECK(bit_errors(a, neg) == 6);  // 2M with all signs flipped

  const SymbolVector sent = symbol_from_index(0, 1);   // (1+j)/sqrt2
  const SymbolVector flip = symbol_from_index(1, 1);   // (1-j)/sqrt2
  CHECK(bit_errors(sent, flip) == 1);

  const SymbolVector longer = symbol_from_index(0, 2);
  CHECK_THROWS_AS(bit_errors(sent, longer), DimensionMismatch);
}

TEST_CASE("transmit_receive: noise-free fixed point at M = N = 1") {
  ComplexMatrix H(1, 1);
  H(0, 0) = 1.0;
  const auto ch = ChannelRealization::from_matrix(H, 0);
  const CVec x_q{cplx{kInvSqrt2, kInvSqrt2}};
  const SymbolVector got = transmit_receive_noiseless(ch, x_q, 1.0);
  CHECK(got.symbols[0] == cplx{kInvSqrt2, kInvSqrt2});
  CHECK(got.index == 0);
}

TEST_CASE("transmit_receive: noise-free equals Q(H x_q) at high power") {
  const auto ch = testsupport::random_channel(5, 2, 8);
  SeededRng rng(5, 200);
  const CVec x_q = quantize(testsupport::random_cvec(rng, 8, 1.0));
  const SymbolVector got = transmit_receive_noiseless(ch, x_q, 1000.0);
  const CVec expect = quantize(matvec(ch.H, x_q));
  for (std::size_t m = 0; m < 2; ++m) CHECK(got.symbols[m] == expect[m]);
}

TEST_CASE("transmit_receive: fixed seed reproduces the output") {
  const auto ch = testsupport::random_channel(6, 2, 8);
  SeededRng rng(6, 300);
  const CVec x_q = quantize(testsupport::random_cvec(rng, 8, 1.0));
  SeededRng n1(9, 1), n2(9, 1);
  const SymbolVector a = transmit_receive(ch, x_q, 4.0, n1);
  const SymbolVector b = transmit_receive(ch, x_q, 4.0, n2);
  CHECK(a.index == b.index);
}

TEST_CASE("per-bit flip rate matches the Gaussian tail") {
  // M = N = 1, H = [1], x_q = (1+j)/sqrt2: the received mean of the real
  // branch is sqrt(etx)/sqrt(2); with N(0, 1/2) real noise the flip
  // probability of the real bit is Phi(-sqrt(2) * margin) = erfc(margin)/2.
  ComplexMatrix H(1, 1);
  H(0, 0) = 1.0;
  const auto ch = ChannelRealization::from_matrix(H, 0);
  const CVec x_q{cplx{kInvSqrt2, kInvSqrt2}};
  const SymbolVector sent = symbol_from_index(0, 1);
  const double etx = 1.62;
  const double margin = std::sqrt(etx) * kInvSqrt2;
  const double p_theory = 0.5 * std::erfc(margin);

  const int draws = 100000;
  SeededRng noise(31, 17);
  int flips = 0;
  for (int i = 0; i < draws; ++i) {
    const SymbolVector got = transmit_receive(ch, x_q, etx, noise);
    flips += (got.symbols[0].real() < 0.0) != (sent.symbols[0].real() < 0.0);
  }
  const double p_hat = static_cast<double>(flips) / draws;
  const double se = std::sqrt(p_theory * (1.0 - p_theory) / draws);
  CHECK(std::abs(p_hat - p_theory) <= 3.0 * se);
}

}  // TEST_SUITE
