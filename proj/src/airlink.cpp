#include "onebit/airlink.hpp"

#include <cmath>
#include <string>

namespace onebit {

namespace {

double sign1(double v) { return v < 0.0 ? -1.0 : 1.0; }  // sign(0) = 1

}  // namespace

ChannelRealization ChannelRealization::from_matrix(ComplexMatrix H, std::uint64_t id) {
  ChannelRealization ch;
  auto [C, D] = stacked_blocks(H);
  ch.H = std::move(H);
  ch.C = std::move(C);
  ch.D = std::move(D);
  ch.id = id;
  return ch;
}

cplx quantize(cplx v) { return {sign1(v.real()) * kInvSqrt2, sign1(v.imag()) * kInvSqrt2}; }

CVec quantize(const CVec& v) {
  CVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = quantize(v[i]);
  return out;
}

SymbolVector symbol_from_index(std::uint64_t u, std::size_t users) {
  if (users >= 32 || u >= (1ULL << (2 * users)))
    throw IndexOutOfRange("symbol_from_index: index " + std::to_string(u) +
                          " out of range for " + std::to_string(users) + " users");
  SymbolVector s;
  s.index = u;
  s.symbols.resize(users);
  for (std::size_t m = 0; m < users; ++m) {
    const auto code = (u >> (2 * m)) & 3ULL;
    const double re = (code & 2ULL) ? -kInvSqrt2 : kInvSqrt2;
    const double im = (code & 1ULL) ? -kInvSqrt2 : kInvSqrt2;
    s.symbols[m] = {re, im};
  }
  return s;
}

std::uint64_t index_from_symbols(const CVec& symbols) {
  std::uint64_t u = 0;
  for (std::size_t m = 0; m < symbols.size(); ++m) {
    const std::uint64_t code =
        (symbols[m].real() < 0.0 ? 2ULL : 0ULL) | (symbols[m].imag() < 0.0 ? 1ULL : 0ULL);
    u |= code << (2 * m);
  }
  return u;
}

int bit_errors(const SymbolVector& sent, const SymbolVector& detected) {
  if (sent.users() != detected.users())
    throw DimensionMismatch("bit_errors: vectors of different lengths");
  int errors = 0;
  for (std::size_t m = 0; m < sent.users(); ++m) {
    errors += (sent.symbols[m].real() < 0.0) != (detected.symbols[m].real() < 0.0);
    errors += (sent.symbols[m].imag() < 0.0) != (detected.symbols[m].imag() < 0.0);
  }
  return errors;
}

SymbolVector detect(const ChannelRealization& ch, const CVec& x_tx, SeededRng* rng) {
  CVec r = matvec(ch.H, x_tx);
  if (rng != nullptr) {
    for (auto& rm : r) rm += rng->cgaussian(NoiseModel::complex_variance);
  }
  SymbolVector out;
  out.symbols = quantize(r);
  out.index = index_from_symbols(out.symbols);
  return out;
}

SymbolVector transmit_receive(const ChannelRealization& ch, const CVec& x_q, double etx,
                              SeededRng& rng) {
  const double scale = std::sqrt(etx / static_cast<double>(ch.antennas()));
  CVec x(x_q.size());
  for (std::size_t i = 0; i < x_q.size(); ++i) x[i] = scale * x_q[i];
  return detect(ch, x, &rng);
}

SymbolVector transmit_receive_noiseless(const ChannelRealization& ch, const CVec& x_q,
                                        double etx) {
  const double scale = std::sqrt(etx / static_cast<double>(ch.antennas()));
  CVec x(x_q.size());
  for (std::size_t i = 0; i < x_q.size(); ++i) x[i] = scale * x_q[i];
  return detect(ch, x, nullptr);
}

}  // namespace onebit
