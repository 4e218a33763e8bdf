#include "cliqueloop/descriptor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "cliqueloop/error.hpp"

namespace cliqueloop {

namespace {

// Descriptor bit i lives in byte i/8 at mask 0x80 >> (i%8). Internally the
// bit is stored at word i/64, position i%64.
int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

BinaryDescriptor::BinaryDescriptor(std::size_t bits)
    : bits_(bits), words_((bits + 63) / 64, 0) {
  if (bits == 0 || bits % 8 != 0) {
    throw Error(ErrorCode::LengthMismatch,
                "descriptor length must be a positive multiple of 8, got " +
                    std::to_string(bits));
  }
}

BinaryDescriptor BinaryDescriptor::from_hex(std::string_view hex) {
  if (hex.empty() || hex.size() % 2 != 0) {
    throw Error(ErrorCode::ParseError,
                "hex descriptor must have an even, non-zero number of digits");
  }
  BinaryDescriptor d(hex.size() * 4);
  for (std::size_t n = 0; n < hex.size(); ++n) {
    const int nibble = hex_value(hex[n]);
    if (nibble < 0) {
      throw Error(ErrorCode::ParseError,
                  "invalid hex digit '" + std::string(1, hex[n]) + "'");
    }
    for (int b = 0; b < 4; ++b) {
      if (nibble & (8 >> b)) d.set(n * 4 + b);
    }
  }
  return d;
}

BinaryDescriptor BinaryDescriptor::from_bits(std::span<const bool> bits) {
  BinaryDescriptor d(((bits.size() + 7) / 8) * 8);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) d.set(i);
  }
  return d;
}

void BinaryDescriptor::set(std::size_t i, bool value) {
  const std::uint64_t mask = std::uint64_t{1} << (i & 63);
  if (value) {
    words_[i >> 6] |= mask;
  } else {
    words_[i >> 6] &= ~mask;
  }
}

BinaryDescriptor BinaryDescriptor::complement() const {
  BinaryDescriptor out(*this);
  for (auto& w : out.words_) w = ~w;
  if (const std::size_t tail = bits_ & 63; tail != 0) {
    out.words_.back() &= (std::uint64_t{1} << tail) - 1;
  }
  return out;
}

std::string BinaryDescriptor::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(bits_ / 4, '0');
  for (std::size_t n = 0; n < out.size(); ++n) {
    int nibble = 0;
    for (int b = 0; b < 4; ++b) {
      if (test(n * 4 + b)) nibble |= 8 >> b;
    }
    out[n] = kDigits[nibble];
  }
  return out;
}

int hamming(const BinaryDescriptor& a, const BinaryDescriptor& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                    " bits");
  }
  const auto wa = a.words();
  const auto wb = b.words();
  int count = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) {
    count += std::popcount(wa[i] ^ wb[i]);
  }
  return count;
}

BinaryDescriptor binarize_median(std::span<const double> v) {
  if (v.empty()) {
    throw Error(ErrorCode::EmptyVector, "cannot binarize an empty vector");
  }
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw Error(ErrorCode::NonFiniteValue, "descriptor value is not finite");
    }
  }
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double median = n % 2 == 1
                            ? sorted[n / 2]
                            : sorted[n / 2 - 1] + (sorted[n / 2] - sorted[n / 2 - 1]) / 2.0;

  BinaryDescriptor d(((n + 7) / 8) * 8);
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] > median) d.set(i);
  }
  return d;
}

}  // namespace cliqueloop
