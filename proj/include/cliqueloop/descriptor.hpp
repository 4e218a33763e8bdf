#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cliqueloop {

/// Fixed-width bit string. Bit 0 is the most significant bit of the first
/// byte, so the hex form reads left to right in bit order.
class BinaryDescriptor {
 public:
  /// All-zero descriptor; `bits` must be a positive multiple of 8.
  explicit BinaryDescriptor(std::size_t bits);

  static BinaryDescriptor from_hex(std::string_view hex);
  /// One entry per bit; length is padded up to a byte multiple with zeros.
  static BinaryDescriptor from_bits(std::span<const bool> bits);

  std::size_t size() const { return bits_; }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool value = true);
  BinaryDescriptor complement() const;

  std::string to_hex() const;
  std::span<const std::uint64_t> words() const { return words_; }

  friend bool operator==(const BinaryDescriptor&, const BinaryDescriptor&) = default;

 private:
  std::size_t bits_;
  std::vector<std::uint64_t> words_;
};

/// Number of differing bit positions. Throws LengthMismatch.
int hamming(const BinaryDescriptor& a, const BinaryDescriptor& b);

/// Bit i is set iff v[i] > median(v) (mean of the two middle values for even
/// lengths). Throws EmptyVector or NonFiniteValue.
BinaryDescriptor binarize_median(std::span<const double> v);

}  // namespace cliqueloop
