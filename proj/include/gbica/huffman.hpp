#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gbica/bitstream.hpp"

namespace gbica {

inline constexpr int kMaxCodeLength = 63;

/// Per-symbol code; length 0 means the symbol has no codeword.
struct HuffmanCodebook {
  std::vector<uint8_t> lengths;
  std::vector<uint64_t> codes;

  std::size_t size() const { return lengths.size(); }
  /// Σ 2^-len over coded symbols.
  double kraft_sum() const;
  bool prefix_free() const;
  /// Σ w_i len_i / Σ w_i.
  double average_length(std::span<const double> weights) const;
};

/// Optimal prefix code over positive weights. A lone positive symbol gets length 1.
HuffmanCodebook huffman_build(std::span<const double> weights);
HuffmanCodebook huffman_build_counts(std::span<const uint64_t> counts);

/// Lengths histogram plus symbols in (length, symbol index) order.
struct CanonicalCodebook {
  std::size_t m = 0;
  int max_length = 0;
  std::vector<uint32_t> count_per_length;  // index 1..max_length
  std::vector<uint32_t> symbols;

  HuffmanCodebook to_codebook() const;
  bool operator==(const CanonicalCodebook&) const = default;
};

/// Keeps the lengths, reassigns codes as consecutive binary numbers.
CanonicalCodebook canonicalize(const HuffmanCodebook& codebook);

/// Bit-level: gamma(max_length + 1), gamma(count + 1) per length, then
/// ⌈log2 m⌉-bit symbol ids. The alphabet size travels out of band.
BitWriter serialize_codebook(const CanonicalCodebook& canonical);
CanonicalCodebook deserialize_codebook(BitReader& in, std::size_t m);

/// Size of the explicit table (id, 8-bit length, code bits per coded symbol).
uint64_t explicit_table_bits(const HuffmanCodebook& codebook);

void prefix_encode(std::span<const uint32_t> samples, const HuffmanCodebook& codebook, BitWriter& out);
std::vector<uint32_t> prefix_decode(BitReader& in, const HuffmanCodebook& codebook, std::size_t n);

}  // namespace gbica
