#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gbica/common.hpp"

namespace gbica {

/// MSB-first bit writer; the final partial byte is zero-padded.
class BitWriter {
 public:
  void put_bit(unsigned bit);
  /// Writes the low `width` bits of value, most significant first. width <= 64.
  void put_bits(uint64_t value, int width);
  /// Elias-gamma code of v >= 1.
  void put_gamma(uint64_t v);
  void append(const BitWriter& other);

  uint64_t bit_length() const { return bits_; }
  const std::vector<uint8_t>& bytes() const { return bytes_; }
  std::vector<uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<uint8_t> bytes_;
  uint64_t bits_ = 0;
};

/// Reads `bit_limit` bits from a byte span. Reading past the limit throws
/// DecodeError unless zero padding is enabled.
class BitReader {
 public:
  BitReader(std::span<const uint8_t> bytes, uint64_t bit_limit, bool zero_pad = false);
  explicit BitReader(std::span<const uint8_t> bytes) : BitReader(bytes, bytes.size() * 8) {}

  unsigned get_bit();
  uint64_t get_bits(int width);
  uint64_t get_gamma();

  uint64_t position() const { return pos_; }
  uint64_t limit() const { return limit_; }
  bool exhausted() const { return pos_ >= limit_; }

 private:
  std::span<const uint8_t> bytes_;
  uint64_t limit_;
  uint64_t pos_ = 0;
  bool zero_pad_;
};

// Byte-level LEB128 varints.
void put_varint(std::vector<uint8_t>& out, uint64_t v);
uint64_t get_varint(std::span<const uint8_t> in, std::size_t& pos);

}  // namespace gbica
