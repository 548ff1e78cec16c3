#include "gbica/bitstream.hpp"

#include <stdexcept>

namespace gbica {

void BitWriter::put_bit(unsigned bit) {
  if ((bits_ & 7) == 0) bytes_.push_back(0);
  if (bit) bytes_.back() |= static_cast<uint8_t>(0x80U >> (bits_ & 7));
  ++bits_;
}

void BitWriter::put_bits(uint64_t value, int width) {
  if (width < 0 || width > 64) throw std::invalid_argument("put_bits: width must be in [0,64]");
  for (int i = width - 1; i >= 0; --i) put_bit(static_cast<unsigned>((value >> i) & 1U));
}

void BitWriter::put_gamma(uint64_t v) {
  if (v == 0) throw std::invalid_argument("Elias gamma requires v >= 1");
  int n = 63 - __builtin_clzll(v);
  for (int i = 0; i < n; ++i) put_bit(0);
  put_bits(v, n + 1);
}

void BitWriter::append(const BitWriter& other) {
  for (uint64_t i = 0; i < other.bits_; ++i) put_bit((other.bytes_[i >> 3] >> (7 - (i & 7))) & 1U);
}

BitReader::BitReader(std::span<const uint8_t> bytes, uint64_t bit_limit, bool zero_pad)
    : bytes_(bytes), limit_(bit_limit), zero_pad_(zero_pad) {
  if (bit_limit > bytes.size() * 8) throw DecodeError("bit stream shorter than its declared length");
}

unsigned BitReader::get_bit() {
  if (pos_ >= limit_) {
    if (!zero_pad_) throw DecodeError("bit stream truncated");
    ++pos_;
    return 0;
  }
  unsigned b = (bytes_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1U;
  ++pos_;
  return b;
}

uint64_t BitReader::get_bits(int width) {
  if (width < 0 || width > 64) throw std::invalid_argument("get_bits: width must be in [0,64]");
  uint64_t v = 0;
  for (int i = 0; i < width; ++i) v = (v << 1) | get_bit();
  return v;
}

uint64_t BitReader::get_gamma() {
  int n = 0;
  while (get_bit() == 0) {
    if (++n > 63) throw DecodeError("Elias gamma prefix too long");
  }
  uint64_t v = 1;
  for (int i = 0; i < n; ++i) v = (v << 1) | get_bit();
  return v;
}

void put_varint(std::vector<uint8_t>& out, uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<uint8_t>(v | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<uint8_t>(v));
}

uint64_t get_varint(std::span<const uint8_t> in, std::size_t& pos) {
  uint64_t v = 0;
  for (int shift = 0; shift < 64; shift += 7) {
    if (pos >= in.size()) throw DecodeError("varint truncated");
    uint8_t b = in[pos++];
    v |= static_cast<uint64_t>(b & 0x7F) << shift;
    if (!(b & 0x80)) return v;
  }
  throw DecodeError("varint too long");
}

}  // namespace gbica
