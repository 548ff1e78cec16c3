#pragma once

// Self-describing entropy-coded stream:
//   "GBEC" | version u8 | coder u8 | varint m | varint n | varint payload_bits
//   | model | payload (MSB-first, zero-padded)
// Model: Huffman = varint byte length + canonical codebook bits;
//        static arithmetic = m varint frequencies; adaptive = empty.

#include <cstdint>
#include <span>
#include <vector>

namespace gbica {

enum class CoderId : uint8_t { Huffman = 0, StaticArithmetic = 1, Adaptive = 2 };

inline constexpr uint8_t kStreamVersion = 1;

struct EncodedStream {
  std::vector<uint8_t> bytes;
  uint64_t payload_bits = 0;
  uint64_t model_bytes = 0;
};

/// Model parameters come from the sample histogram (Huffman, static) or none (adaptive).
EncodedStream encode_stream(std::span<const uint32_t> samples, std::size_t m, CoderId coder);

struct DecodedStream {
  std::vector<uint32_t> samples;
  std::size_t m = 0;
  CoderId coder = CoderId::Huffman;
};

DecodedStream decode_stream(std::span<const uint8_t> bytes);

}  // namespace gbica
