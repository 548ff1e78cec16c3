#pragma once

// Permutation-coded streams: relabel each symbol by an order permutation,
// then code its binary components (marginal mode) or its two halves (block
// mode) with adaptive arithmetic models.

#include <cstdint>
#include <optional>
#include <string>
#include <span>
#include <vector>

#include "gbica/block_pipeline.hpp"
#include "gbica/transforms.hpp"

namespace gbica {

enum class PermScheme : uint8_t { Fixed = 0, Adaptive = 1, Window = 2, Pipeline = 3 };
enum class PermMode : uint8_t { Marginal = 0, Block = 1 };

PermScheme parse_scheme(const std::string& name);
PermMode parse_mode(const std::string& name);

struct PermCodingOptions {
  PermScheme scheme = PermScheme::Adaptive;
  PermMode mode = PermMode::Marginal;
  std::size_t window = 1;  // window length for PermScheme::Window
  /// Shared reference relabeling for PermScheme::Fixed; identity when absent.
  std::optional<PermutationTransform> reference;
  bool embed_reference = false;
  PipelineOptions pipeline;  // PermScheme::Pipeline
};

struct PermEncoded {
  std::vector<uint8_t> bytes;
  uint64_t payload_bits = 0;
  int best_iteration = 0;  // pipeline only
};

inline constexpr uint8_t kContainerVersion = 1;

/// 64-bit FNV-1a of a relabeling table, used to identify fixed references.
uint64_t reference_hash(const PermutationTransform& t);

PermEncoded permutation_encode(std::span<const uint32_t> samples, std::size_t m, const PermCodingOptions& options);

/// `reference` must match the encoder's fixed reference unless it was embedded.
std::vector<uint32_t> permutation_decode(std::span<const uint8_t> bytes,
                                         const PermutationTransform* reference = nullptr);

/// Bits of the whole-alphabet adaptive arithmetic reference that restarts its
/// coder every l symbols: ideal KT length plus 2 termination bits per window.
double windowed_arithmetic_bits(std::span<const uint32_t> samples, std::size_t m, std::size_t l);

}  // namespace gbica
