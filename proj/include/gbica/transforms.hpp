#pragma once

// Invertible relabelings of a 2^d-symbol alphabet.

#include <cstdint>
#include <span>
#include <vector>

#include "gbica/gf2.hpp"
#include "gbica/prob_model.hpp"

namespace gbica {

enum class TransformKind : uint8_t { Explicit = 0, Order = 1, BlockOrder = 2, Linear = 3 };

class PermutationTransform {
 public:
  PermutationTransform() = default;

  static PermutationTransform identity(std::size_t m);

  /// table[x] = output symbol for input symbol x. Throws unless a bijection.
  static PermutationTransform from_table(std::vector<uint32_t> table);

  /// Maps sorted_symbols[i] to i. `zero_prefix` leading entries carry zero mass.
  static PermutationTransform from_ranking(std::vector<uint32_t> sorted_symbols, std::size_t zero_prefix);

  /// Per-block rankings: block_sorted[v][i] is the local index ranked i in block v.
  static PermutationTransform from_block_ranking(int b, std::vector<std::vector<uint32_t>> block_sorted,
                                                 std::vector<std::size_t> zero_prefix);

  static PermutationTransform linear(const BinaryMatrix& w);

  TransformKind kind() const { return kind_; }
  std::size_t size() const { return table_.size(); }
  const std::vector<uint32_t>& table() const { return table_; }
  uint32_t map(uint32_t x) const { return table_[x]; }

  /// Block log-size for BlockOrder transforms.
  int block_bits() const { return block_bits_; }
  const BinaryMatrix& matrix() const { return matrix_; }

  /// Symbols in ascending rank (Order) or per block (BlockOrder).
  const std::vector<std::vector<uint32_t>>& rankings() const { return rankings_; }
  const std::vector<std::size_t>& zero_prefix() const { return zero_prefix_; }

  PermutationTransform inverse() const;

  /// q[table[x]] = p[x].
  JointDistribution apply(const JointDistribution& dist) const;

  std::vector<uint32_t> apply(std::span<const uint32_t> samples) const;

  /// Binary descriptor: tag byte then payload, lengths little-endian.
  std::vector<uint8_t> serialize() const;
  static PermutationTransform deserialize(std::span<const uint8_t> bytes, std::size_t* consumed = nullptr);

  bool operator==(const PermutationTransform& o) const { return table_ == o.table_; }

 private:
  TransformKind kind_ = TransformKind::Explicit;
  std::vector<uint32_t> table_;
  int block_bits_ = 0;
  BinaryMatrix matrix_;
  std::vector<std::vector<uint32_t>> rankings_;
  std::vector<std::size_t> zero_prefix_;
};

/// Ascending sort of probabilities, ties by symbol index; i-th smallest -> symbol i.
PermutationTransform order_permutation(const JointDistribution& dist);

/// Same from raw weights (counts or probabilities), any length.
PermutationTransform order_permutation(std::span<const double> weights);

/// Order permutation inside each contiguous block of 2^b symbols. 1 <= b <= d.
PermutationTransform block_order_permutation(const JointDistribution& dist, int b);

/// Σ_j H(Y_j) − H(X) for Y = g(X).
double cost(const JointDistribution& dist, const PermutationTransform& t);

/// Cost with no transform: Σ_j H(X_j) − H(X).
double total_correlation(const JointDistribution& dist);

}  // namespace gbica
