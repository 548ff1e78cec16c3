#pragma once

#include <cstdint>
#include <vector>

namespace gbica {

/// Square matrix over GF(2), one 64-bit word per row (d <= 64).
/// Row j holds the mask of input integer bits combined into output component j.
class BinaryMatrix {
 public:
  BinaryMatrix() = default;
  explicit BinaryMatrix(int d) : d_(d), rows_(static_cast<std::size_t>(d), 0) {}
  BinaryMatrix(int d, std::vector<uint64_t> rows);

  static BinaryMatrix identity(int d);

  int dim() const { return d_; }
  uint64_t row(int j) const { return rows_[j]; }
  void set_row(int j, uint64_t mask) { rows_[j] = mask; }
  const std::vector<uint64_t>& rows() const { return rows_; }

  int rank() const;
  bool invertible() const { return rank() == d_; }

  /// y = W x: output component j (msb first) is parity(row_j & x).
  uint64_t apply(uint64_t x) const;

  bool operator==(const BinaryMatrix&) const = default;

 private:
  int d_ = 0;
  std::vector<uint64_t> rows_;
};

/// Incremental row-echelon basis; insert() reports whether the row was independent.
class Gf2Basis {
 public:
  bool insert(uint64_t v);
  bool contains(uint64_t v) const;
  int size() const { return static_cast<int>(pivots_.size()); }

 private:
  uint64_t reduce(uint64_t v) const;
  std::vector<uint64_t> pivots_;  // each with a distinct leading bit
};

inline int parity(uint64_t x) { return __builtin_parityll(x); }

}  // namespace gbica
