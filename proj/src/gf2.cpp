#include "gbica/gf2.hpp"

#include <stdexcept>

namespace gbica {

BinaryMatrix::BinaryMatrix(int d, std::vector<uint64_t> rows) : d_(d), rows_(std::move(rows)) {
  if (d < 0 || d > 64) throw std::invalid_argument("BinaryMatrix: dimension must be in [0,64]");
  if (rows_.size() != static_cast<std::size_t>(d)) throw std::invalid_argument("BinaryMatrix: row count must equal d");
  uint64_t limit = d == 64 ? ~uint64_t{0} : (uint64_t{1} << d) - 1;
  for (uint64_t r : rows_)
    if (r & ~limit) throw std::invalid_argument("BinaryMatrix: row mask wider than d bits");
}

BinaryMatrix BinaryMatrix::identity(int d) {
  BinaryMatrix w(d);
  for (int j = 0; j < d; ++j) w.rows_[j] = uint64_t{1} << (d - 1 - j);
  return w;
}

int BinaryMatrix::rank() const {
  Gf2Basis basis;
  for (uint64_t r : rows_) basis.insert(r);
  return basis.size();
}

uint64_t BinaryMatrix::apply(uint64_t x) const {
  uint64_t y = 0;
  for (int j = 0; j < d_; ++j)
    if (parity(rows_[j] & x)) y |= uint64_t{1} << (d_ - 1 - j);
  return y;
}

uint64_t Gf2Basis::reduce(uint64_t v) const {
  for (uint64_t p : pivots_) {
    uint64_t lead = uint64_t{1} << (63 - __builtin_clzll(p));
    if (v & lead) v ^= p;
  }
  return v;
}

bool Gf2Basis::insert(uint64_t v) {
  v = reduce(v);
  if (v == 0) return false;
  // Keep pivots reduced against the new leading bit so reduce() stays single-pass.
  uint64_t lead = uint64_t{1} << (63 - __builtin_clzll(v));
  for (uint64_t& p : pivots_)
    if (p & lead) p ^= v;
  pivots_.push_back(v);
  return true;
}

bool Gf2Basis::contains(uint64_t v) const { return reduce(v) == 0; }

}  // namespace gbica
