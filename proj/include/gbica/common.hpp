#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>

namespace gbica {

/// Raised when a serialized stream is malformed or ends early.
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a distribution is not an invertible mixing of independent bits.
class NotDecomposable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Deterministic pseudo-random source. All draws are derived from the raw
/// 64-bit engine output so sequences are identical across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open_low() { return 1.0 - uniform(); }

  double exponential() { return -std::log(uniform_open_low()); }

  double normal();

  /// Uniform integer in [0, n).
  uint64_t below(uint64_t n);

  template <typename It>
  void shuffle(It first, It last) {
    auto n = static_cast<uint64_t>(last - first);
    for (uint64_t i = n; i > 1; --i) {
      auto j = below(i);
      std::swap(first[i - 1], first[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Seed for trial `index` of an experiment seeded with `master` (splitmix64).
uint64_t derive_seed(uint64_t master, uint64_t index);

/// Worker count: GBICA_THREADS if set, else hardware concurrency.
unsigned thread_count();

/// Runs body(i) for i in [0, n) across thread_count() workers.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Neumaier-compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// -x log2 x with 0 log 0 = 0.
inline double entropy_term(double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; }

/// Shannon entropy (bits) of a non-negative weight vector that sums to `total`.
double entropy_of_counts(std::span<const uint64_t> counts, uint64_t total);

inline bool is_power_of_two(uint64_t x) { return x != 0 && (x & (x - 1)) == 0; }

/// log2 of a power of two.
int exact_log2(uint64_t x);

/// Number of bits needed to write values in [0, m): ceil(log2 m), 0 for m <= 1.
int bits_for(uint64_t m);

}  // namespace gbica
