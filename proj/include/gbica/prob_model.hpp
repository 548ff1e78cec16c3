#pragma once

// Distributions over finite alphabets of m = q^d symbols.
//
// Symbol <-> digit convention: component j = 0 is the MOST significant digit
// of the symbol index. For q = 2, marginal_bit_probs()[0] is P(msb = 0).

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gbica/common.hpp"

namespace gbica {

/// Binary entropy h_b(p) in bits. Throws std::domain_error outside [0, 1].
double binary_entropy(double p);

/// Shannon entropy in bits of a probability vector.
double entropy(std::span<const double> probs);

class JointDistribution {
 public:
  static constexpr double kNormTolerance = 1e-12;

  JointDistribution() = default;

  /// Validates non-negativity, Σ = 1 within kNormTolerance and m = q^d.
  static JointDistribution from_probs(std::vector<double> probs, int radix = 2);

  /// Divides non-negative weights by their sum.
  static JointDistribution from_weights(std::span<const double> weights, int radix = 2);

  static JointDistribution uniform(std::size_t m, int radix = 2);

  /// Point mass on `symbol`.
  static JointDistribution point_mass(std::size_t m, std::size_t symbol, int radix = 2);

  /// Product of independent bits with P(bit j = 0) = pi0[j] (j = 0 is msb).
  static JointDistribution independent_bits(std::span<const double> pi0);

  int components() const { return components_; }
  int radix() const { return radix_; }
  std::size_t size() const { return probs_.size(); }
  std::span<const double> probs() const { return probs_; }
  double operator[](std::size_t i) const { return probs_[i]; }

  double entropy() const;

  /// Digit `component` (0 = most significant) of `symbol`.
  unsigned digit(std::size_t symbol, int component) const;

  /// π_j = P(bit j = 0), j = 0 is msb. Binary alphabets only.
  std::vector<double> marginal_bit_probs() const;

  /// Per-component marginal distributions over the q digit values.
  std::vector<std::vector<double>> component_marginals() const;

  /// Σ_j H(Y_j) over components (binary or q-ary).
  double sum_marginal_entropies() const;

  bool operator==(const JointDistribution& other) const = default;

 private:
  std::vector<double> probs_;
  int components_ = 0;
  int radix_ = 2;
};

struct EmpiricalCounts {
  std::vector<uint64_t> counts;
  uint64_t n = 0;
  std::size_t n0 = 0;  // distinct observed symbols

  double entropy() const { return entropy_of_counts(counts, n); }
};

/// Zipf law: P(k) ∝ k^-s for rank k = 1..m, rank k placed on symbol k-1.
JointDistribution gen_zipf(std::size_t m, double s, int radix = 2);

/// Flat-Dirichlet draw built from normalized exponential spacings.
JointDistribution gen_uniform_simplex(std::size_t m, Rng& rng, int radix = 2);
JointDistribution gen_uniform_simplex(std::size_t m, uint64_t seed, int radix = 2);

/// Joint law of d consecutive bits of a stationary symmetric binary Markov
/// chain with flip probability alpha (first bit = msb).
JointDistribution gen_markov_symmetric(int d, double alpha);

/// Counts and maximum-likelihood distribution. Throws on empty input or a
/// sample outside [0, m).
std::pair<EmpiricalCounts, JointDistribution> empirical_distribution(std::span<const uint32_t> samples,
                                                                     std::size_t m, int radix = 2);

EmpiricalCounts count_symbols(std::span<const uint32_t> samples, std::size_t m);

/// Inverse-CDF sampler over a fixed distribution.
class SymbolSampler {
 public:
  explicit SymbolSampler(std::span<const double> probs);
  uint32_t operator()(Rng& rng) const;
  std::vector<uint32_t> draw(std::size_t n, Rng& rng) const;

 private:
  std::vector<double> cdf_;
};

// Text formats: distribution = "m" line then m probability lines; samples =
// one integer per line. Values are written with 17 significant digits.
void write_distribution(std::ostream& out, const JointDistribution& dist);
JointDistribution read_distribution(std::istream& in, int radix = 2);
void write_samples(std::ostream& out, std::span<const uint32_t> samples);
std::vector<uint32_t> read_samples(std::istream& in);

}  // namespace gbica
