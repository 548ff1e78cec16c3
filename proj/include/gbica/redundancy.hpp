#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace gbica {

enum class Regime { Auto, SmallAlphabet, LargeAlphabet, Proportional, Patterns, ExplicitDictionary };

/// "auto", "m=o(n)", "n=o(m)", "theta", "patterns", "dictionary".
Regime parse_regime(const std::string& name);
std::string regime_name(Regime r);

struct RedundancyEstimate {
  double bits = 0.0;
  Regime regime = Regime::Auto;
  uint64_t m = 0;
  uint64_t n = 0;
  double alpha = 0.0;  // m / n in the proportional regime
  double l_n = 0.0;    // m − α n
  uint64_t n0 = 0;
};

/// Leading-term minimax redundancy in bits. Auto picks m=o(n) when m/n <= 0.1,
/// n=o(m) when m/n >= 10 and the proportional regime otherwise.
RedundancyEstimate minimax_redundancy(uint64_t m, uint64_t n, Regime regime = Regime::Auto, double l_n = 0.0);

/// Proportional regime with an explicit α: n log2 B_α + l log2 C_α − log2 √A_α.
double proportional_redundancy(double n, double alpha, double l_n = 0.0);

enum class PatternsMode { Default, CubeRoot };

/// n0 log2 m + pattern term; the pattern term is (3/2) log2(e) n^{1/3} by default
/// and n^{1/3} in cube-root mode.
RedundancyEstimate patterns_bound(uint64_t n, uint64_t n0, uint64_t m, PatternsMode mode = PatternsMode::Default);

/// Cost of sending the observed symbols explicitly: n0 ⌈log2 m⌉.
RedundancyEstimate explicit_dictionary(uint64_t n0, uint64_t m);

struct BlockSize {
  double bits = 0.0;
  bool regime_valid = true;  // false when 2^b >= n
};

/// n Σ Ĥ(X^(v)) + B ((2^b − 1)/2) log2(n / 2^b).
BlockSize total_size_blocks(uint64_t n, int b, int B, std::span<const double> block_entropies);

/// Block size plus I·B·b·2^b for block transforms and I·⌈log2 d!⌉ for shuffles.
double pipeline_total_bits(uint64_t n, int b, int B, double sum_block_entropy, int iteration);

/// ⌈log2 d!⌉.
int log2_factorial_ceil(int d);

/// Whole-alphabet reference: n Ĥ + proportional-regime redundancy at α = m/n.
double whole_alphabet_baseline(uint64_t n, uint64_t m, double empirical_entropy);

}  // namespace gbica
