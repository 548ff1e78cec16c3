#include "gbica/redundancy.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "gbica/common.hpp"

namespace gbica {

namespace {

const double kLog2e = std::log2(std::exp(1.0));

void require_positive(uint64_t m, uint64_t n) {
  if (m < 2) throw std::invalid_argument("redundancy: m must be >= 2");
  if (n < 1) throw std::invalid_argument("redundancy: n must be >= 1");
}

}  // namespace

Regime parse_regime(const std::string& name) {
  if (name == "auto") return Regime::Auto;
  if (name == "m=o(n)" || name == "small") return Regime::SmallAlphabet;
  if (name == "n=o(m)" || name == "large") return Regime::LargeAlphabet;
  if (name == "theta" || name == "m=theta(n)") return Regime::Proportional;
  if (name == "patterns") return Regime::Patterns;
  if (name == "dictionary") return Regime::ExplicitDictionary;
  throw std::invalid_argument("unknown regime '" + name + "'");
}

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::Auto: return "auto";
    case Regime::SmallAlphabet: return "m=o(n)";
    case Regime::LargeAlphabet: return "n=o(m)";
    case Regime::Proportional: return "theta";
    case Regime::Patterns: return "patterns";
    case Regime::ExplicitDictionary: return "dictionary";
  }
  return "?";
}

double proportional_redundancy(double n, double alpha, double l_n) {
  if (!(alpha > 0.0)) throw std::invalid_argument("proportional regime needs alpha > 0");
  double c = 0.5 + 0.5 * std::sqrt(1.0 + 4.0 / alpha);
  double a = c + 2.0 / alpha;
  // log2 B_α = log2 α + (α + 2) log2 C_α − log2(e) / C_α
  double log2_b = std::log2(alpha) + (alpha + 2.0) * std::log2(c) - kLog2e / c;
  return n * log2_b + l_n * std::log2(c) - 0.5 * std::log2(a);
}

RedundancyEstimate minimax_redundancy(uint64_t m, uint64_t n, Regime regime, double l_n) {
  require_positive(m, n);
  double md = static_cast<double>(m), nd = static_cast<double>(n);
  if (regime == Regime::Auto) {
    double ratio = md / nd;
    regime = ratio <= 0.1 ? Regime::SmallAlphabet : ratio >= 10.0 ? Regime::LargeAlphabet : Regime::Proportional;
  }
  RedundancyEstimate r;
  r.regime = regime;
  r.m = m;
  r.n = n;
  switch (regime) {
    case Regime::SmallAlphabet:
      r.bits = (md - 1.0) / 2.0 * std::log2(nd / md) + md / 2.0 * kLog2e + md * kLog2e / 3.0 * std::sqrt(md / nd);
      break;
    case Regime::LargeAlphabet:
      r.bits = nd * std::log2(md / nd) + 1.5 * nd * nd / md * kLog2e - 1.5 * nd / md * kLog2e;
      break;
    case Regime::Proportional:
      r.alpha = (md - l_n) / nd;
      r.l_n = l_n;
      r.bits = proportional_redundancy(nd, r.alpha, l_n);
      break;
    default:
      throw std::invalid_argument("minimax_redundancy: regime must be auto, m=o(n), n=o(m) or theta");
  }
  return r;
}

RedundancyEstimate patterns_bound(uint64_t n, uint64_t n0, uint64_t m, PatternsMode mode) {
  if (n0 > n || n0 > m) throw std::invalid_argument("patterns_bound: n0 must not exceed n or m");
  if (m < 1) throw std::invalid_argument("patterns_bound: m must be >= 1");
  RedundancyEstimate r;
  r.regime = Regime::Patterns;
  r.m = m;
  r.n = n;
  r.n0 = n0;
  double pattern = std::cbrt(static_cast<double>(n));
  if (mode == PatternsMode::Default) pattern *= 1.5 * kLog2e;
  r.bits = static_cast<double>(n0) * std::log2(static_cast<double>(m)) + pattern;
  return r;
}

RedundancyEstimate explicit_dictionary(uint64_t n0, uint64_t m) {
  RedundancyEstimate r;
  r.regime = Regime::ExplicitDictionary;
  r.m = m;
  r.n0 = n0;
  r.bits = static_cast<double>(n0) * static_cast<double>(bits_for(m));
  return r;
}

BlockSize total_size_blocks(uint64_t n, int b, int B, std::span<const double> block_entropies) {
  if (b < 1 || b > 40 || B < 1) throw std::invalid_argument("total_size_blocks: need b in [1,40] and B >= 1");
  if (block_entropies.size() != static_cast<std::size_t>(B))
    throw std::invalid_argument("total_size_blocks: one entropy per block required");
  BlockSize s;
  double mb = std::ldexp(1.0, b);
  double nd = static_cast<double>(n);
  double sum = 0.0;
  for (double h : block_entropies) sum += h;
  s.bits = nd * sum + B * ((mb - 1.0) / 2.0) * std::log2(nd / mb);
  if (mb >= nd) {
    s.regime_valid = false;
    std::cerr << "warning: 2^b >= n; block redundancy term is outside its regime\n";
  }
  return s;
}

int log2_factorial_ceil(int d) {
  if (d < 0) throw std::invalid_argument("log2_factorial_ceil: d must be >= 0");
  double s = 0.0;
  for (int i = 2; i <= d; ++i) s += std::log2(static_cast<double>(i));
  return static_cast<int>(std::ceil(s - 1e-9));
}

double pipeline_total_bits(uint64_t n, int b, int B, double sum_block_entropy, int iteration) {
  double mb = std::ldexp(1.0, b);
  double nd = static_cast<double>(n);
  double base = nd * sum_block_entropy + B * ((mb - 1.0) / 2.0) * std::log2(nd / mb);
  return base + static_cast<double>(iteration) * B * b * mb +
         static_cast<double>(iteration) * log2_factorial_ceil(b * B);
}

double whole_alphabet_baseline(uint64_t n, uint64_t m, double empirical_entropy) {
  require_positive(m, n);
  double alpha = static_cast<double>(m) / static_cast<double>(n);
  return static_cast<double>(n) * empirical_entropy + proportional_redundancy(static_cast<double>(n), alpha);
}

}  // namespace gbica
