#include "gbica/order_theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gbica {

namespace {

constexpr uint64_t kExactHarmonicLimit = uint64_t{1} << 20;

double harmonic_asymptotic(double n) {
  double inv = 1.0 / n;
  double inv2 = inv * inv;
  return std::log(n) + kEulerGamma + 0.5 * inv - inv2 / 12.0 + inv2 * inv2 / 120.0 - inv2 * inv2 * inv2 / 252.0;
}

}  // namespace

double digamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("digamma: argument must be positive");
  double shift = 0.0;
  while (x < 16.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  double inv = 1.0 / x;
  double inv2 = inv * inv;
  // Bernoulli-number series for ln x − 1/(2x) − Σ B_2k / (2k x^2k).
  double series = inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
  return shift + std::log(x) - 0.5 * inv - series;
}

double harmonic(uint64_t n) {
  if (n == 0) return 0.0;
  if (n > kExactHarmonicLimit) return harmonic_asymptotic(static_cast<double>(n));
  CompensatedSum s;
  for (uint64_t i = n; i >= 1; --i) s.add(1.0 / static_cast<double>(i));
  return s.value();
}

double harmonic_difference(uint64_t a, uint64_t b) {
  if (a > b) return -harmonic_difference(b, a);
  if (b - a <= kExactHarmonicLimit) {
    CompensatedSum s;
    for (uint64_t i = b; i > a; --i) s.add(1.0 / static_cast<double>(i));
    return s.value();
  }
  return harmonic(b) - harmonic(a);
}

double expected_joint_entropy(uint64_t m) {
  if (m < 1) throw std::invalid_argument("expected_joint_entropy: m must be >= 1");
  // ψ(m+1) − ψ(2) = K_m − 1 for integer m.
  return harmonic_difference(1, m) / std::log(2.0);
}

double asymptotic_entropy_gap() { return (1.0 - kEulerGamma) / std::log(2.0); }

double expected_order_stat(uint64_t m, uint64_t i) {
  if (i < 1 || i > m) throw std::invalid_argument("expected_order_stat: need 1 <= i <= m");
  return harmonic_difference(m - i, m) / static_cast<double>(m);
}

double avg_case_marginal_bound(int d, int j) {
  if (d < 1 || j < 1 || j > d) throw std::invalid_argument("avg_case_marginal_bound: need 1 <= j <= d");
  if (j > 40) return 1.0;
  uint64_t n = uint64_t{1} << j;
  CompensatedSum s;
  for (uint64_t i = 1; i < n; ++i) {
    double x = static_cast<double>(i) / static_cast<double>(n);
    double term = x * std::log(x);
    s.add(i % 2 == 1 ? term : -term);
  }
  double pi = s.value() + 0.5;
  return binary_entropy(std::clamp(pi, 0.0, 1.0));
}

double avg_case_cost_bound(int d) {
  if (d < 10)
    throw std::invalid_argument("avg_case_cost_bound requires d >= 10 (got d = " + std::to_string(d) + ")");
  if (d > 62) throw std::invalid_argument("avg_case_cost_bound: d too large");
  CompensatedSum s;
  for (int j = 1; j <= 10; ++j) s.add(avg_case_marginal_bound(d, j));
  s.add(static_cast<double>(d - 10));
  s.add(-expected_joint_entropy(uint64_t{1} << d));
  return s.value();
}

JointDistribution worst_case_distribution(uint64_t m) {
  if (m < 2 || !is_power_of_two(m)) throw std::invalid_argument("worst_case_distribution: m must be a power of two >= 2");
  std::vector<double> p(m, 1.0 / (3.0 * static_cast<double>(m - 1)));
  p[m - 1] = 2.0 / 3.0;
  return JointDistribution::from_probs(std::move(p));
}

double worst_case_cost(uint64_t m) {
  if (m < 2 || !is_power_of_two(m)) throw std::invalid_argument("worst_case_cost: m must be a power of two >= 2");
  double md = static_cast<double>(m);
  double d = std::log2(md);
  return d * binary_entropy(md / (6.0 * (md - 1.0))) - std::log2(md - 1.0) / 3.0 + std::log2(1.0 / 3.0) / 3.0 +
         2.0 * std::log2(2.0 / 3.0) / 3.0;
}

double worst_case_slope() { return binary_entropy(1.0 / 6.0) - 1.0 / 3.0; }

}  // namespace gbica
