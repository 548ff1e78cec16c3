#pragma once

// Closed-form quantities for the order permutation over random and
// adversarial distributions.

#include <cstdint>

#include "gbica/prob_model.hpp"

namespace gbica {

inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Digamma ψ(x) for x > 0.
double digamma(double x);

/// K_n = Σ_{i=1..n} 1/i (K_0 = 0).
double harmonic(uint64_t n);

/// Σ_{i=a+1..b} 1/i = K_b − K_a, accurate for close a, b.
double harmonic_difference(uint64_t a, uint64_t b);

/// E[H(X)] over the uniform simplex: (ψ(m+1) − ψ(2)) / ln 2.
double expected_joint_entropy(uint64_t m);

/// lim_{m→∞} log2 m − E[H(X)] = ψ(2)/ln 2.
double asymptotic_entropy_gap();

/// E[p_(i)], the i-th smallest coordinate: (K_m − K_{m−i}) / m.
double expected_order_stat(uint64_t m, uint64_t i);

/// Upper bound on E[H(Y_j)] for bit j (j = 1 is the least significant bit)
/// after the order permutation, valid for any d >= j.
double avg_case_marginal_bound(int d, int j);

/// Σ_{j≤10} marginal bounds + (d − 10) − E[H(X)] at m = 2^d. Requires d >= 10.
double avg_case_cost_bound(int d);

/// p_i = 1/(3(m−1)) for i < m and p_m = 2/3. Requires m = 2^d >= 2.
JointDistribution worst_case_distribution(uint64_t m);

/// Cost of the order permutation on worst_case_distribution(m), evaluated
/// from the closed form.
double worst_case_cost(uint64_t m);

/// Large-m limit of worst_case_cost(m) / log2 m: h_b(1/6) − 1/3.
double worst_case_slope();

}  // namespace gbica
