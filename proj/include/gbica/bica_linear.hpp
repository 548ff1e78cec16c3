#pragma once

// Linear relabelings over GF(2): U = W X with W invertible.

#include <vector>

#include "gbica/gf2.hpp"
#include "gbica/prob_model.hpp"

namespace gbica {

/// H(parity(mask & X)) for every mask in [0, 2^d), via a Walsh–Hadamard transform.
/// Mask bits are integer bits of the symbol.
std::vector<double> xor_entropy_table(const JointDistribution& dist);

/// Same table by direct marginalisation, O(4^d).
std::vector<double> xor_entropy_table_direct(const JointDistribution& dist);

/// Sum of the d smallest nonzero-mask entries of the table (a floor for Σ_j H(U_j)).
double linear_lower_bound(const JointDistribution& dist);

struct LinearResult {
  BinaryMatrix w;
  double sum_marginal = 0.0;
  double cost = 0.0;
};

/// Rows taken in ascending (H, mask) order, skipping GF(2)-dependent ones.
LinearResult greedy_linear_bica(const JointDistribution& dist);

/// Σ_j H(U_j) − H(X) for U = W X.
double linear_cost(const JointDistribution& dist, const BinaryMatrix& w);

/// Expected number of uniform row draws until d independent rows: Σ_{k<d} 2^d / (2^d − 2^k).
double expected_row_draws(int d);

}  // namespace gbica
