#pragma once

#include <cstdint>
#include <vector>

#include "gbica/prob_model.hpp"
#include "gbica/transforms.hpp"

namespace gbica {

struct RecoveryResult {
  /// pi[j] = P(Y_j = 0) for output component j (msb first); pi[0] >= pi[1] >= ... and all <= 1/2.
  std::vector<double> pi;
  /// Maps the input symbols onto the product form with parameters pi.
  PermutationTransform transform;
};

/// Peels one independent parameter per level from the sorted probabilities.
/// Throws NotDecomposable when the input is not a relabeled product of bits.
RecoveryResult recover_independent_components(const JointDistribution& dist, double rel_tol = 1e-9);

struct BnbOptions {
  int max_d = 4;
  bool prune = true;
};

struct BnbResult {
  PermutationTransform transform;
  double sum_marginal = 0.0;  // Σ_j h_b(π_j) at the optimum
  double cost = 0.0;          // sum_marginal − H(X)
  uint64_t nodes_expanded = 0;
};

/// Global minimum of Σ_j H(Y_j) over all relabelings, searched over
/// allocations of ascending probabilities that respect the zero-bit partial order.
BnbResult branch_and_bound_optimal(const JointDistribution& dist, const BnbOptions& options = {});

}  // namespace gbica
