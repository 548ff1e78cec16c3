#pragma once

// Iterative block-wise universal compression: regroup the d binary components
// into B blocks of b, relabel each block with relaxed BICA, repeat.

#include <cstdint>
#include <span>
#include <vector>

#include "gbica/transforms.hpp"

namespace gbica {

struct PipelineOptions {
  int B = 2;
  int max_iters = 50;
  int k = 8;
  uint64_t seed = 1;
  int init_trials = 16;  // random groupings tried for the starting point
  int patience = 0;      // stop after this many iterations without a drop in Σ marginals (0 = never)
};

struct PipelineIteration {
  /// New component position p reads old component order[p] (msb first).
  std::vector<int> order;
  std::vector<PermutationTransform> block_transforms;
  double sum_block_entropy = 0.0;     // Σ_v Ĥ(Y^(v)) of the blocks coded at this iteration
  double sum_marginal_entropy = 0.0;  // Σ_j Ĥ(Y_j) after the block transforms; never increases
  double total_bits = 0.0;
};

struct PipelineResult {
  int d = 0, B = 0, b = 0;
  uint64_t n = 0;
  std::vector<PipelineIteration> iterations;  // index = iteration I (0 = initial pass)
  int best_iteration = 0;
  double best_total = 0.0;
  double whole_alphabet_entropy = 0.0;
  double baseline_total = 0.0;  // n Ĥ + proportional-regime redundancy
  std::vector<uint32_t> final_symbols;  // state after best_iteration
};

/// Extracts the block symbol made of components order[v*b .. v*b+b) of a d-bit word.
uint32_t block_symbol(uint32_t word, int d, std::span<const int> order, int v, int b);

/// Applies one recorded iteration to d-bit words.
std::vector<uint32_t> apply_iteration(std::span<const uint32_t> words, int d, const PipelineIteration& it);
std::vector<uint32_t> invert_iteration(std::span<const uint32_t> words, int d, const PipelineIteration& it);

/// Empirical entropies of each block after regrouping by `order`.
std::vector<double> block_entropies(std::span<const uint32_t> words, int d, std::span<const int> order, int B);

/// Σ_j Ĥ(Y_j) of d-bit words.
double sum_marginal_empirical(std::span<const uint32_t> words, int d);

PipelineResult blockwise_pipeline(std::span<const uint32_t> samples, int d, const PipelineOptions& options);

}  // namespace gbica
