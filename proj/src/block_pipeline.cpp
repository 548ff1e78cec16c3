#include "gbica/block_pipeline.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gbica/bica_relax.hpp"
#include "gbica/redundancy.hpp"

namespace gbica {

uint32_t block_symbol(uint32_t word, int d, std::span<const int> order, int v, int b) {
  uint32_t s = 0;
  for (int t = 0; t < b; ++t) {
    int comp = order[v * b + t];
    s = (s << 1) | ((word >> (d - 1 - comp)) & 1U);
  }
  return s;
}

std::vector<uint32_t> apply_iteration(std::span<const uint32_t> words, int d, const PipelineIteration& it) {
  int B = static_cast<int>(it.block_transforms.size());
  int b = d / B;
  std::vector<uint32_t> out(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    uint32_t y = 0;
    for (int v = 0; v < B; ++v) y = (y << b) | it.block_transforms[v].map(block_symbol(words[i], d, it.order, v, b));
    out[i] = y;
  }
  return out;
}

std::vector<uint32_t> invert_iteration(std::span<const uint32_t> words, int d, const PipelineIteration& it) {
  int B = static_cast<int>(it.block_transforms.size());
  int b = d / B;
  std::vector<PermutationTransform> inv;
  for (const auto& t : it.block_transforms) inv.push_back(t.inverse());
  uint32_t mask = (uint32_t{1} << b) - 1;
  std::vector<uint32_t> out(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    uint32_t x = 0;
    for (int v = 0; v < B; ++v) {
      uint32_t s = inv[v].map((words[i] >> ((B - 1 - v) * b)) & mask);
      for (int t = 0; t < b; ++t) {
        int comp = it.order[v * b + t];
        if ((s >> (b - 1 - t)) & 1U) x |= uint32_t{1} << (d - 1 - comp);
      }
    }
    out[i] = x;
  }
  return out;
}

std::vector<double> block_entropies(std::span<const uint32_t> words, int d, std::span<const int> order, int B) {
  int b = d / B;
  std::vector<double> h(B);
  std::vector<uint64_t> counts(std::size_t{1} << b);
  for (int v = 0; v < B; ++v) {
    std::fill(counts.begin(), counts.end(), 0);
    for (uint32_t w : words) ++counts[block_symbol(w, d, order, v, b)];
    h[v] = entropy_of_counts(counts, words.size());
  }
  return h;
}

double sum_marginal_empirical(std::span<const uint32_t> words, int d) {
  std::vector<uint64_t> zeros(d, 0);
  for (uint32_t w : words)
    for (int j = 0; j < d; ++j)
      if (!((w >> (d - 1 - j)) & 1U)) ++zeros[j];
  double s = 0.0;
  double n = static_cast<double>(words.size());
  for (int j = 0; j < d; ++j) s += binary_entropy(static_cast<double>(zeros[j]) / n);
  return s;
}

namespace {

double sum_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

// Relaxed BICA per block of the regrouped words; identity when it does not help.
std::vector<PermutationTransform> fit_blocks(std::span<const uint32_t> words, int d, const std::vector<int>& order,
                                             int B, const PiecewiseLinearBound& bound) {
  int b = d / B;
  std::size_t mb = std::size_t{1} << b;
  std::vector<PermutationTransform> out(B);
  parallel_for(static_cast<std::size_t>(B), [&](std::size_t v) {
    std::vector<double> counts(mb, 0.0);
    for (uint32_t w : words) counts[block_symbol(w, d, order, static_cast<int>(v), b)] += 1.0;
    auto dist = JointDistribution::from_weights(counts);
    auto relaxed = relaxed_bica_binary(dist, bound);
    double before = dist.sum_marginal_entropies();
    out[v] = relaxed.sum_marginal < before - 1e-12 ? relaxed.transform : PermutationTransform::identity(mb);
  });
  return out;
}

}  // namespace

PipelineResult blockwise_pipeline(std::span<const uint32_t> samples, int d, const PipelineOptions& options) {
  int B = options.B;
  if (d < 1 || d > 30) throw std::invalid_argument("pipeline: d must be in [1, 30]");
  if (B < 1 || d % B != 0) throw std::invalid_argument("pipeline: B must divide d (d = " + std::to_string(d) + ")");
  if (samples.empty()) throw std::invalid_argument("pipeline: no samples");
  if (options.max_iters < 0) throw std::invalid_argument("pipeline: max_iters must be >= 0");
  int b = d / B;
  uint64_t m = uint64_t{1} << d;
  for (uint32_t s : samples)
    if (s >= m) throw std::out_of_range("pipeline: sample outside 2^d alphabet");

  PipelineResult res;
  res.d = d;
  res.B = B;
  res.b = b;
  res.n = samples.size();
  auto counts = count_symbols(samples, m);
  res.whole_alphabet_entropy = counts.entropy();
  res.baseline_total = whole_alphabet_baseline(res.n, m, res.whole_alphabet_entropy);

  auto bound = build_pwl_bound(options.k);
  Rng rng(options.seed);

  // Starting grouping: best of the identity and random groupings.
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  double best_start = sum_of(block_entropies(samples, d, order, B));
  for (int t = 1; t < options.init_trials; ++t) {
    std::vector<int> cand(d);
    std::iota(cand.begin(), cand.end(), 0);
    rng.shuffle(cand.begin(), cand.end());
    double h = sum_of(block_entropies(samples, d, cand, B));
    if (h < best_start) {
      best_start = h;
      order = cand;
    }
  }

  std::vector<uint32_t> state(samples.begin(), samples.end());
  PipelineIteration first;
  first.order = order;
  first.block_transforms = fit_blocks(state, d, order, B, bound);
  first.sum_block_entropy = best_start;
  state = apply_iteration(state, d, first);
  first.sum_marginal_entropy = sum_marginal_empirical(state, d);
  first.total_bits = pipeline_total_bits(res.n, b, B, first.sum_block_entropy, 0);
  res.iterations.push_back(std::move(first));
  res.best_iteration = 0;
  res.best_total = res.iterations[0].total_bits;
  res.final_symbols = state;

  int stale = 0;
  for (int it = 1; it <= options.max_iters; ++it) {
    const auto& prev = res.iterations.back();
    PipelineIteration cur;
    cur.order.resize(d);
    std::iota(cur.order.begin(), cur.order.end(), 0);
    rng.shuffle(cur.order.begin(), cur.order.end());
    cur.sum_block_entropy = sum_of(block_entropies(state, d, cur.order, B));
    cur.block_transforms = fit_blocks(state, d, cur.order, B, bound);
    state = apply_iteration(state, d, cur);
    cur.sum_marginal_entropy = sum_marginal_empirical(state, d);
    cur.total_bits = pipeline_total_bits(res.n, b, B, cur.sum_block_entropy, it);
    if (cur.total_bits < res.best_total) {
      res.best_total = cur.total_bits;
      res.best_iteration = it;
      res.final_symbols = state;
    }
    stale = cur.sum_marginal_entropy < prev.sum_marginal_entropy - 1e-12 ? 0 : stale + 1;
    res.iterations.push_back(std::move(cur));
    if (options.patience > 0 && stale >= options.patience) break;
  }
  return res;
}

}  // namespace gbica
