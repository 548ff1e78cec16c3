#include "gbica/bica_linear.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gbica/transforms.hpp"

namespace gbica {

namespace {

double parity_entropy(double p_zero) { return binary_entropy(std::clamp(p_zero, 0.0, 1.0)); }

void require_binary(const JointDistribution& dist) {
  if (dist.radix() != 2) throw std::invalid_argument("linear BICA requires a binary alphabet");
}

}  // namespace

std::vector<double> xor_entropy_table(const JointDistribution& dist) {
  require_binary(dist);
  std::size_t m = dist.size();
  std::vector<double> f(dist.probs().begin(), dist.probs().end());
  // f[mask] becomes Σ_x p(x) (−1)^{parity(mask & x)} = P(U=0) − P(U=1).
  for (std::size_t h = 1; h < m; h <<= 1)
    for (std::size_t i = 0; i < m; i += 2 * h)
      for (std::size_t j = i; j < i + h; ++j) {
        double a = f[j], b = f[j + h];
        f[j] = a + b;
        f[j + h] = a - b;
      }
  std::vector<double> out(m, 0.0);
  for (std::size_t mask = 1; mask < m; ++mask) out[mask] = parity_entropy(0.5 * (1.0 + f[mask]));
  return out;
}

std::vector<double> xor_entropy_table_direct(const JointDistribution& dist) {
  require_binary(dist);
  std::size_t m = dist.size();
  std::vector<double> out(m, 0.0);
  for (std::size_t mask = 1; mask < m; ++mask) {
    CompensatedSum zero;
    for (std::size_t x = 0; x < m; ++x)
      if (!parity(mask & x)) zero.add(dist[x]);
    out[mask] = parity_entropy(zero.value());
  }
  return out;
}

double linear_lower_bound(const JointDistribution& dist) {
  auto table = xor_entropy_table(dist);
  std::vector<double> h(table.begin() + 1, table.end());
  int d = dist.components();
  std::partial_sort(h.begin(), h.begin() + d, h.end());
  CompensatedSum s;
  for (int i = 0; i < d; ++i) s.add(h[i]);
  return s.value();
}

double linear_cost(const JointDistribution& dist, const BinaryMatrix& w) {
  return cost(dist, PermutationTransform::linear(w));
}

LinearResult greedy_linear_bica(const JointDistribution& dist) {
  auto table = xor_entropy_table(dist);
  int d = dist.components();
  std::vector<uint32_t> masks(dist.size() - 1);
  std::iota(masks.begin(), masks.end(), 1U);
  std::stable_sort(masks.begin(), masks.end(), [&](uint32_t a, uint32_t b) { return table[a] < table[b]; });
  Gf2Basis basis;
  std::vector<uint64_t> rows;
  for (uint32_t mask : masks) {
    if (basis.insert(mask)) rows.push_back(mask);
    if (static_cast<int>(rows.size()) == d) break;
  }
  LinearResult r;
  r.w = BinaryMatrix(d, std::move(rows));
  r.sum_marginal = PermutationTransform::linear(r.w).apply(dist).sum_marginal_entropies();
  double c = r.sum_marginal - dist.entropy();
  r.cost = c < 0.0 && c > -1e-12 ? 0.0 : c;
  return r;
}

double expected_row_draws(int d) {
  if (d < 1 || d > 1000) throw std::invalid_argument("expected_row_draws: d must be in [1, 1000]");
  double s = 0.0;
  // 2^d / (2^d − 2^k) = 1 / (1 − 2^{k−d}).
  for (int k = 0; k < d; ++k) s += 1.0 / (1.0 - std::ldexp(1.0, k - d));
  return s;
}

}  // namespace gbica
