#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "gbica/prob_model.hpp"
#include "gbica/transforms.hpp"

namespace testing {

inline double hb(double p) { return (p <= 0.0 || p >= 1.0) ? 0.0 : -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

inline double plain_entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0) h -= v * std::log2(v);
  return h;
}

// Σ_j h_b(P(bit j = 0)) of q[table[x]] = p[x], by direct subset sums.
inline double marginal_sum_direct(std::span<const double> p, const std::vector<uint32_t>& table, int d) {
  double s = 0.0;
  for (int j = 0; j < d; ++j) {
    double z = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x)
      if (!((table[x] >> (d - 1 - j)) & 1U)) z += p[x];
    s += hb(z);
  }
  return s;
}

inline std::vector<uint32_t> iota_table(std::size_t m) {
  std::vector<uint32_t> t(m);
  std::iota(t.begin(), t.end(), 0);
  return t;
}

inline double brute_force_min(const gbica::JointDistribution& dist) {
  auto perm = iota_table(dist.size());
  double best = 1e300;
  do {
    best = std::min(best, marginal_sum_direct(dist.probs(), perm, dist.components()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace testing
