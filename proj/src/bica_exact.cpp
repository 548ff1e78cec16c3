#include "gbica/bica_exact.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

namespace gbica {

namespace {

bool close(double a, double b, double rel_tol) {
  return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b)) + 1e-300;
}

std::vector<uint32_t> ascending_symbols(std::span<const double> p) {
  std::vector<uint32_t> idx(p.size());
  std::iota(idx.begin(), idx.end(), 0U);
  std::stable_sort(idx.begin(), idx.end(), [&](uint32_t a, uint32_t b) { return p[a] < p[b]; });
  return idx;
}

// True when `sub` (sorted) is a sub-multiset of `all` (sorted) up to tolerance.
bool contained(const std::vector<double>& sub, const std::vector<double>& all, double rel_tol) {
  std::size_t i = 0;
  for (double v : sub) {
    while (i < all.size() && all[i] < v && !close(all[i], v, rel_tol)) ++i;
    if (i == all.size() || !close(all[i], v, rel_tol)) return false;
    ++i;
  }
  return true;
}

}  // namespace

RecoveryResult recover_independent_components(const JointDistribution& dist, double rel_tol) {
  if (dist.radix() != 2) throw std::invalid_argument("recovery requires a binary alphabet");
  int d = dist.components();
  auto order = ascending_symbols(dist.probs());
  std::vector<double> sorted(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) sorted[i] = dist[order[i]];

  double p1 = sorted[0];
  if (!(p1 > 0.0)) throw NotDecomposable("smallest probability is zero; no product of non-degenerate bits matches");

  std::vector<double> lambda{p1};
  std::vector<double> pi;  // in discovery order: largest parameter first
  for (int k = 1; k <= d; ++k) {
    // Smallest entry of `sorted` not matched by the current Λ.
    std::size_t i = 0, l = 0;
    while (i < sorted.size() && l < lambda.size()) {
      if (close(sorted[i], lambda[l], rel_tol)) {
        ++i;
        ++l;
      } else if (sorted[i] < lambda[l]) {
        break;
      } else {
        throw NotDecomposable("level " + std::to_string(k) + " product is missing from the distribution");
      }
    }
    if (i == sorted.size()) throw NotDecomposable("no candidate left at level " + std::to_string(k));
    double found = sorted[i];
    double p = p1 / (p1 + found);
    if (!(p > 0.0 && p <= 0.5 + 1e-12)) throw NotDecomposable("parameter outside (0, 1/2] at level " + std::to_string(k));
    p = std::min(p, 0.5);
    pi.push_back(p);
    double ratio = (1.0 - p) / p;
    std::vector<double> scaled(lambda.size());
    for (std::size_t t = 0; t < lambda.size(); ++t) scaled[t] = lambda[t] * ratio;
    std::vector<double> merged(lambda.size() * 2);
    std::merge(lambda.begin(), lambda.end(), scaled.begin(), scaled.end(), merged.begin());
    lambda = std::move(merged);
    if (!contained(lambda, sorted, rel_tol))
      throw NotDecomposable("level " + std::to_string(k) + " products are missing from the distribution");
  }

  // Words in product form: component j carries pi[j], bit value 0 with probability pi[j].
  std::size_t m = dist.size();
  std::vector<std::pair<double, uint32_t>> products(m);
  for (std::size_t w = 0; w < m; ++w) {
    double v = 1.0;
    for (int j = 0; j < d; ++j) v *= ((w >> (d - 1 - j)) & 1U) ? 1.0 - pi[j] : pi[j];
    products[w] = {v, static_cast<uint32_t>(w)};
  }
  std::sort(products.begin(), products.end());
  std::vector<uint32_t> table(m);
  for (std::size_t t = 0; t < m; ++t) table[order[t]] = products[t].second;
  return {std::move(pi), PermutationTransform::from_table(std::move(table))};
}

namespace {

constexpr int kMaxWords = 16;

struct Node {
  double bound;
  int depth;
  uint32_t allocated;                   // bitset over words
  std::array<uint8_t, kMaxWords> word;  // word[t] receives the t-th smallest probability
  std::array<double, 4> partial;        // allocated mass on words with bit j zero
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.depth < b.depth;
  }
};

}  // namespace

BnbResult branch_and_bound_optimal(const JointDistribution& dist, const BnbOptions& options) {
  if (dist.radix() != 2) throw std::invalid_argument("branch and bound requires a binary alphabet");
  int d = dist.components();
  int limit = std::min(options.max_d, 4);
  if (d > limit)
    throw std::invalid_argument("branch and bound supports d <= " + std::to_string(limit) + " (got d = " +
                                std::to_string(d) + "; the search space grows like the linear extensions of a " +
                                std::to_string(1 << d) + "-element lattice)");
  int m = 1 << d;
  auto order = ascending_symbols(dist.probs());
  std::vector<double> q(m);
  for (int i = 0; i < m; ++i) q[i] = dist[order[i]];
  std::vector<double> prefix(m + 1, 0.0);
  for (int i = 0; i < m; ++i) prefix[i + 1] = prefix[i] + q[i];

  auto zero_bit = [d](int w, int j) { return !((w >> (d - 1 - j)) & 1); };

  auto lower_bound = [&](const Node& n) {
    double lb = 0.0;
    for (int j = 0; j < d; ++j) {
      int remaining = 0;
      for (int w = 0; w < m; ++w)
        if (!(n.allocated >> w & 1U) && zero_bit(w, j)) ++remaining;
      double pj = n.partial[j] + (prefix[n.depth + remaining] - prefix[n.depth]);
      lb += binary_entropy(std::clamp(pj, 0.0, 0.5));
    }
    return lb;
  };

  // Incumbent: word i takes the i-th smallest probability (the order permutation).
  std::array<uint8_t, kMaxWords> best_word{};
  double best = 0.0;
  {
    std::array<double, 4> pj{};
    for (int w = 0; w < m; ++w) {
      best_word[w] = static_cast<uint8_t>(w);
      for (int j = 0; j < d; ++j)
        if (zero_bit(w, j)) pj[j] += q[w];
    }
    for (int j = 0; j < d; ++j) best += binary_entropy(std::clamp(pj[j], 0.0, 1.0));
  }

  BnbResult result;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  Node root{};
  root.bound = 0.0;
  root.bound = lower_bound(root);
  open.push(root);
  while (!open.empty()) {
    Node n = open.top();
    open.pop();
    if (options.prune && n.bound >= best) continue;
    ++result.nodes_expanded;
    if (n.depth == m) {
      double v = 0.0;
      for (int j = 0; j < d; ++j) v += binary_entropy(std::clamp(n.partial[j], 0.0, 1.0));
      if (v < best) {
        best = v;
        best_word = n.word;
      }
      continue;
    }
    for (int w = 0; w < m; ++w) {
      if (n.allocated >> w & 1U) continue;
      bool eligible = true;
      for (int j = 0; j < d && eligible; ++j) {
        int bit = 1 << (d - 1 - j);
        if ((w & bit) && !(n.allocated >> (w ^ bit) & 1U)) eligible = false;
      }
      if (!eligible) continue;
      Node c = n;
      c.allocated |= 1U << w;
      c.word[c.depth] = static_cast<uint8_t>(w);
      for (int j = 0; j < d; ++j)
        if (zero_bit(w, j)) c.partial[j] += q[n.depth];
      ++c.depth;
      c.bound = lower_bound(c);
      if (options.prune && c.bound >= best) continue;
      open.push(c);
    }
  }

  std::vector<uint32_t> table(m);
  for (int t = 0; t < m; ++t) table[order[t]] = best_word[t];
  result.transform = PermutationTransform::from_table(std::move(table));
  result.sum_marginal = result.transform.apply(dist).sum_marginal_entropies();
  double c = result.sum_marginal - dist.entropy();
  result.cost = c < 0.0 && c > -1e-12 ? 0.0 : c;
  return result;
}

}  // namespace gbica
