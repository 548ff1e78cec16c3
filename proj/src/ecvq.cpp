#include "gbica/ecvq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "gbica/bica_relax.hpp"
#include "gbica/prob_model.hpp"

namespace gbica {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sq_dist(std::span<const double> a, const double* c, int dim) {
  double s = 0.0;
  for (int t = 0; t < dim; ++t) {
    double e = a[t] - c[t];
    s += e * e;
  }
  return s;
}

void check_inputs(const PointSet& samples, const std::vector<double>& centroids) {
  if (samples.dim < 1) throw std::invalid_argument("ecvq: dimension must be >= 1");
  if (samples.size() == 0) throw std::invalid_argument("ecvq: no samples");
  if (centroids.empty() || centroids.size() % samples.dim != 0)
    throw std::invalid_argument("ecvq: need at least one centroid of the sample dimension");
}

// α step: argmin ||x − β_i||² + λ|γ(i)|, lowest index on ties. Returns E{D}.
double assign(const PointSet& samples, const QuantizerModel& q, double lambda, std::vector<uint32_t>& out) {
  std::size_t n = samples.size();
  std::size_t m = q.clusters();
  int dim = samples.dim;
  out.resize(n);
  std::vector<double> dist(n);
  parallel_for(n, [&](std::size_t i) {
    auto x = samples.point(i);
    double best = kInf, best_d = 0.0;
    uint32_t arg = 0;
    for (std::size_t c = 0; c < m; ++c) {
      if (!std::isfinite(q.lengths[c])) continue;
      double d = sq_dist(x, q.centroids.data() + c * dim, dim);
      double v = d + lambda * q.lengths[c];
      if (v < best) {
        best = v;
        best_d = d;
        arg = static_cast<uint32_t>(c);
      }
    }
    out[i] = arg;
    dist[i] = best_d;
  });
  CompensatedSum s;
  for (double d : dist) s.add(d);
  return s.value() / static_cast<double>(n);
}

std::vector<uint64_t> cluster_counts(const std::vector<uint32_t>& a, std::size_t m) {
  std::vector<uint64_t> c(m, 0);
  for (uint32_t i : a) ++c[i];
  return c;
}

// β step; clusters without members keep their centroid.
void update_centroids(const PointSet& samples, QuantizerModel& q) {
  int dim = samples.dim;
  std::size_t m = q.clusters();
  std::vector<double> sum(m * dim, 0.0);
  std::vector<uint64_t> cnt(m, 0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto x = samples.point(i);
    uint32_t c = q.assignment[i];
    ++cnt[c];
    for (int t = 0; t < dim; ++t) sum[c * dim + t] += x[t];
  }
  for (std::size_t c = 0; c < m; ++c)
    if (cnt[c] > 0)
      for (int t = 0; t < dim; ++t) q.centroids[c * dim + t] = sum[c * dim + t] / static_cast<double>(cnt[c]);
}

double mean_distortion(const PointSet& samples, const QuantizerModel& q) {
  CompensatedSum s;
  for (std::size_t i = 0; i < samples.size(); ++i)
    s.add(sq_dist(samples.point(i), q.centroids.data() + q.assignment[i] * samples.dim, samples.dim));
  return s.value() / static_cast<double>(samples.size());
}

double mean_length(const QuantizerModel& q) {
  CompensatedSum s;
  for (uint32_t c : q.assignment) s.add(q.lengths[c]);
  return s.value() / static_cast<double>(q.assignment.size());
}

// Removes clusters with infinite length and renumbers assignments.
void drop_empty(QuantizerModel& q) {
  std::size_t m = q.clusters();
  int dim = q.dim;
  std::vector<uint32_t> remap(m, 0);
  std::vector<double> cents, lens;
  uint32_t next = 0;
  for (std::size_t c = 0; c < m; ++c) {
    if (!std::isfinite(q.lengths[c])) continue;
    remap[c] = next++;
    lens.push_back(q.lengths[c]);
    cents.insert(cents.end(), q.centroids.begin() + c * dim, q.centroids.begin() + (c + 1) * dim);
  }
  if (next == m) return;
  for (auto& a : q.assignment) a = remap[a];
  q.centroids = std::move(cents);
  q.lengths = std::move(lens);
}

QuantizerModel start_model(const PointSet& samples, std::vector<double> init) {
  check_inputs(samples, init);
  QuantizerModel q;
  q.dim = samples.dim;
  std::size_t m = init.size() / samples.dim;
  q.centroids = std::move(init);
  q.lengths.assign(m, std::log2(static_cast<double>(m)));
  return q;
}

// Per-cluster lengths Σ_j −log2 P(Y_j = bit) under `labeling`; the marginals
// come from the cluster probabilities.
std::vector<double> marginal_lengths(const std::vector<double>& probs, const PermutationTransform& labeling, int b) {
  std::size_t m = probs.size();
  std::vector<double> zero(b, 0.0);
  for (std::size_t c = 0; c < m; ++c) {
    uint32_t y = labeling.map(static_cast<uint32_t>(c));
    for (int j = 0; j < b; ++j)
      if (!((y >> (b - 1 - j)) & 1U)) zero[j] += probs[c];
  }
  std::vector<double> len(m, 0.0);
  for (std::size_t c = 0; c < m; ++c) {
    uint32_t y = labeling.map(static_cast<uint32_t>(c));
    for (int j = 0; j < b; ++j) {
      double p = ((y >> (b - 1 - j)) & 1U) ? 1.0 - zero[j] : zero[j];
      len[c] += p > 0.0 ? -std::log2(p) : kInf;
    }
  }
  return len;
}

double expected(const std::vector<double>& probs, const std::vector<double>& len) {
  double s = 0.0;
  for (std::size_t c = 0; c < probs.size(); ++c)
    if (probs[c] > 0.0) s += probs[c] * len[c];
  return s;
}

}  // namespace

std::vector<double> initial_centroids(const PointSet& samples, std::size_t m, Rng& rng) {
  std::size_t n = samples.size();
  if (m == 0 || m > n) throw std::invalid_argument("ecvq: cluster count must be in [1, n]");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < m; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);
  std::vector<double> c;
  for (std::size_t i = 0; i < m; ++i) {
    auto p = samples.point(idx[i]);
    c.insert(c.end(), p.begin(), p.end());
  }
  return c;
}

QuantizerModel ecvq(const PointSet& samples, std::vector<double> init_centroids, const EcvqOptions& options) {
  if (options.lambda < 0.0) throw std::invalid_argument("ecvq: lambda must be >= 0");
  QuantizerModel q = start_model(samples, std::move(init_centroids));
  double n = static_cast<double>(samples.size());
  double prev = kInf;
  for (int it = 0; it < options.max_iters; ++it) {
    assign(samples, q, options.lambda, q.assignment);
    auto cnt = cluster_counts(q.assignment, q.clusters());
    for (std::size_t c = 0; c < cnt.size(); ++c)
      q.lengths[c] = cnt[c] > 0 ? -std::log2(static_cast<double>(cnt[c]) / n) : kInf;
    drop_empty(q);
    update_centroids(samples, q);
    q.distortion = mean_distortion(samples, q);
    q.rate = mean_length(q);
    q.lagrangian = q.distortion + options.lambda * q.rate;
    q.trace.push_back(q.lagrangian);
    q.iterations = it + 1;
    if (prev - q.lagrangian < options.tolerance) break;
    prev = q.lagrangian;
  }
  return q;
}

QuantizerModel ecvq(const PointSet& samples, std::size_t m, const EcvqOptions& options, Rng& rng) {
  return ecvq(samples, initial_centroids(samples, m, rng), options);
}

QuantizerModel lloyd(const PointSet& samples, std::vector<double> init_centroids, int max_iters, double tolerance) {
  check_inputs(samples, init_centroids);
  int dim = samples.dim;
  std::size_t m = init_centroids.size() / dim;
  std::vector<double> cent = std::move(init_centroids);
  std::vector<uint32_t> a(samples.size());
  QuantizerModel q;
  q.dim = dim;
  double prev = kInf;
  for (int it = 0; it < max_iters; ++it) {
    std::vector<bool> alive(m, false);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      auto x = samples.point(i);
      double best = kInf;
      for (std::size_t c = 0; c < m; ++c) {
        double d = sq_dist(x, cent.data() + c * dim, dim);
        if (d < best) {
          best = d;
          a[i] = static_cast<uint32_t>(c);
        }
      }
      alive[a[i]] = true;
    }
    // Compact to the non-empty clusters, then recompute means.
    std::vector<uint32_t> remap(m);
    std::vector<double> kept;
    uint32_t next = 0;
    for (std::size_t c = 0; c < m; ++c) {
      if (!alive[c]) continue;
      remap[c] = next++;
      kept.insert(kept.end(), cent.begin() + c * dim, cent.begin() + (c + 1) * dim);
    }
    for (auto& v : a) v = remap[v];
    m = next;
    std::vector<double> sum(m * dim, 0.0);
    std::vector<uint64_t> cnt(m, 0);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      ++cnt[a[i]];
      for (int t = 0; t < dim; ++t) sum[a[i] * dim + t] += samples.point(i)[t];
    }
    for (std::size_t c = 0; c < m; ++c)
      for (int t = 0; t < dim; ++t) kept[c * dim + t] = sum[c * dim + t] / static_cast<double>(cnt[c]);
    cent = std::move(kept);
    q.centroids = cent;
    q.assignment = a;
    q.lengths.assign(m, 0.0);
    q.distortion = mean_distortion(samples, q);
    q.lagrangian = q.distortion;
    q.trace.push_back(q.distortion);
    q.iterations = it + 1;
    if (prev - q.distortion < tolerance) break;
    prev = q.distortion;
  }
  return q;
}

QuantizerModel bica_ecvq(const PointSet& samples, std::vector<double> init_centroids, const BicaEcvqOptions& options) {
  if (options.lambda < 0.0) throw std::invalid_argument("bica_ecvq: lambda must be >= 0");
  QuantizerModel q = start_model(samples, std::move(init_centroids));
  std::size_t m = q.clusters();
  if (!is_power_of_two(m)) throw std::invalid_argument("bica_ecvq: cluster count must be a power of two");
  int b = exact_log2(m);
  double n = static_cast<double>(samples.size());
  q.labeling = PermutationTransform::identity(m);
  std::optional<PiecewiseLinearBound> bound;
  if (options.k) bound = build_pwl_bound(*options.k);

  QuantizerModel best;
  bool have_best = false;
  for (int it = 0; it < options.max_iters; ++it) {
    QuantizerModel cur = q;
    cur.trace.clear();
    assign(samples, cur, options.lambda, cur.assignment);
    auto cnt = cluster_counts(cur.assignment, m);
    std::vector<double> probs(m);
    for (std::size_t c = 0; c < m; ++c) probs[c] = static_cast<double>(cnt[c]) / n;

    // γ step: keep the current labeling unless the relabeling codes shorter.
    auto keep_len = marginal_lengths(probs, cur.labeling, b);
    PermutationTransform relabel;
    if (bound) {
      relabel = relaxed_bica_binary(JointDistribution::from_probs(probs), *bound).transform;
    } else {
      relabel = order_permutation(std::span<const double>(probs));
    }
    auto new_len = marginal_lengths(probs, relabel, b);
    if (expected(probs, new_len) < expected(probs, keep_len) - 1e-12) {
      cur.labeling = relabel;
      cur.lengths = new_len;
    } else {
      cur.lengths = keep_len;
    }
    update_centroids(samples, cur);
    cur.distortion = mean_distortion(samples, cur);
    cur.rate = mean_length(cur);
    cur.lagrangian = cur.distortion + options.lambda * cur.rate;
    cur.iterations = it + 1;

    // Keep-best: stop once an iteration fails to improve the objective.
    if (have_best && cur.lagrangian >= best.lagrangian - options.tolerance) {
      if (cur.lagrangian < best.lagrangian) {
        cur.trace = std::move(best.trace);
        best = std::move(cur);
      }
      best.trace.push_back(best.lagrangian);
      break;
    }
    cur.trace = have_best ? std::move(best.trace) : std::vector<double>{};
    cur.trace.push_back(cur.lagrangian);
    best = cur;
    have_best = true;
    q = std::move(cur);
  }
  return best;
}

QuantizerModel bica_ecvq(const PointSet& samples, std::size_t m, const BicaEcvqOptions& options, Rng& rng) {
  return bica_ecvq(samples, initial_centroids(samples, m, rng), options);
}

PointSet gaussian_mixture_2d(std::size_t n, Rng& rng) {
  PointSet p;
  p.dim = 2;
  p.data.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    bool second = rng.uniform() < 0.5;
    double cx = second ? 2.0 : -2.0;
    p.data.push_back(cx + rng.normal());
    p.data.push_back(rng.normal());
  }
  return p;
}

}  // namespace gbica
