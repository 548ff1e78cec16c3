#pragma once

// Entropy-constrained vector quantization: Lloyd-style alternation of biased
// assignment, code lengths and centroids minimizing E{D} + λ E{l}.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gbica/common.hpp"
#include "gbica/transforms.hpp"

namespace gbica {

/// n points of dimension dim, row-major.
struct PointSet {
  int dim = 1;
  std::vector<double> data;
  std::size_t size() const { return dim > 0 ? data.size() / static_cast<std::size_t>(dim) : 0; }
  std::span<const double> point(std::size_t i) const { return {data.data() + i * dim, static_cast<std::size_t>(dim)}; }
};

struct QuantizerModel {
  int dim = 1;
  std::vector<double> centroids;  // cluster-major, dim values each
  std::vector<double> lengths;    // |γ(i)| in bits
  std::vector<uint32_t> assignment;
  std::vector<double> trace;      // Lagrangian after each iteration
  double distortion = 0.0;        // mean squared error per sample
  double rate = 0.0;              // mean code length, bits per sample
  double lagrangian = 0.0;
  int iterations = 0;
  /// Cluster relabeling used by the marginal code (BICA-ECVQ only).
  PermutationTransform labeling;

  std::size_t clusters() const { return lengths.size(); }
};

struct EcvqOptions {
  double lambda = 0.0;
  int max_iters = 100;
  double tolerance = 1e-9;
};

/// m distinct samples chosen uniformly as starting centroids.
std::vector<double> initial_centroids(const PointSet& samples, std::size_t m, Rng& rng);

QuantizerModel ecvq(const PointSet& samples, std::vector<double> init_centroids, const EcvqOptions& options);
QuantizerModel ecvq(const PointSet& samples, std::size_t m, const EcvqOptions& options, Rng& rng);

/// Plain Lloyd iterations; the trace holds the mean squared error.
QuantizerModel lloyd(const PointSet& samples, std::vector<double> init_centroids, int max_iters, double tolerance = 1e-9);

struct BicaEcvqOptions : EcvqOptions {
  /// Relaxed BICA with this many pieces; order permutation when absent.
  std::optional<int> k;
};

/// Cluster indices are coded as b independent bits after relabeling; the
/// objective is E{D} + λ Σ_j H(Y_j). Requires a power-of-two cluster count.
QuantizerModel bica_ecvq(const PointSet& samples, std::vector<double> init_centroids, const BicaEcvqOptions& options);
QuantizerModel bica_ecvq(const PointSet& samples, std::size_t m, const BicaEcvqOptions& options, Rng& rng);

/// Two-component isotropic Gaussian mixture in 2-D used by the ECVQ experiments.
PointSet gaussian_mixture_2d(std::size_t n, Rng& rng);

}  // namespace gbica
