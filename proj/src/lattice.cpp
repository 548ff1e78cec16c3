#include "gbica/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "gbica/arithmetic.hpp"
#include "gbica/prob_model.hpp"
#include "gbica/transforms.hpp"

namespace gbica {

namespace {

double ball_volume(int d, double r) {
  return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0) * std::pow(r, d);
}

}  // namespace

std::vector<int64_t> nearest_lattice_point(std::span<const double> x, LatticeFamily family, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("lattice: delta must be > 0");
  std::size_t d = x.size();
  std::vector<int64_t> p(d);
  int64_t parity = 0;
  std::size_t worst = 0;
  double worst_err = -1.0;
  for (std::size_t t = 0; t < d; ++t) {
    double u = x[t] / delta;
    p[t] = static_cast<int64_t>(std::llround(u));
    parity += p[t];
    double err = std::abs(u - static_cast<double>(p[t]));
    if (err > worst_err) {
      worst_err = err;
      worst = t;
    }
  }
  if (family == LatticeFamily::Checkerboard && (parity & 1)) {
    // Round the worst coordinate the other way.
    double u = x[worst] / delta;
    p[worst] += u > static_cast<double>(p[worst]) ? 1 : -1;
  }
  return p;
}

LatticeResult lattice_quantize(const PointSet& samples, const LatticeSpec& spec) {
  if (!(spec.delta > 0.0)) throw std::invalid_argument("lattice: delta must be > 0");
  if (!(spec.radius > 0.0)) throw std::invalid_argument("lattice: radius must be > 0");
  int dim = samples.dim;
  std::size_t n = samples.size();
  if (n == 0) throw std::invalid_argument("lattice: no samples");

  double sigma;
  if (spec.sigma) {
    sigma = *spec.sigma;
  } else {
    // Mean per-dimension standard deviation.
    double acc = 0.0;
    for (int t = 0; t < dim; ++t) {
      double mu = 0.0, sq = 0.0;
      for (std::size_t i = 0; i < n; ++i) mu += samples.point(i)[t];
      mu /= static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) sq += (samples.point(i)[t] - mu) * (samples.point(i)[t] - mu);
      acc += std::sqrt(sq / static_cast<double>(n));
    }
    sigma = acc / dim;
  }
  double R = spec.radius * sigma;

  LatticeResult res;
  res.points.resize(n * dim);
  res.symbols.resize(n);
  std::map<std::vector<int64_t>, uint32_t> cells;
  CompensatedSum err;
  std::vector<double> y(dim);
  for (std::size_t i = 0; i < n; ++i) {
    auto x = samples.point(i);
    double norm = 0.0;
    for (int t = 0; t < dim; ++t) norm += x[t] * x[t];
    norm = std::sqrt(norm);
    double scale = norm > R ? R / norm : 1.0;  // outside the sphere: project to its surface
    for (int t = 0; t < dim; ++t) y[t] = x[t] * scale;
    auto p = nearest_lattice_point(y, spec.family, spec.delta);
    for (int t = 0; t < dim; ++t) {
      res.points[i * dim + t] = p[t];
      double e = x[t] - static_cast<double>(p[t]) * spec.delta;
      err.add(e * e);
    }
    auto [it, inserted] = cells.emplace(p, static_cast<uint32_t>(cells.size()));
    if (inserted) res.counts.push_back(0);
    ++res.counts[it->second];
    res.symbols[i] = it->second;
  }
  res.distortion = err.value() / static_cast<double>(n * dim);
  res.joint_entropy = entropy_of_counts(res.counts, n);

  std::vector<double> w(res.counts.begin(), res.counts.end());
  std::size_t labels = std::size_t{1} << std::max(1, bits_for(w.size()));
  w.resize(labels, 0.0);
  auto dist = JointDistribution::from_weights(w);
  res.marginal_sum = order_permutation(dist).apply(dist).sum_marginal_entropies();

  double cell_volume = std::pow(spec.delta, dim) * (spec.family == LatticeFamily::Checkerboard ? 2.0 : 1.0);
  res.lattice_points = std::max(static_cast<double>(res.counts.size()), ball_volume(dim, R) / cell_volume);
  // Ideal KT length with alphabet size M = lattice points in the sphere.
  double M = res.lattice_points;
  double bits = 0.0;
  std::vector<uint64_t> seen(res.counts.size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    uint32_t s = res.symbols[i];
    bits -= std::log2((static_cast<double>(seen[s]) + 0.5) / (static_cast<double>(i) + M / 2.0));
    ++seen[s];
  }
  res.adaptive_bits = bits + 2.0;
  return res;
}

double gaussian_rate_distortion(int d, double D) {
  if (d < 1) throw std::invalid_argument("rate-distortion: d must be >= 1");
  if (!(D > 0.0)) throw std::invalid_argument("rate-distortion: D must be > 0");
  return std::max(d / 2.0 * std::log2(d / D), 0.0);
}

PointSet standard_normal(std::size_t n, int dim, Rng& rng) {
  PointSet p;
  p.dim = dim;
  p.data.resize(n * dim);
  for (auto& v : p.data) v = rng.normal();
  return p;
}

}  // namespace gbica
