#pragma once

// Fixed lattice quantizers (Z^d, D_d) inside a sphere, with entropy accounting
// of the occupied cells.

#include <cstdint>
#include <optional>
#include <vector>

#include "gbica/ecvq.hpp"

namespace gbica {

enum class LatticeFamily { Cubic, Checkerboard };  // Z^d, D_d

struct LatticeSpec {
  LatticeFamily family = LatticeFamily::Cubic;
  double delta = 1.0;
  double radius = 5.0;              // in units of σ
  std::optional<double> sigma;      // estimated from the sample when absent
};

struct LatticeResult {
  std::vector<int64_t> points;      // lattice coordinates in units of Δ, dim per sample
  std::vector<uint32_t> symbols;    // occupied-cell index per sample (first appearance order)
  std::vector<uint64_t> counts;     // per occupied cell
  double distortion = 0.0;          // mean squared error per dimension
  double joint_entropy = 0.0;       // Ĥ of the cell index, bits per sample
  double marginal_sum = 0.0;        // Σ_j Ĥ(Y_j) after the order permutation, bits per sample
  double lattice_points = 0.0;      // lattice points inside the sphere (volume estimate)
  double adaptive_bits = 0.0;       // ideal adaptive (KT) length over the sphere's lattice points + 2
};

/// Nearest point of Z^d or D_d to x / Δ, in lattice units.
std::vector<int64_t> nearest_lattice_point(std::span<const double> x, LatticeFamily family, double delta);

LatticeResult lattice_quantize(const PointSet& samples, const LatticeSpec& spec);

/// max{(d/2) log2(d/D), 0} for a unit-variance Gaussian in d dimensions; D is the total distortion.
double gaussian_rate_distortion(int d, double D);

PointSet standard_normal(std::size_t n, int dim, Rng& rng);

}  // namespace gbica
