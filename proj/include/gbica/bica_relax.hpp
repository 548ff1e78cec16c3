#pragma once

// Relaxation of Σ_j h_b(π_j) by a piecewise-linear concave upper bound,
// giving one sorted linear assignment per combination of regions.

#include <cstdint>
#include <functional>
#include <vector>

#include "gbica/prob_model.hpp"
#include "gbica/transforms.hpp"

namespace gbica {

/// min over k tangent lines of a concave function on [lo, hi]. Region r is
/// [edge[r], edge[r+1]], where line r is the active (smallest) one.
struct PiecewiseLinearBound {
  int k = 0;
  double lo = 0.0, hi = 0.0;
  std::vector<double> tangent_point;
  std::vector<double> slope;
  std::vector<double> intercept;
  std::vector<double> edge;  // k + 1 entries, edge[0] = lo, edge[k] = hi
  double max_gap = 0.0;      // sup over [lo, hi] of bound − f

  double eval(double p) const;
  double line(int r, double p) const { return slope[r] * p + intercept[r]; }
  /// Region containing p (the lowest index when p sits on an edge).
  int region_of(double p) const;
  bool in_region(int r, double p, double eps = 1e-12) const {
    return p >= edge[r] - eps && p <= edge[r + 1] + eps;
  }
};

/// k tangents to h_b on [0, 1/2] placed so every piece has the same maximal gap.
PiecewiseLinearBound build_pwl_bound(int k);

/// Same construction for φ(x) = −x log2 x on [0, 1].
PiecewiseLinearBound build_phi_bound(int k);

/// Σ_j bound(min(π_j, 1 − π_j)) for the transformed distribution.
double pwl_objective(const JointDistribution& dist, const PermutationTransform& t, const PiecewiseLinearBound& bound);

/// All multisets of d components over k regions, as per-region counts.
std::vector<std::vector<int>> region_multisets(int d, int k);

/// One linear subproblem: components are grouped by region in index order
/// (counts[0] components in region 0 first, msb first).
struct RelaxedCandidate {
  std::vector<int> region;       // per component
  std::vector<double> pi;        // P(Y_j = 0) of the sorted-assignment solution
  double linear_value = 0.0;     // Σ_j line_{region_j}(π_j)
  bool feasible = false;         // every π_j inside its region
  PermutationTransform transform;
};

RelaxedCandidate solve_region_assignment(const JointDistribution& dist, const PiecewiseLinearBound& bound,
                                         const std::vector<int>& region_per_component);

struct RelaxOptions {
  int max_d = 16;
  int max_k = 16;
};

struct RelaxedResult {
  PermutationTransform transform;
  std::vector<double> pi;  // recovered parameters of the chosen solution
  double sum_marginal = 0.0;
  double cost = 0.0;
  double pwl_value = 0.0;
  std::size_t assignments = 0;
  std::size_t feasible = 0;
};

RelaxedResult relaxed_bica_binary(const JointDistribution& dist, int k, const RelaxOptions& options = {});
RelaxedResult relaxed_bica_binary(const JointDistribution& dist, const PiecewiseLinearBound& bound,
                                  const RelaxOptions& options = {});

struct CoefficientRows {
  std::vector<std::vector<int>> counts;       // region counts per row
  std::vector<std::vector<double>> rows;      // c_w for every word w
  std::vector<std::size_t> unique_nonzero;    // distinct nonzero c_w per row
  std::vector<std::size_t> unique_total;      // distinct c_w per row
};

/// Coefficient matrix, one row per region multiset. Throws std::length_error
/// when rows × 2^d exceeds `budget` entries.
CoefficientRows coefficient_rows(int d, int k, const PiecewiseLinearBound& bound, std::size_t budget = std::size_t{1} << 26);

struct DescentOptions {
  int k = 8;
  int n_init = 20;
  int max_steps = 1000;
  uint64_t seed = 1;
};

struct DescentResult {
  PermutationTransform transform;
  double sum_marginal = 0.0;
  double cost = 0.0;
  std::size_t recorded = 0;                 // restarts that ended inside their cell
  std::vector<std::vector<double>> traces;  // linear objective per visited cell, per restart
};

/// Cell-hopping descent on the relaxed objective for q-ary components.
/// For q = 2 the cells are binary region assignments.
DescentResult objective_descent_qary(const JointDistribution& dist, const DescentOptions& options);

}  // namespace gbica
