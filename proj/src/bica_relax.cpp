#include "gbica/bica_relax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gbica {

namespace {

using Fn = double (*)(double);

double hb(double p) { return binary_entropy(std::clamp(p, 0.0, 1.0)); }
double hb_prime(double p) { return std::log2((1.0 - p) / p); }
double phi(double x) { return entropy_term(x); }
double phi_prime(double x) { return -(std::log(x) + 1.0) / std::log(2.0); }

struct Concave {
  Fn f;
  Fn fp;
  double lo, hi;

  double gap(double t, double x) const { return f(t) + fp(t) * (x - t) - f(x); }

  // Smallest t in (x, hi] whose tangent is ε above f at x; hi if none.
  double tangent_for(double x, double eps) const {
    if (gap(hi, x) <= eps) return hi;
    double a = x, b = hi;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      (gap(mid, x) < eps ? a : b) = mid;
    }
    return b;
  }

  // Point y in (t, hi] where the tangent at t is ε above f; hi if never.
  double reach(double t, double eps) const {
    if (gap(t, hi) <= eps) return hi;
    double a = t, b = hi;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      (gap(t, mid) < eps ? a : b) = mid;
    }
    return a;
  }

  // Tangent points placed greedily left to right with uniform gap ε.
  std::vector<double> place(int k, double eps, double* covered) const {
    std::vector<double> pts;
    double x = lo;
    for (int i = 0; i < k; ++i) {
      double t = tangent_for(x, eps);
      pts.push_back(t);
      x = reach(t, eps);
      if (x >= hi) break;
    }
    *covered = x;
    return pts;
  }
};

PiecewiseLinearBound build_bound(const Concave& c, int k) {
  if (k < 1) throw std::invalid_argument("piecewise linear bound needs k >= 1");
  double covered = 0.0;
  double eps_hi = 1e-3;
  while (c.place(k, eps_hi, &covered), covered < c.hi) eps_hi *= 2.0;
  double eps_lo = 0.0;
  for (int it = 0; it < 100; ++it) {
    double mid = 0.5 * (eps_lo + eps_hi);
    c.place(k, mid, &covered);
    (covered >= c.hi ? eps_hi : eps_lo) = mid;
  }
  std::vector<double> pts = c.place(k, eps_hi, &covered);

  PiecewiseLinearBound b;
  b.k = static_cast<int>(pts.size());
  b.lo = c.lo;
  b.hi = c.hi;
  b.tangent_point = pts;
  for (double t : pts) {
    b.slope.push_back(c.fp(t));
    b.intercept.push_back(c.f(t) - c.fp(t) * t);
  }
  b.edge.push_back(c.lo);
  for (int r = 0; r + 1 < b.k; ++r)
    b.edge.push_back((b.intercept[r + 1] - b.intercept[r]) / (b.slope[r] - b.slope[r + 1]));
  b.edge.push_back(c.hi);
  for (int r = 0; r < b.k; ++r)
    for (double x : {b.edge[r], b.edge[r + 1]}) b.max_gap = std::max(b.max_gap, b.line(r, x) - c.f(x));
  return b;
}

// Words ordered by ascending coefficient c_w = Σ_{j : bit j of w is 0} slope[region_j],
// ties by word index. Bucketed by the per-region count of one bits.
std::vector<uint32_t> words_by_coefficient(int d, const std::vector<int>& region, const std::vector<double>& slope) {
  int k = static_cast<int>(slope.size());
  std::vector<int> count(k, 0);
  for (int r : region) ++count[r];
  std::vector<uint32_t> radix(k, 1);
  uint32_t classes = 1;
  for (int r = 0; r < k; ++r) {
    radix[r] = classes;
    classes *= static_cast<uint32_t>(count[r] + 1);
  }
  double total = 0.0;
  for (int r : region) total += slope[r];

  // Class coefficient from the ones counts per region.
  std::vector<double> class_coef(classes);
  for (uint32_t c = 0; c < classes; ++c) {
    double v = total;
    uint32_t rest = c;
    for (int r = 0; r < k; ++r) {
      uint32_t ones = rest % (count[r] + 1);
      rest /= (count[r] + 1);
      v -= ones * slope[r];
    }
    class_coef[c] = v;
  }
  std::vector<uint32_t> class_order(classes);
  std::iota(class_order.begin(), class_order.end(), 0U);
  std::sort(class_order.begin(), class_order.end(), [&](uint32_t a, uint32_t b) {
    return class_coef[a] < class_coef[b];
  });
  // Classes with equal coefficients share a bucket so ties fall back to word index.
  std::vector<uint32_t> bucket(classes);
  uint32_t nb = 0;
  for (uint32_t i = 0; i < classes; ++i) {
    if (i > 0 && class_coef[class_order[i]] != class_coef[class_order[i - 1]]) ++nb;
    bucket[class_order[i]] = nb;
  }
  ++nb;

  std::size_t m = std::size_t{1} << d;
  std::vector<uint32_t> cls(m, 0);
  for (std::size_t w = 1; w < m; ++w) {
    int low = __builtin_ctzll(w);
    int component = d - 1 - low;
    cls[w] = cls[w & (w - 1)] + radix[region[component]];
  }
  std::vector<uint32_t> start(nb + 1, 0);
  for (std::size_t w = 0; w < m; ++w) ++start[bucket[cls[w]] + 1];
  for (uint32_t i = 0; i < nb; ++i) start[i + 1] += start[i];
  std::vector<uint32_t> out(m);
  for (std::size_t w = 0; w < m; ++w) out[start[bucket[cls[w]]]++] = static_cast<uint32_t>(w);
  return out;
}

std::vector<double> zero_marginals(int d, std::span<const double> q) {
  std::vector<double> pi(d, 0.0);
  for (std::size_t w = 0; w < q.size(); ++w) {
    if (q[w] == 0.0) continue;
    for (int j = 0; j < d; ++j)
      if (!((w >> (d - 1 - j)) & 1U)) pi[j] += q[w];
  }
  return pi;
}

struct Evaluation {
  bool feasible = false;
  double true_value = 0.0;
  double linear_value = 0.0;
};

// Core of one region assignment; fills `table` only when asked.
Evaluation evaluate_assignment(int d, std::span<const double> probs, const std::vector<uint32_t>& descending,
                               const PiecewiseLinearBound& bound, const std::vector<int>& region,
                               std::vector<double>* pi_out, std::vector<uint32_t>* table) {
  auto words = words_by_coefficient(d, region, bound.slope);
  std::size_t m = probs.size();
  std::vector<double> q(m);
  for (std::size_t t = 0; t < m; ++t) q[words[t]] = probs[descending[t]];
  if (table) {
    table->assign(m, 0);
    for (std::size_t t = 0; t < m; ++t) (*table)[descending[t]] = words[t];
  }
  auto pi = zero_marginals(d, q);
  Evaluation e;
  e.feasible = true;
  for (int j = 0; j < d; ++j) {
    double p = std::clamp(pi[j], 0.0, 1.0);
    e.true_value += binary_entropy(p);
    e.linear_value += bound.line(region[j], p);
    if (!bound.in_region(region[j], p)) e.feasible = false;
  }
  if (pi_out) *pi_out = std::move(pi);
  return e;
}

std::vector<uint32_t> descending_symbols(std::span<const double> p) {
  std::vector<uint32_t> idx(p.size());
  std::iota(idx.begin(), idx.end(), 0U);
  std::stable_sort(idx.begin(), idx.end(), [&](uint32_t a, uint32_t b) { return p[a] > p[b]; });
  return idx;
}

std::vector<int> expand_counts(const std::vector<int>& counts) {
  std::vector<int> region;
  for (std::size_t r = 0; r < counts.size(); ++r) region.insert(region.end(), counts[r], static_cast<int>(r));
  return region;
}

void multisets_rec(int left, int r, int k, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (r == k - 1) {
    cur[r] = left;
    out.push_back(cur);
    return;
  }
  for (int c = left; c >= 0; --c) {
    cur[r] = c;
    multisets_rec(left - c, r + 1, k, cur, out);
  }
}

}  // namespace

double PiecewiseLinearBound::eval(double p) const {
  double v = std::numeric_limits<double>::infinity();
  for (int r = 0; r < k; ++r) v = std::min(v, line(r, p));
  return v;
}

int PiecewiseLinearBound::region_of(double p) const {
  auto it = std::lower_bound(edge.begin() + 1, edge.end() - 1, p);
  return static_cast<int>(it - (edge.begin() + 1));
}

PiecewiseLinearBound build_pwl_bound(int k) { return build_bound(Concave{hb, hb_prime, 0.0, 0.5}, k); }

PiecewiseLinearBound build_phi_bound(int k) { return build_bound(Concave{phi, phi_prime, 0.0, 1.0}, k); }

double pwl_objective(const JointDistribution& dist, const PermutationTransform& t, const PiecewiseLinearBound& bound) {
  double v = 0.0;
  for (double p : t.apply(dist).marginal_bit_probs()) v += bound.eval(std::min(p, 1.0 - p));
  return v;
}

std::vector<std::vector<int>> region_multisets(int d, int k) {
  if (d < 0 || k < 1) throw std::invalid_argument("region_multisets: need d >= 0 and k >= 1");
  std::vector<std::vector<int>> out;
  std::vector<int> cur(k, 0);
  multisets_rec(d, 0, k, cur, out);
  return out;
}

RelaxedCandidate solve_region_assignment(const JointDistribution& dist, const PiecewiseLinearBound& bound,
                                         const std::vector<int>& region_per_component) {
  int d = dist.components();
  if (static_cast<int>(region_per_component.size()) != d) throw std::invalid_argument("one region per component required");
  for (int r : region_per_component)
    if (r < 0 || r >= bound.k) throw std::invalid_argument("region index out of range");
  auto desc = descending_symbols(dist.probs());
  RelaxedCandidate c;
  c.region = region_per_component;
  std::vector<uint32_t> table;
  auto e = evaluate_assignment(d, dist.probs(), desc, bound, c.region, &c.pi, &table);
  c.linear_value = e.linear_value;
  c.feasible = e.feasible;
  c.transform = PermutationTransform::from_table(std::move(table));
  return c;
}

RelaxedResult relaxed_bica_binary(const JointDistribution& dist, int k, const RelaxOptions& options) {
  return relaxed_bica_binary(dist, build_pwl_bound(k), options);
}

RelaxedResult relaxed_bica_binary(const JointDistribution& dist, const PiecewiseLinearBound& bound,
                                  const RelaxOptions& options) {
  if (dist.radix() != 2) throw std::invalid_argument("relaxed_bica_binary requires a binary alphabet");
  int d = dist.components();
  if (d > options.max_d) throw std::invalid_argument("relaxed BICA limited to d <= " + std::to_string(options.max_d));
  if (bound.k > options.max_k) throw std::invalid_argument("relaxed BICA limited to k <= " + std::to_string(options.max_k));
  auto sets = region_multisets(d, bound.k);
  auto desc = descending_symbols(dist.probs());
  std::vector<Evaluation> evals(sets.size());
  parallel_for(sets.size(), [&](std::size_t i) {
    evals[i] = evaluate_assignment(d, dist.probs(), desc, bound, expand_counts(sets[i]), nullptr, nullptr);
  });

  RelaxedResult res;
  res.assignments = sets.size();
  std::size_t best = sets.size();
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (!evals[i].feasible) continue;
    ++res.feasible;
    if (best == sets.size() || evals[i].true_value < evals[best].true_value) best = i;
  }
  if (best == sets.size())
    throw std::logic_error("relaxed BICA: every region assignment was infeasible (bound does not cover [0, 1/2])");
  std::vector<uint32_t> table;
  auto e = evaluate_assignment(d, dist.probs(), desc, bound, expand_counts(sets[best]), &res.pi, &table);
  res.transform = PermutationTransform::from_table(std::move(table));
  res.sum_marginal = e.true_value;
  res.pwl_value = e.linear_value;
  double c = e.true_value - dist.entropy();
  res.cost = c < 0.0 && c > -1e-12 ? 0.0 : c;
  return res;
}

CoefficientRows coefficient_rows(int d, int k, const PiecewiseLinearBound& bound, std::size_t budget) {
  if (bound.k != k) throw std::invalid_argument("coefficient_rows: bound has a different piece count");
  if (d < 1 || d > 30) throw std::invalid_argument("coefficient_rows: d out of range");
  auto sets = region_multisets(d, k);
  std::size_t m = std::size_t{1} << d;
  if (sets.size() > budget / m)
    throw std::length_error("coefficient_rows: " + std::to_string(sets.size()) + " x " + std::to_string(m) +
                            " entries exceed the budget of " + std::to_string(budget));
  CoefficientRows out;
  for (const auto& counts : sets) {
    auto region = expand_counts(counts);
    std::vector<double> row(m, 0.0);
    for (std::size_t w = 0; w < m; ++w)
      for (int j = 0; j < d; ++j)
        if (!((w >> (d - 1 - j)) & 1U)) row[w] += bound.slope[region[j]];
    std::vector<double> u = row;
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    out.unique_total.push_back(u.size());
    out.unique_nonzero.push_back(static_cast<std::size_t>(std::count_if(u.begin(), u.end(), [](double v) { return v != 0.0; })));
    out.counts.push_back(counts);
    out.rows.push_back(std::move(row));
  }
  return out;
}

namespace {

// q-ary cell: one region per (component, value). Solves the sorted linear
// assignment for that cell and reports the cell the solution lies in.
struct QaryStep {
  std::vector<uint32_t> table;
  std::vector<int> solution_cell;
  double linear_value = 0.0;
  double true_value = 0.0;
  bool inside = false;
};

QaryStep qary_step(const JointDistribution& dist, const std::vector<uint32_t>& desc, const PiecewiseLinearBound& bound,
                   const std::vector<int>& cell) {
  int d = dist.components();
  int q = dist.radix();
  std::size_t m = dist.size();
  std::vector<double> coef(m, 0.0);
  for (std::size_t w = 0; w < m; ++w) {
    std::size_t v = w;
    for (int j = d - 1; j >= 0; --j) {
      coef[w] += bound.slope[cell[j * q + static_cast<int>(v % q)]];
      v /= q;
    }
  }
  std::vector<uint32_t> words(m);
  std::iota(words.begin(), words.end(), 0U);
  std::stable_sort(words.begin(), words.end(), [&](uint32_t a, uint32_t b) { return coef[a] < coef[b]; });
  QaryStep s;
  s.table.assign(m, 0);
  std::vector<double> qv(m);
  for (std::size_t t = 0; t < m; ++t) {
    s.table[desc[t]] = words[t];
    qv[words[t]] = dist[desc[t]];
  }
  auto y = JointDistribution::from_weights(qv, q);
  auto marg = y.component_marginals();
  s.inside = true;
  s.solution_cell.resize(cell.size());
  for (int j = 0; j < d; ++j)
    for (int v = 0; v < q; ++v) {
      double p = std::clamp(marg[j][v], 0.0, 1.0);
      int r = cell[j * q + v];
      s.linear_value += bound.line(r, p);
      s.true_value += entropy_term(p);
      s.solution_cell[j * q + v] = bound.region_of(p);
      if (!bound.in_region(r, p)) s.inside = false;
    }
  return s;
}

}  // namespace

DescentResult objective_descent_qary(const JointDistribution& dist, const DescentOptions& options) {
  if (options.n_init < 1) throw std::invalid_argument("descent needs at least one initial cell");
  int d = dist.components();
  int q = dist.radix();
  DescentResult res;
  double best_recorded = std::numeric_limits<double>::infinity();
  double best_any = std::numeric_limits<double>::infinity();
  std::vector<uint32_t> table_recorded, table_any;

  if (q == 2) {
    auto bound = build_pwl_bound(options.k);
    auto desc = descending_symbols(dist.probs());
    for (int r = 0; r < options.n_init; ++r) {
      Rng rng(derive_seed(options.seed, static_cast<uint64_t>(r)));
      std::vector<int> cell(d);
      for (auto& c : cell) c = static_cast<int>(rng.below(bound.k));
      std::vector<double> trace;
      for (int step = 0; step < options.max_steps; ++step) {
        std::vector<double> pi;
        std::vector<uint32_t> table;
        auto e = evaluate_assignment(d, dist.probs(), desc, bound, cell, &pi, &table);
        trace.push_back(e.linear_value);
        if (e.true_value < best_any) {
          best_any = e.true_value;
          table_any = table;
        }
        if (e.feasible) {
          ++res.recorded;
          if (e.true_value < best_recorded) {
            best_recorded = e.true_value;
            table_recorded = std::move(table);
          }
          break;
        }
        std::vector<int> next(d);
        for (int j = 0; j < d; ++j) next[j] = bound.region_of(std::min(pi[j], 1.0 - pi[j]));
        if (next == cell) break;
        cell = std::move(next);
      }
      res.traces.push_back(std::move(trace));
    }
  } else {
    auto bound = build_phi_bound(options.k);
    auto desc = descending_symbols(dist.probs());
    for (int r = 0; r < options.n_init; ++r) {
      Rng rng(derive_seed(options.seed, static_cast<uint64_t>(r)));
      std::vector<int> cell(static_cast<std::size_t>(d) * q);
      for (auto& c : cell) c = static_cast<int>(rng.below(bound.k));
      std::vector<double> trace;
      for (int step = 0; step < options.max_steps; ++step) {
        auto s = qary_step(dist, desc, bound, cell);
        trace.push_back(s.linear_value);
        if (s.true_value < best_any) {
          best_any = s.true_value;
          table_any = s.table;
        }
        if (s.inside) {
          ++res.recorded;
          if (s.true_value < best_recorded) {
            best_recorded = s.true_value;
            table_recorded = std::move(s.table);
          }
          break;
        }
        if (s.solution_cell == cell) break;
        cell = std::move(s.solution_cell);
      }
      res.traces.push_back(std::move(trace));
    }
  }

  res.transform = PermutationTransform::from_table(res.recorded ? std::move(table_recorded) : std::move(table_any));
  res.sum_marginal = res.transform.apply(dist).sum_marginal_entropies();
  double c = res.sum_marginal - dist.entropy();
  res.cost = c < 0.0 && c > -1e-12 ? 0.0 : c;
  return res;
}

}  // namespace gbica
