// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: gbica_acceptance [--criterion N]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "gbica/arithmetic.hpp"
#include "gbica/bica_exact.hpp"
#include "gbica/bica_linear.hpp"
#include "gbica/bica_relax.hpp"
#include "gbica/block_pipeline.hpp"
#include "gbica/ecvq.hpp"
#include "gbica/gf2.hpp"
#include "gbica/huffman.hpp"
#include "gbica/lattice.hpp"
#include "gbica/order_theory.hpp"
#include "gbica/permutation_coding.hpp"
#include "gbica/prob_model.hpp"
#include "gbica/redundancy.hpp"
#include "gbica/stream_format.hpp"
#include "gbica/transforms.hpp"

using namespace gbica;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

// Σ_j h_b of the table-permuted distribution.
double marginal_sum(const JointDistribution& dist, const std::vector<uint32_t>& table) {
  std::vector<double> q(dist.size());
  for (std::size_t x = 0; x < dist.size(); ++x) q[table[x]] = dist[x];
  return JointDistribution::from_probs(q).sum_marginal_entropies();
}

// Minimum over all 8! relabelings of 3 bits.
double brute_force_min(const JointDistribution& dist) {
  std::vector<uint32_t> perm(8);
  std::iota(perm.begin(), perm.end(), 0);
  double best = 1e300;
  do {
    best = std::min(best, marginal_sum(dist, perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<BinaryMatrix> invertible_matrices(int d) {
  std::vector<BinaryMatrix> out;
  uint64_t total = uint64_t{1} << (d * d);
  for (uint64_t code = 0; code < total; ++code) {
    std::vector<uint64_t> rows(d);
    for (int r = 0; r < d; ++r) rows[r] = (code >> (r * d)) & ((uint64_t{1} << d) - 1);
    BinaryMatrix w(d, rows);
    if (w.invertible()) out.push_back(w);
  }
  return out;
}

// Σ marginals of Wx minimized over the given matrices.
double exhaustive_linear_min(const JointDistribution& dist, const std::vector<BinaryMatrix>& all) {
  double best = 1e300;
  for (const auto& w : all) best = std::min(best, linear_cost(dist, w) + dist.entropy());
  return best;
}

Outcome criterion1() {
  Outcome o;
  Rng rng(101);
  CompensatedSum h16;
  const int draws16 = 200000;
  for (int i = 0; i < draws16; ++i) h16.add(gen_uniform_simplex(16, rng).entropy());
  double mc = h16.value() / draws16;
  double th = expected_joint_entropy(16);
  o.check(std::abs(mc - th) <= 0.005, "m=16 Monte-Carlo vs closed form");
  double gap = asymptotic_entropy_gap();
  double psi2 = 1.0 - 0.57721566490153286;
  o.check(std::abs(gap - psi2 / std::log(2.0)) < 1e-12 && std::abs(gap - 0.6099) < 5e-5, "asymptotic gap 0.6099");
  CompensatedSum g10;
  const int draws10 = 2000;
  for (int i = 0; i < draws10; ++i) {
    auto p = gen_uniform_simplex(1024, rng);
    g10.add(p.sum_marginal_entropies() - p.entropy());
  }
  double mean_gap = g10.value() / draws10;
  o.check(mean_gap >= 0.55 && mean_gap <= 0.61, "d=10 mean no-transform gap in [0.55, 0.61]");
  o.detail << "E[H] m=16: mc=" << mc << " closed=" << th << "; gap_inf=" << gap << "; d=10 mean gap=" << mean_gap;
  return o;
}

Outcome criterion2() {
  Outcome o;
  Rng rng(202);
  const int draws = 2000;
  CompensatedSum c10, c12;
  for (int i = 0; i < draws; ++i) {
    auto p = gen_uniform_simplex(1024, rng);
    c10.add(cost(p, order_permutation(p)));
  }
  for (int i = 0; i < draws; ++i) {
    auto p = gen_uniform_simplex(4096, rng);
    c12.add(cost(p, block_order_permutation(p, 10)));
  }
  double m10 = c10.value() / draws, m12 = c12.value() / draws;
  o.check(m10 <= 0.0162 + 0.004, "d=10 order permutation mean cost");
  o.check(m12 <= 0.0162 + std::ldexp(1.0, -10) + 0.004, "d=12 b=10 block order mean cost");
  o.detail << "mean C d=10: " << m10 << "; mean C d=12,b=10: " << m12;
  return o;
}

Outcome criterion3() {
  Outcome o;
  for (uint64_t m : {uint64_t{16}, uint64_t{256}, uint64_t{65536}}) {
    auto p = worst_case_distribution(m);
    double direct = cost(p, order_permutation(p));
    // Proof expression: d·h_b(m/(6(m−1))) − H(p̃), H(p̃) = (1/3)log2(3(m−1)) − (2/3)log2(2/3).
    double md = static_cast<double>(m);
    double h = std::log2(3.0 * (md - 1.0)) / 3.0 - 2.0 / 3.0 * std::log2(2.0 / 3.0);
    double proof = std::log2(md) * binary_entropy(md / (6.0 * (md - 1.0))) - h;
    o.check(std::abs(direct - proof) <= 1e-9, "closed form at m=" + std::to_string(m));
    o.check(std::abs(direct - worst_case_cost(m)) <= 1e-9, "library closed form at m=" + std::to_string(m));
    if (m == 65536) {
      double ratio = direct / 16.0;
      o.check(std::abs(ratio - proof / 16.0) <= 0.01, "C/log2 m at m=2^16");
      o.detail << "C/log2 m (m=2^16)=" << ratio << " proof=" << proof / 16.0 << " limit=" << worst_case_slope()
               << "; ";
    }
    o.detail << "m=" << m << " C=" << direct << " ";
  }
  return o;
}

Outcome criterion4() {
  Outcome o;
  Rng rng(404);
  int exact = 0, order_ok = 0, relax_close = 0, relax_never_below = 0;
  const int instances = 100;
  auto bound = build_pwl_bound(8);
  for (int i = 0; i < instances; ++i) {
    auto p = gen_uniform_simplex(8, rng);
    double opt = brute_force_min(p);
    auto bnb = branch_and_bound_optimal(p);
    if (std::abs(bnb.sum_marginal - opt) <= 1e-12) ++exact;
    double ord = order_permutation(p).apply(p).sum_marginal_entropies();
    if (ord >= opt - 1e-12) ++order_ok;
    auto r = relaxed_bica_binary(p, bound);
    if (r.sum_marginal >= opt - 1e-12) ++relax_never_below;
    if (r.sum_marginal - opt <= 0.05) ++relax_close;
  }
  o.check(exact == instances, "branch-and-bound equals exhaustive minimum");
  o.check(order_ok == instances, "order permutation never below optimum");
  o.check(relax_never_below == instances, "relaxed never below optimum");
  o.check(relax_close >= 90, "relaxed within 0.05 bits in >= 90%");
  o.detail << "bnb exact " << exact << "/100; order>=opt " << order_ok << "/100; relaxed within 0.05: " << relax_close
           << "/100, never below: " << relax_never_below << "/100";
  return o;
}

Outcome criterion5() {
  Outcome o;
  Rng rng(505);
  int bracket2 = 0, bracket4 = 0;
  const int instances = 50;
  auto all2 = invertible_matrices(2), all4 = invertible_matrices(4);
  o.check(all2.size() == 6 && all4.size() == 20160, "invertible matrix counts");
  for (int i = 0; i < instances; ++i) {
    auto p = gen_uniform_simplex(4, rng);
    double lb = linear_lower_bound(p);
    double ex = exhaustive_linear_min(p, all2);
    double gr = greedy_linear_bica(p).sum_marginal;
    if (lb <= ex + 1e-12 && ex <= gr + 1e-12) ++bracket2;
  }
  for (int i = 0; i < instances; ++i) {
    auto p = gen_uniform_simplex(16, rng);
    double lb = linear_lower_bound(p);
    double ex = exhaustive_linear_min(p, all4);
    double gr = greedy_linear_bica(p).sum_marginal;
    if (lb <= ex + 1e-12 && ex <= gr + 1e-12) ++bracket4;
  }
  o.check(bracket2 == instances, "d=2 bracket");
  o.check(bracket4 == instances, "d=4 bracket");
  bool extra_ok = true;
  for (int d = 1; d <= 32; ++d) extra_ok = extra_ok && expected_row_draws(d) - d <= 2.0;
  double extra32 = expected_row_draws(32) - 32;
  o.check(extra_ok, "expected_row_draws extra <= 2");
  o.check(std::abs(extra32 - 1.606) <= 0.001, "d=32 extra 1.606");
  o.detail << "d=2 bracketed " << bracket2 << "/50; d=4 bracketed " << bracket4 << "/50; extra(32)=" << extra32;
  return o;
}

// Random dyadic distribution from a random full binary tree.
std::vector<double> random_dyadic(Rng& rng, std::size_t leaves) {
  std::vector<int> depth = {0};
  while (depth.size() < leaves) {
    std::size_t i = rng.below(depth.size());
    int dd = depth[i] + 1;
    depth[i] = dd;
    depth.push_back(dd);
  }
  std::vector<double> p;
  for (int dd : depth) p.push_back(std::ldexp(1.0, -dd));
  return p;
}

std::vector<double> random_probs(Rng& rng, std::size_t m) {
  std::vector<double> p(m);
  double t = 0.0;
  for (auto& v : p) t += (v = rng.exponential());
  for (auto& v : p) v /= t;
  return p;
}

Outcome criterion6() {
  Outcome o;
  Rng rng(606);
  int in_range = 0, dyadic_eq = 0;
  for (int i = 0; i < 1000; ++i) {
    auto p = random_probs(rng, 2 + rng.below(255));
    double h = entropy(p);
    double l = huffman_build(p).average_length(p);
    if (l >= h - 1e-12 && l < h + 1.0) ++in_range;
    auto q = random_dyadic(rng, 2 + rng.below(63));
    double hq = entropy(q);
    double lq = huffman_build(q).average_length(q);
    if (std::abs(lq - hq) <= 1e-12) ++dyadic_eq;
  }
  o.check(in_range == 1000, "Huffman length in [H, H+1)");
  o.check(dyadic_eq == 1000, "Huffman length = H on dyadic inputs");

  // A:11 B:0 C:101 D:100 -> B:0 A:10 C:110 D:111
  HuffmanCodebook abcd;
  abcd.lengths = {2, 1, 3, 3};
  abcd.codes = {0b11, 0b0, 0b101, 0b100};
  auto can = canonicalize(abcd).to_codebook();
  bool table_ok = can.lengths == std::vector<uint8_t>{2, 1, 3, 3} &&
                  can.codes == std::vector<uint64_t>{0b10, 0b0, 0b110, 0b111};
  o.check(table_ok, "canonical A-D table");

  int arith_ok = 0;
  double worst_slack = -1e300;
  for (int i = 0; i < 1000; ++i) {
    std::size_t m = 2 + rng.below(30);
    auto model = StaticModel::from_probabilities(random_probs(rng, m));
    std::size_t n = rng.below(2000);
    std::vector<double> mp(m);
    for (std::size_t s = 0; s < m; ++s) mp[s] = model.probability(static_cast<uint32_t>(s));
    auto x = SymbolSampler(mp).draw(n, rng);
    BitWriter w;
    arithmetic_encode(x, model, w);
    double ideal = model_code_length(x, model);
    double limit = std::ceil(ideal - 1e-9) + 2.0;
    worst_slack = std::max(worst_slack, static_cast<double>(w.bit_length()) - limit);
    BitReader r(w.bytes(), w.bit_length(), true);
    if (static_cast<double>(w.bit_length()) <= limit && arithmetic_decode(r, model, n) == x) ++arith_ok;
  }
  o.check(arith_ok == 1000, "arithmetic payload <= ceil(-log2 P) + 2 with exact decode");

  // Round trips: every coder, every permutation scheme and mode.
  int trips = 0, trips_ok = 0;
  for (int i = 0; i < 20; ++i) {
    int d = 2 + static_cast<int>(rng.below(7));
    std::size_t m = std::size_t{1} << d;
    auto dist = gen_zipf(m, 0.5 + rng.uniform());
    auto x = SymbolSampler(dist.probs()).draw(rng.below(3000) + 1, rng);
    for (auto c : {CoderId::Huffman, CoderId::StaticArithmetic, CoderId::Adaptive}) {
      ++trips;
      auto es = encode_stream(x, m, c);
      if (decode_stream(es.bytes).samples == x) ++trips_ok;
    }
    for (auto scheme : {PermScheme::Fixed, PermScheme::Adaptive, PermScheme::Window, PermScheme::Pipeline}) {
      for (auto mode : {PermMode::Marginal, PermMode::Block}) {
        PermCodingOptions opt;
        opt.scheme = scheme;
        opt.mode = mode;
        opt.window = 1 + rng.below(50);
        opt.pipeline.B = d % 2 == 0 ? 2 : 1;
        opt.pipeline.max_iters = 3;
        opt.pipeline.seed = 7 + i;
        if (scheme == PermScheme::Fixed) opt.reference = order_permutation(dist);
        ++trips;
        auto pe = permutation_encode(x, m, opt);
        auto ref = order_permutation(dist);
        if (permutation_decode(pe.bytes, &ref) == x) ++trips_ok;
      }
    }
  }
  o.check(trips_ok == trips, "round trips");
  o.detail << "Huffman in range " << in_range << "/1000, dyadic equal " << dyadic_eq << "/1000; canonical A-D "
           << (table_ok ? "ok" : "wrong") << "; arithmetic bound met " << arith_ok
           << "/1000 (max slack " << worst_slack << " bits); round trips " << trips_ok << "/" << trips;
  return o;
}

Outcome criterion7() {
  Outcome o;
  auto theta = minimax_redundancy(uint64_t{1} << 20, 1000000, Regime::Proportional);
  o.check(std::abs(theta.bits - 1.22e6) <= 0.02 * 1.22e6, "Theta regime within 2% of 1.22e6");
  auto pat = patterns_bound(1000000, 80071, uint64_t{1} << 20, PatternsMode::CubeRoot);
  o.check(std::abs(pat.bits - 1601520.0) < 1e-6, "patterns example 1,601,520");
  o.detail << "theta=" << theta.bits << " patterns=" << std::fixed << pat.bits;
  return o;
}

Outcome criterion8() {
  Outcome o;
  const int runs = 20;
  const std::size_t m = 4096;
  const std::size_t n = 100000;
  auto dist = gen_zipf(m, 1.2);
  SymbolSampler sampler(dist.probs());
  int monotone = 0, below = 0;
  double worst_margin = 1e300, best_margin = -1e300;
  for (int r = 0; r < runs; ++r) {
    Rng rng(derive_seed(808, r));
    auto x = sampler.draw(n, rng);
    PipelineOptions opt;
    opt.B = 2;
    opt.seed = derive_seed(809, r);
    auto res = blockwise_pipeline(x, 12, opt);
    bool mono = true;
    for (std::size_t i = 1; i < res.iterations.size(); ++i)
      mono = mono && res.iterations[i].sum_marginal_entropy <= res.iterations[i - 1].sum_marginal_entropy + 1e-12;
    if (mono) ++monotone;
    double margin = res.baseline_total - res.best_total;
    worst_margin = std::min(worst_margin, margin);
    best_margin = std::max(best_margin, margin);
    if (res.best_total < res.baseline_total) ++below;
  }
  o.check(monotone == runs, "objective trace non-increasing in every run");
  o.check(below * 100 >= 95 * runs, "selected total below whole-alphabet baseline in >= 95% of runs");
  o.detail << "monotone " << monotone << "/" << runs << "; below baseline " << below << "/" << runs
           << "; baseline - total ranges over [" << worst_margin << ", " << best_margin << "] bits";
  return o;
}

Outcome criterion9() {
  Outcome o;
  int mono = 0, lloyd_eq = 0, bica_mono = 0;
  const int runs = 50;
  const double lambdas[] = {0.0, 0.1, 0.3, 0.6, 1.0};
  for (int r = 0; r < runs; ++r) {
    Rng rng(derive_seed(909, r));
    auto pts = gaussian_mixture_2d(1000, rng);
    auto init = initial_centroids(pts, 8, rng);
    EcvqOptions eo;
    eo.lambda = lambdas[r % 5];
    auto q = ecvq(pts, init, eo);
    bool ok = true;
    for (std::size_t i = 1; i < q.trace.size(); ++i) ok = ok && q.trace[i] <= q.trace[i - 1] + 1e-12;
    if (ok) ++mono;
    EcvqOptions zero;
    auto a = ecvq(pts, init, zero);
    auto l = lloyd(pts, init, zero.max_iters);
    if (a.trace == l.trace) ++lloyd_eq;
    BicaEcvqOptions bo;
    bo.lambda = eo.lambda;
    auto b = bica_ecvq(pts, init, bo);
    bool bok = true;
    for (std::size_t i = 1; i < b.trace.size(); ++i) bok = bok && b.trace[i] <= b.trace[i - 1] + 1e-12;
    if (bok) ++bica_mono;
  }
  o.check(mono == runs, "ECVQ Lagrangian non-increasing");
  o.check(lloyd_eq == runs, "lambda=0 equals Lloyd");
  o.check(bica_mono == runs, "BICA-ECVQ keep-best non-increasing");

  Rng rng(919);
  auto pts = gaussian_mixture_2d(1000, rng);
  auto init = initial_centroids(pts, 8, rng);
  double worst = 0.0;
  for (double lambda : {0.0, 0.05, 0.1, 0.2, 0.4, 0.7, 1.0, 1.5, 2.0, 3.0}) {
    EcvqOptions eo;
    eo.lambda = lambda;
    BicaEcvqOptions bo;
    bo.lambda = lambda;
    double diff = std::abs(ecvq(pts, init, eo).rate - bica_ecvq(pts, init, bo).rate);
    worst = std::max(worst, diff);
  }
  o.check(worst <= 0.1, "rates agree within 0.1 bits/sample");
  o.detail << "monotone " << mono << "/50; lloyd equal " << lloyd_eq << "/50; bica monotone " << bica_mono
           << "/50; max rate difference " << worst;
  return o;
}

Outcome criterion10() {
  Outcome o;
  Rng rng(1010);
  auto pts = standard_normal(100000, 3, rng);
  // Log-spaced from all-distinct cells to a single occupied cell.
  std::vector<double> deltas;
  for (int i = 0; i < 13; ++i) deltas.push_back(0.02 * std::pow(500.0, i / 12.0));
  std::vector<double> gaps;
  bool sub = true, rd = true;
  double worst_rd = 1e300;
  for (double delta : deltas) {
    LatticeSpec spec;
    spec.delta = delta;
    auto q = lattice_quantize(pts, spec);
    sub = sub && q.marginal_sum >= q.joint_entropy - 1e-12;
    double rate = q.adaptive_bits / (100000.0 * 3);
    double bound = gaussian_rate_distortion(3, q.distortion * 3) / 3 - 0.15;
    rd = rd && rate >= bound;
    worst_rd = std::min(worst_rd, rate - bound);
    gaps.push_back(q.marginal_sum - q.joint_entropy);
  }
  o.check(sub, "marginal sum >= joint entropy at every delta");
  o.check(rd, "rate >= R(D)/d - 0.15");
  double extremes = std::max(gaps.front(), gaps.back());
  double mid = *std::max_element(gaps.begin() + 4, gaps.begin() + 9);  // central third
  o.check(extremes <= mid, "extreme gaps <= mid gap");
  o.detail << "gaps:";
  for (std::size_t i = 0; i < gaps.size(); ++i) o.detail << " " << deltas[i] << ":" << gaps[i];
  o.detail << "; min rate margin " << worst_rd;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::strcmp(argv[i], "--criterion") == 0) only = std::atoi(argv[i + 1]);
  std::vector<std::function<Outcome()>> all = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                               criterion6, criterion7, criterion8, criterion9, criterion10};
  bool ok = true;
  for (std::size_t c = 0; c < all.size(); ++c) {
    if (only && static_cast<std::size_t>(only) != c + 1) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome r = all[c]();
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %zu (%.1fs): %s\n", r.pass ? "PASS" : "FAIL", c + 1, secs, r.detail.str().c_str());
    std::fflush(stdout);
    ok = ok && r.pass;
  }
  return ok ? 0 : 1;
}
