#include "gbica/experiments.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gbica/arithmetic.hpp"
#include "gbica/bica_linear.hpp"
#include "gbica/block_pipeline.hpp"
#include "gbica/ecvq.hpp"
#include "gbica/huffman.hpp"
#include "gbica/lattice.hpp"
#include "gbica/permutation_coding.hpp"
#include "gbica/prob_model.hpp"
#include "gbica/transforms.hpp"

namespace gbica {

namespace {

template <typename T>
std::string str(const T& v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << v;
  return os.str();
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// Entropies of the high and low halves of the symbol index.
double two_block_entropy(const JointDistribution& dist) {
  int d = dist.components();
  int lo = d / 2, hi = d - lo;
  std::vector<double> a(std::size_t{1} << hi, 0.0), b(std::size_t{1} << lo, 0.0);
  for (std::size_t x = 0; x < dist.size(); ++x) {
    a[x >> lo] += dist.probs()[x];
    b[x & ((std::size_t{1} << lo) - 1)] += dist.probs()[x];
  }
  return entropy(a) + entropy(b);
}

ExperimentReport classic_zipf(const ExperimentParams& p) {
  int d = p.d.value_or(10);
  require(d >= 2 && d <= 20, "classic-zipf: d must be in [2, 20]");
  ExperimentReport r;
  r.params = {{"d", str(d)}};
  r.columns = {"s", "H", "huffman_len", "marginal_len", "twoblock_len"};
  for (int i = 1; i <= 7; ++i) {
    double s = 0.2 * i;
    auto dist = gen_zipf(std::size_t{1} << d, s);
    auto y = order_permutation(dist).apply(dist);
    auto cb = huffman_build(dist.probs());
    r.rows.push_back({s, dist.entropy(), cb.average_length(dist.probs()), y.sum_marginal_entropies(),
                      two_block_entropy(y)});
  }
  return r;
}

ExperimentReport universal_blocks(const ExperimentParams& p) {
  int d = p.d.value_or(12);
  uint64_t n = p.n.value_or(100000);
  double s = p.s.value_or(1.2);
  int iters = p.iters.value_or(20);
  require(d >= 2 && d <= 24 && n >= 1, "universal-blocks: need d in [2, 24] and n >= 1");
  Rng rng(p.seed);
  auto dist = gen_zipf(std::size_t{1} << d, s);
  auto samples = SymbolSampler(dist.probs()).draw(n, rng);
  ExperimentReport r;
  r.params = {{"d", str(d)}, {"n", str(n)}, {"s", str(s)}, {"iters", str(iters)}};
  r.columns = {"B", "iteration", "sum_block_entropy", "sum_marginal_entropy", "total_bits", "baseline_bits",
               "selected"};
  std::vector<int> Bs;
  if (p.B) {
    Bs = {*p.B};
  } else {
    for (int B : {2, 3, 4})
      if (d % B == 0) Bs.push_back(B);
  }
  for (int B : Bs) {
    PipelineOptions opt;
    opt.B = B;
    opt.max_iters = iters;
    opt.k = p.k.value_or(8);
    opt.seed = derive_seed(p.seed, static_cast<uint64_t>(B));
    auto res = blockwise_pipeline(samples, d, opt);
    for (std::size_t i = 0; i < res.iterations.size(); ++i) {
      const auto& it = res.iterations[i];
      r.rows.push_back({double(B), double(i), it.sum_block_entropy, it.sum_marginal_entropy, it.total_bits,
                        res.baseline_total, static_cast<int>(i) == res.best_iteration ? 1.0 : 0.0});
    }
  }
  return r;
}

ExperimentReport adaptive(const ExperimentParams& p) {
  int d = p.d.value_or(6);
  double s = p.s.value_or(1.0);
  int trials = p.trials.value_or(50);
  require(d >= 2 && d <= 14 && trials >= 1, "adaptive: need d in [2, 14] and trials >= 1");
  std::size_t m = std::size_t{1} << d;
  auto dist = gen_zipf(m, s);
  auto reference = order_permutation(dist);
  std::vector<std::size_t> lengths = {10, 20, 50, 100, 200, 500, 1000, 2000};
  if (p.n) lengths = {static_cast<std::size_t>(*p.n)};
  ExperimentReport r;
  r.params = {{"d", str(d)}, {"s", str(s)}, {"trials", str(trials)}};
  r.columns = {"n", "plain_adaptive", "adaptive_marginal", "adaptive_block", "fixed_marginal", "fixed_block"};
  SymbolSampler sampler(dist.probs());
  for (std::size_t len : lengths) {
    std::vector<std::vector<double>> per(trials, std::vector<double>(5, 0.0));
    parallel_for(trials, [&](std::size_t t) {
      Rng rng(derive_seed(p.seed, t));
      auto x = sampler.draw(len, rng);
      BitWriter plain;
      adaptive_encode(x, m, plain);
      per[t][0] = static_cast<double>(plain.bit_length());
      int col = 1;
      for (auto scheme : {PermScheme::Adaptive, PermScheme::Fixed}) {
        for (auto mode : {PermMode::Marginal, PermMode::Block}) {
          PermCodingOptions o;
          o.scheme = scheme;
          o.mode = mode;
          if (scheme == PermScheme::Fixed) o.reference = reference;
          per[t][col++] = static_cast<double>(permutation_encode(x, m, o).payload_bits);
        }
      }
    });
    std::vector<double> row = {static_cast<double>(len)};
    for (int c = 0; c < 5; ++c) {
      double acc = 0.0;
      for (const auto& v : per) acc += v[c];
      row.push_back(acc / trials / static_cast<double>(len));
    }
    r.rows.push_back(row);
  }
  return r;
}

ExperimentReport ecvq_sweep(const ExperimentParams& p) {
  uint64_t n = p.n.value_or(1000);
  int b = p.d.value_or(3);
  require(b >= 1 && b <= 8 && n >= (uint64_t{1} << b), "ecvq: need d in [1, 8] and n >= 2^d");
  Rng rng(p.seed);
  auto pts = gaussian_mixture_2d(n, rng);
  auto init = initial_centroids(pts, std::size_t{1} << b, rng);
  ExperimentReport r;
  r.params = {{"n", str(n)}, {"clusters", str(1 << b)}, {"iters", str(p.iters.value_or(100))}};
  r.columns = {"lambda", "ecvq_distortion", "ecvq_rate", "bica_distortion", "bica_rate"};
  for (double lambda : {0.0, 0.05, 0.1, 0.2, 0.4, 0.7, 1.0, 1.5, 2.0, 3.0}) {
    EcvqOptions eo;
    eo.lambda = lambda;
    eo.max_iters = p.iters.value_or(100);
    auto a = ecvq(pts, init, eo);
    BicaEcvqOptions bo;
    bo.lambda = lambda;
    bo.max_iters = eo.max_iters;
    if (p.k) bo.k = *p.k;
    auto q = bica_ecvq(pts, init, bo);
    r.rows.push_back({lambda, a.distortion, a.rate, q.distortion, q.rate});
  }
  return r;
}

ExperimentReport lattice_sweep(const ExperimentParams& p) {
  int d = p.d.value_or(3);
  uint64_t n = p.n.value_or(100000);
  require(d >= 1 && d <= 8 && n >= 1, "lattice: need d in [1, 8]");
  LatticeFamily fam = LatticeFamily::Cubic;
  if (p.family) {
    if (*p.family == "checkerboard" || *p.family == "D")
      fam = LatticeFamily::Checkerboard;
    else
      require(*p.family == "cubic" || *p.family == "Z", "lattice: family must be cubic or checkerboard");
  }
  Rng rng(p.seed);
  auto pts = standard_normal(n, d, rng);
  ExperimentReport r;
  r.params = {{"d", str(d)}, {"n", str(n)}, {"family", fam == LatticeFamily::Cubic ? "cubic" : "checkerboard"}};
  r.columns = {"delta", "distortion", "rate_joint", "rate_marginal_sum", "rate_adaptive", "rd_bound"};
  for (double delta : {0.05, 0.1, 0.2, 0.3, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0}) {
    LatticeSpec spec;
    spec.family = fam;
    spec.delta = delta;
    auto q = lattice_quantize(pts, spec);
    double nd = static_cast<double>(n) * d;
    r.rows.push_back({delta, q.distortion, q.joint_entropy / d, q.marginal_sum / d, q.adaptive_bits / nd,
                      gaussian_rate_distortion(d, q.distortion * d) / d});
  }
  return r;
}

ExperimentReport linear_compare(const ExperimentParams& p) {
  double s = p.s.value_or(1.0);
  ExperimentReport r;
  r.params = {{"s", str(s)}};
  r.columns = {"d", "H", "identity_cost", "order_cost", "linear_greedy_cost", "linear_bound_cost"};
  int lo = p.d.value_or(4), hi = p.d.value_or(8);
  require(lo >= 2 && hi <= 16, "linear-compare: d must be in [2, 16]");
  for (int d = lo; d <= hi; ++d) {
    auto dist = gen_zipf(std::size_t{1} << d, s);
    double h = dist.entropy();
    auto g = greedy_linear_bica(dist);
    r.rows.push_back({double(d), h, total_correlation(dist), cost(dist, order_permutation(dist)), g.cost,
                      linear_lower_bound(dist) - h});
  }
  return r;
}

}  // namespace

std::vector<std::string> experiment_ids() {
  return {"classic-zipf", "universal-blocks", "adaptive", "ecvq", "lattice", "linear-compare"};
}

ExperimentReport run_experiment(const std::string& id, const ExperimentParams& params) {
  ExperimentReport r;
  if (id == "classic-zipf") r = classic_zipf(params);
  else if (id == "universal-blocks") r = universal_blocks(params);
  else if (id == "adaptive") r = adaptive(params);
  else if (id == "ecvq") r = ecvq_sweep(params);
  else if (id == "lattice") r = lattice_sweep(params);
  else if (id == "linear-compare") r = linear_compare(params);
  else throw std::invalid_argument("unknown experiment '" + id + "'");
  r.id = id;
  r.seed = params.seed;
  return r;
}

void write_csv(std::ostream& out, const ExperimentReport& report) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "# experiment=" << report.id << " seed=" << report.seed << '\n';
  for (const auto& [k, v] : report.params) os << "# " << k << '=' << v << '\n';
  for (std::size_t i = 0; i < report.columns.size(); ++i) os << (i ? "," : "") << report.columns[i];
  os << '\n' << std::setprecision(10);
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
  out << os.str();
}

}  // namespace gbica
