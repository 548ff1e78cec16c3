// gbica command-line front end.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include "gbica/arithmetic.hpp"
#include "gbica/bica_exact.hpp"
#include "gbica/bica_linear.hpp"
#include "gbica/bica_relax.hpp"
#include "gbica/block_pipeline.hpp"
#include "gbica/ecvq.hpp"
#include "gbica/experiments.hpp"
#include "gbica/huffman.hpp"
#include "gbica/lattice.hpp"
#include "gbica/permutation_coding.hpp"
#include "gbica/prob_model.hpp"
#include "gbica/redundancy.hpp"
#include "gbica/stream_format.hpp"
#include "gbica/transforms.hpp"
#include "gbica/word_frequencies.hpp"

using namespace gbica;

namespace {

struct Flags {
  std::size_t m = 0;
  int d = 0;
  int b = 0;
  int B = 2;
  double s = 1.0;
  int k = 8;
  double lambda = 0.0;
  uint64_t n = 0;
  int iters = 50;
  uint64_t seed = 1;
  std::string regime = "auto";
  std::string mode = "marginal";
  std::string scheme = "adaptive";
  std::string out;
  std::string in;
  std::string kind = "zipf";
  std::string reference;
  std::size_t window = 100;
  bool decode = false;
  std::string family = "cubic";
};

std::size_t alphabet(const Flags& f) {
  if (f.m) return f.m;
  if (f.d) return std::size_t{1} << f.d;
  return 1024;
}

// Either --out or stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot open output '" + path + "'");
    }
  }
  std::ostream& get() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

std::vector<uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

JointDistribution make_distribution(const Flags& f) {
  if (!f.in.empty()) {
    std::ifstream in(f.in);
    if (!in) throw std::runtime_error("cannot open input '" + f.in + "'");
    return read_distribution(in);
  }
  std::size_t m = alphabet(f);
  if (f.kind == "zipf") return gen_zipf(m, f.s);
  if (f.kind == "simplex") return gen_uniform_simplex(m, f.seed);
  if (f.kind == "markov") return gen_markov_symmetric(exact_log2(m), f.s);
  if (f.kind == "uniform") return JointDistribution::uniform(m);
  throw std::invalid_argument("unknown distribution kind '" + f.kind + "'");
}

std::vector<uint32_t> make_samples(const Flags& f) {
  if (!f.in.empty()) {
    std::ifstream in(f.in);
    if (!in) throw std::runtime_error("cannot open input '" + f.in + "'");
    return read_samples(in);
  }
  Flags g = f;
  g.in.clear();
  auto dist = make_distribution(g);
  Rng rng(f.seed);
  return SymbolSampler(dist.probs()).draw(f.n ? f.n : 10000, rng);
}

void print_transform_summary(std::ostream& os, const JointDistribution& dist, const PermutationTransform& t) {
  auto y = t.apply(dist);
  os << "H=" << dist.entropy() << "\nsum_marginal=" << y.sum_marginal_entropies() << "\ncost=" << cost(dist, t)
     << "\n";
}

void write_bytes(const Flags& f, const std::vector<uint8_t>& bytes) {
  if (f.out.empty()) throw std::invalid_argument("--out is required for binary output");
  Output o(f.out);
  o.get().write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--m", f.m, "alphabet size");
  app->add_option("--d", f.d, "bits per symbol");
  app->add_option("--s", f.s, "Zipf exponent (or Markov flip probability)");
  app->add_option("--n", f.n, "sample count");
  app->add_option("--seed", f.seed, "random seed");
  app->add_option("--in", f.in, "input file");
  app->add_option("--out", f.out, "output file (stdout when omitted)");
  app->add_option("--kind", f.kind, "zipf | simplex | markov | uniform");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized binary independent component analysis toolkit"};
  app.require_subcommand(1);
  Flags f;

  auto* gen = app.add_subcommand("gen", "generate a distribution or, with --n, samples from it");
  add_common(gen, f);
  gen->callback([&] {
    Output o(f.out);
    auto dist = make_distribution(f);
    if (f.n) {
      Rng rng(f.seed);
      write_samples(o.get(), SymbolSampler(dist.probs()).draw(f.n, rng));
    } else {
      write_distribution(o.get(), dist);
    }
  });

  auto* tr = app.add_subcommand("transform", "order or block-order permutation of a distribution");
  add_common(tr, f);
  tr->add_option("--b", f.b, "block bits for the block order permutation");
  tr->add_option("--words", f.reference, "word<TAB>count list to symbolize with --d bits");
  tr->callback([&] {
    Output o(f.out);
    JointDistribution dist;
    if (!f.reference.empty()) {
      auto table = ingest_word_frequencies(f.reference, f.d ? f.d : 20);
      dist = table.dist;
    } else {
      dist = make_distribution(f);
    }
    auto t = f.b ? block_order_permutation(dist, f.b) : order_permutation(dist);
    o.get() << std::setprecision(10) << "identity_cost=" << total_correlation(dist) << "\n";
    print_transform_summary(o.get(), dist, t);
  });

  auto* bica = app.add_subcommand("bica", "binary ICA solvers");
  bica->require_subcommand(1);
  for (std::string name : {"exact", "bnb", "relax", "descent", "linear"}) {
    auto* sub = bica->add_subcommand(name);
    add_common(sub, f);
    sub->add_option("--k", f.k, "pieces of the linear bound");
    sub->add_option("--iters", f.iters, "descent restarts");
    sub->callback([&, name] {
      Output o(f.out);
      auto& os = o.get();
      os << std::setprecision(10);
      auto dist = make_distribution(f);
      if (name == "exact") {
        auto r = recover_independent_components(dist);
        for (std::size_t j = 0; j < r.pi.size(); ++j) os << "pi" << j << "=" << r.pi[j] << "\n";
        print_transform_summary(os, dist, r.transform);
      } else if (name == "bnb") {
        auto r = branch_and_bound_optimal(dist);
        os << "nodes=" << r.nodes_expanded << "\n";
        print_transform_summary(os, dist, r.transform);
      } else if (name == "relax") {
        auto r = relaxed_bica_binary(dist, f.k);
        os << "pwl_value=" << r.pwl_value << "\nfeasible=" << r.feasible << "\n";
        print_transform_summary(os, dist, r.transform);
      } else if (name == "descent") {
        DescentOptions opt;
        opt.k = f.k;
        opt.n_init = f.iters;
        opt.seed = f.seed;
        auto r = objective_descent_qary(dist, opt);
        print_transform_summary(os, dist, r.transform);
      } else {
        auto r = greedy_linear_bica(dist);
        os << "lower_bound=" << linear_lower_bound(dist) << "\n";
        print_transform_summary(os, dist, PermutationTransform::linear(r.w));
      }
    });
  }

  auto* code = app.add_subcommand("code", "entropy coders");
  code->require_subcommand(1);
  for (std::string name : {"huffman", "canonical", "arith", "adaptive"}) {
    auto* sub = code->add_subcommand(name);
    add_common(sub, f);
    sub->add_flag("--decode", f.decode, "decode --in into samples");
    sub->callback([&, name] {
      if (f.decode) {
        auto ds = decode_stream(read_bytes(f.in));
        Output o(f.out);
        write_samples(o.get(), ds.samples);
        return;
      }
      if (name == "canonical") {
        Output o(f.out);
        auto dist = make_distribution(f);
        auto cb = huffman_build(dist.probs());
        auto can = canonicalize(cb);
        auto c2 = can.to_codebook();
        o.get() << "symbol,length,code\n";
        for (uint32_t s : can.symbols) {
          std::string bits;
          for (int i = c2.lengths[s] - 1; i >= 0; --i) bits += ((c2.codes[s] >> i) & 1U) ? '1' : '0';
          o.get() << s << "," << int(c2.lengths[s]) << "," << bits << "\n";
        }
        return;
      }
      auto samples = make_samples(f);
      CoderId id = name == "huffman" ? CoderId::Huffman : name == "arith" ? CoderId::StaticArithmetic : CoderId::Adaptive;
      std::size_t m = alphabet(f);
      auto es = encode_stream(samples, m, id);
      write_bytes(f, es.bytes);
      std::cerr << "payload_bits=" << es.payload_bits << " model_bytes=" << es.model_bytes << "\n";
    });
  }

  auto* uni = app.add_subcommand("universal", "universal coding tools");
  uni->require_subcommand(1);
  auto* red = uni->add_subcommand("redundancy");
  add_common(red, f);
  red->add_option("--regime", f.regime, "auto | m=o(n) | n=o(m) | theta | patterns | dictionary");
  red->add_option("--n0", f.b, "distinct symbols (patterns, dictionary)");
  red->add_flag("--cube-root", f.decode, "patterns term n^(1/3)");
  red->callback([&] {
    Output o(f.out);
    auto r = parse_regime(f.regime);
    RedundancyEstimate e;
    std::size_t m = alphabet(f);
    if (r == Regime::Patterns)
      e = patterns_bound(f.n, f.b, m, f.decode ? PatternsMode::CubeRoot : PatternsMode::Default);
    else if (r == Regime::ExplicitDictionary)
      e = explicit_dictionary(f.b, m);
    else
      e = minimax_redundancy(m, f.n, r);
    o.get() << std::setprecision(10) << "regime=" << regime_name(e.regime) << "\nbits=" << e.bits << "\n";
  });
  auto* pipe = uni->add_subcommand("pipeline");
  add_common(pipe, f);
  pipe->add_option("--B", f.B, "blocks");
  pipe->add_option("--k", f.k, "pieces of the linear bound");
  pipe->add_option("--iters", f.iters, "iterations");
  pipe->callback([&] {
    Output o(f.out);
    auto samples = make_samples(f);
    PipelineOptions opt;
    opt.B = f.B;
    opt.k = f.k;
    opt.max_iters = f.iters;
    opt.seed = f.seed;
    auto res = blockwise_pipeline(samples, exact_log2(alphabet(f)), opt);
    auto& os = o.get();
    os << std::setprecision(10) << "iteration,sum_block_entropy,sum_marginal_entropy,total_bits\n";
    for (std::size_t i = 0; i < res.iterations.size(); ++i) {
      const auto& it = res.iterations[i];
      os << i << "," << it.sum_block_entropy << "," << it.sum_marginal_entropy << "," << it.total_bits << "\n";
    }
    std::cerr << "best_iteration=" << res.best_iteration << " best_total=" << res.best_total
              << " baseline_total=" << res.baseline_total << "\n";
  });
  for (std::string name : {"permcode", "window"}) {
    auto* sub = uni->add_subcommand(name);
    add_common(sub, f);
    sub->add_option("--scheme", f.scheme, "fixed | adaptive | window | pipeline");
    sub->add_option("--mode", f.mode, "marginal | block");
    sub->add_option("--window", f.window, "window length");
    sub->add_option("--B", f.B, "pipeline blocks");
    sub->add_option("--iters", f.iters, "pipeline iterations");
    sub->add_option("--reference", f.reference, "distribution file defining the fixed reference order");
    sub->add_flag("--decode", f.decode, "decode --in into samples");
    sub->callback([&, name] {
      std::optional<PermutationTransform> ref;
      if (!f.reference.empty()) {
        std::ifstream in(f.reference);
        if (!in) throw std::runtime_error("cannot open reference '" + f.reference + "'");
        ref = order_permutation(read_distribution(in));
      }
      if (f.decode) {
        auto samples = permutation_decode(read_bytes(f.in), ref ? &*ref : nullptr);
        Output o(f.out);
        write_samples(o.get(), samples);
        return;
      }
      auto samples = make_samples(f);
      PermCodingOptions opt;
      opt.scheme = name == "window" ? PermScheme::Window : parse_scheme(f.scheme);
      opt.mode = parse_mode(f.mode);
      opt.window = f.window;
      opt.reference = ref;
      opt.pipeline.B = f.B;
      opt.pipeline.max_iters = f.iters;
      opt.pipeline.seed = f.seed;
      std::size_t m = alphabet(f);
      auto pe = permutation_encode(samples, m, opt);
      write_bytes(f, pe.bytes);
      std::cerr << "payload_bits=" << pe.payload_bits << " container_bytes=" << pe.bytes.size() << "\n";
      if (name == "window")
        std::cerr << "whole_alphabet_bits=" << windowed_arithmetic_bits(samples, m, f.window) << "\n";
    });
  }

  auto* vq = app.add_subcommand("vq", "vector quantizers");
  vq->require_subcommand(1);
  for (std::string name : {"ecvq", "bica-ecvq", "lattice"}) {
    auto* sub = vq->add_subcommand(name);
    add_common(sub, f);
    sub->add_option("--lambda", f.lambda, "Lagrange multiplier (ecvq) or cell size (lattice)");
    sub->add_option("--b", f.b, "log2 of the cluster count");
    sub->add_option("--k", f.k, "pieces of the linear bound (bica-ecvq)");
    sub->add_option("--iters", f.iters, "iterations");
    sub->add_option("--family", f.family, "lattice family: cubic | checkerboard");
    sub->callback([&, name] {
      Output o(f.out);
      auto& os = o.get();
      os << std::setprecision(10);
      Rng rng(f.seed);
      uint64_t n = f.n ? f.n : 1000;
      if (name == "lattice") {
        int d = f.d ? f.d : 3;
        auto pts = standard_normal(n, d, rng);
        LatticeSpec spec;
        spec.delta = f.lambda > 0 ? f.lambda : 0.5;
        spec.family = f.family == "checkerboard" ? LatticeFamily::Checkerboard : LatticeFamily::Cubic;
        auto q = lattice_quantize(pts, spec);
        os << "delta,distortion,rate_joint,rate_marginal_sum\n"
           << spec.delta << "," << q.distortion << "," << q.joint_entropy / d << "," << q.marginal_sum / d << "\n";
        return;
      }
      auto pts = gaussian_mixture_2d(n, rng);
      std::size_t m = std::size_t{1} << (f.b ? f.b : 3);
      auto init = initial_centroids(pts, m, rng);
      QuantizerModel q;
      if (name == "ecvq") {
        EcvqOptions opt;
        opt.lambda = f.lambda;
        opt.max_iters = f.iters;
        q = ecvq(pts, init, opt);
      } else {
        BicaEcvqOptions opt;
        opt.lambda = f.lambda;
        opt.max_iters = f.iters;
        if (f.k > 0) opt.k = f.k;
        q = bica_ecvq(pts, init, opt);
      }
      std::vector<double> w(std::max<std::size_t>(q.clusters(), 2), 0.0);
      for (uint32_t a : q.assignment) w[a] += 1.0;
      w.resize(std::size_t{1} << std::max(1, bits_for(w.size())), 0.0);
      auto dist = JointDistribution::from_weights(w);
      double marg = name == "ecvq" ? order_permutation(dist).apply(dist).sum_marginal_entropies() : q.rate;
      os << "lambda,distortion,rate_joint,rate_marginal_sum\n"
         << f.lambda << "," << q.distortion << "," << dist.entropy() << "," << marg << "\n";
    });
  }

  auto* exp = app.add_subcommand("experiment", "regenerate an experiment as CSV");
  std::string exp_id;
  ExperimentParams ep;
  exp->add_option("id", exp_id, "classic-zipf | universal-blocks | adaptive | ecvq | lattice | linear-compare")
      ->required();
  exp->add_option("--d", ep.d, "bits per symbol");
  exp->add_option("--n", ep.n, "sample count");
  exp->add_option("--B", ep.B, "blocks");
  exp->add_option("--k", ep.k, "pieces of the linear bound");
  exp->add_option("--iters", ep.iters, "iterations");
  exp->add_option("--trials", ep.trials, "trials");
  exp->add_option("--s", ep.s, "Zipf exponent");
  exp->add_option("--family", ep.family, "lattice family");
  exp->add_option("--seed", ep.seed, "random seed");
  exp->add_option("--out", f.out, "output CSV");
  exp->callback([&] {
    Output o(f.out);
    write_csv(o.get(), run_experiment(exp_id, ep));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
