#include "gbica/prob_model.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace gbica {

namespace {

int components_for(std::size_t m, int radix) {
  if (radix < 2) throw std::invalid_argument("radix must be at least 2");
  int d = 0;
  std::size_t v = 1;
  while (v < m) {
    v *= static_cast<std::size_t>(radix);
    ++d;
  }
  if (v != m) throw std::invalid_argument("alphabet size " + std::to_string(m) + " is not a power of " + std::to_string(radix));
  return d;
}

}  // namespace

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binary_entropy: p outside [0,1]");
  return entropy_term(p) + entropy_term(1.0 - p);
}

double entropy(std::span<const double> probs) {
  CompensatedSum s;
  for (double p : probs) s.add(entropy_term(p));
  return s.value();
}

JointDistribution JointDistribution::from_probs(std::vector<double> probs, int radix) {
  if (probs.empty()) throw std::invalid_argument("distribution must have at least one symbol");
  CompensatedSum total;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("probabilities must be finite and non-negative");
    total.add(p);
  }
  if (std::abs(total.value() - 1.0) > kNormTolerance) {
    std::ostringstream msg;
    msg << std::setprecision(17) << "probabilities sum to " << total.value() << ", expected 1";
    throw std::invalid_argument(msg.str());
  }
  JointDistribution d;
  d.components_ = components_for(probs.size(), radix);
  d.radix_ = radix;
  d.probs_ = std::move(probs);
  return d;
}

JointDistribution JointDistribution::from_weights(std::span<const double> weights, int radix) {
  CompensatedSum total;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("weights must be finite and non-negative");
    total.add(w);
  }
  double t = total.value();
  if (!(t > 0.0)) throw std::invalid_argument("weights sum to zero");
  std::vector<double> probs(weights.begin(), weights.end());
  for (double& p : probs) p /= t;
  return from_probs(std::move(probs), radix);
}

JointDistribution JointDistribution::uniform(std::size_t m, int radix) {
  return from_probs(std::vector<double>(m, 1.0 / static_cast<double>(m)), radix);
}

JointDistribution JointDistribution::point_mass(std::size_t m, std::size_t symbol, int radix) {
  if (symbol >= m) throw std::invalid_argument("point mass symbol out of range");
  std::vector<double> p(m, 0.0);
  p[symbol] = 1.0;
  return from_probs(std::move(p), radix);
}

JointDistribution JointDistribution::independent_bits(std::span<const double> pi0) {
  int d = static_cast<int>(pi0.size());
  std::size_t m = std::size_t{1} << d;
  std::vector<double> p(m);
  for (std::size_t x = 0; x < m; ++x) {
    double v = 1.0;
    for (int j = 0; j < d; ++j) {
      bool one = (x >> (d - 1 - j)) & 1U;
      v *= one ? 1.0 - pi0[j] : pi0[j];
    }
    p[x] = v;
  }
  return from_weights(p);
}

double JointDistribution::entropy() const { return gbica::entropy(probs_); }

unsigned JointDistribution::digit(std::size_t symbol, int component) const {
  std::size_t v = symbol;
  for (int k = components_ - 1; k > component; --k) v /= static_cast<std::size_t>(radix_);
  return static_cast<unsigned>(v % static_cast<std::size_t>(radix_));
}

std::vector<double> JointDistribution::marginal_bit_probs() const {
  if (radix_ != 2) throw std::logic_error("marginal_bit_probs requires a binary alphabet");
  int d = components_;
  std::vector<CompensatedSum> acc(d);
  for (std::size_t x = 0; x < probs_.size(); ++x) {
    double p = probs_[x];
    if (p == 0.0) continue;
    for (int j = 0; j < d; ++j)
      if (!((x >> (d - 1 - j)) & 1U)) acc[j].add(p);
  }
  std::vector<double> out(d);
  for (int j = 0; j < d; ++j) out[j] = std::clamp(acc[j].value(), 0.0, 1.0);
  return out;
}

std::vector<std::vector<double>> JointDistribution::component_marginals() const {
  std::vector<std::vector<double>> out(components_, std::vector<double>(radix_, 0.0));
  for (std::size_t x = 0; x < probs_.size(); ++x) {
    double p = probs_[x];
    if (p == 0.0) continue;
    std::size_t v = x;
    for (int j = components_ - 1; j >= 0; --j) {
      out[j][v % radix_] += p;
      v /= radix_;
    }
  }
  return out;
}

double JointDistribution::sum_marginal_entropies() const {
  CompensatedSum s;
  if (radix_ == 2) {
    for (double pi : marginal_bit_probs()) s.add(binary_entropy(pi));
  } else {
    for (const auto& marg : component_marginals()) s.add(gbica::entropy(marg));
  }
  return s.value();
}

JointDistribution gen_zipf(std::size_t m, double s, int radix) {
  if (m < 1) throw std::invalid_argument("gen_zipf: m must be >= 1");
  if (!(s >= 0.0)) throw std::invalid_argument("gen_zipf: s must be >= 0");
  std::vector<double> w(m);
  for (std::size_t k = 1; k <= m; ++k) w[k - 1] = std::pow(static_cast<double>(k), -s);
  return JointDistribution::from_weights(w, radix);
}

JointDistribution gen_uniform_simplex(std::size_t m, Rng& rng, int radix) {
  if (m < 1) throw std::invalid_argument("gen_uniform_simplex: m must be >= 1");
  std::vector<double> w(m);
  for (auto& v : w) v = rng.exponential();
  return JointDistribution::from_weights(w, radix);
}

JointDistribution gen_uniform_simplex(std::size_t m, uint64_t seed, int radix) {
  Rng rng(seed);
  return gen_uniform_simplex(m, rng, radix);
}

JointDistribution gen_markov_symmetric(int d, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("gen_markov_symmetric: alpha must be in (0,1)");
  if (d < 1 || d > 30) throw std::invalid_argument("gen_markov_symmetric: d must be in [1,30]");
  std::size_t m = std::size_t{1} << d;
  std::vector<double> p(m);
  for (std::size_t x = 0; x < m; ++x) {
    double v = 0.5;
    for (int t = 1; t < d; ++t) {
      unsigned prev = (x >> (d - t)) & 1U;
      unsigned cur = (x >> (d - 1 - t)) & 1U;
      v *= prev != cur ? alpha : 1.0 - alpha;
    }
    p[x] = v;
  }
  return JointDistribution::from_weights(p);
}

EmpiricalCounts count_symbols(std::span<const uint32_t> samples, std::size_t m) {
  EmpiricalCounts c;
  c.counts.assign(m, 0);
  for (uint32_t s : samples) {
    if (s >= m) throw std::out_of_range("sample " + std::to_string(s) + " outside alphabet of size " + std::to_string(m));
    if (c.counts[s]++ == 0) ++c.n0;
  }
  c.n = samples.size();
  return c;
}

std::pair<EmpiricalCounts, JointDistribution> empirical_distribution(std::span<const uint32_t> samples,
                                                                     std::size_t m, int radix) {
  if (samples.empty()) throw std::invalid_argument("empirical_distribution: no samples");
  EmpiricalCounts c = count_symbols(samples, m);
  std::vector<double> w(c.counts.begin(), c.counts.end());
  return {std::move(c), JointDistribution::from_weights(w, radix)};
}

SymbolSampler::SymbolSampler(std::span<const double> probs) : cdf_(probs.size()) {
  CompensatedSum s;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    s.add(probs[i]);
    cdf_[i] = s.value();
  }
}

uint32_t SymbolSampler::operator()(Rng& rng) const {
  double u = rng.uniform() * cdf_.back();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  // Skip zero-mass symbols that share the boundary.
  return static_cast<uint32_t>(it - cdf_.begin());
}

std::vector<uint32_t> SymbolSampler::draw(std::size_t n, Rng& rng) const {
  std::vector<uint32_t> out(n);
  for (auto& v : out) v = (*this)(rng);
  return out;
}

void write_distribution(std::ostream& out, const JointDistribution& dist) {
  out << dist.size() << '\n' << std::setprecision(17);
  for (double p : dist.probs()) out << p << '\n';
}

JointDistribution read_distribution(std::istream& in, int radix) {
  std::size_t m = 0;
  if (!(in >> m) || m == 0) throw std::invalid_argument("distribution file: missing alphabet size");
  std::vector<double> p(m);
  for (std::size_t i = 0; i < m; ++i)
    if (!(in >> p[i])) throw std::invalid_argument("distribution file: expected " + std::to_string(m) + " probabilities");
  return JointDistribution::from_probs(std::move(p), radix);
}

void write_samples(std::ostream& out, std::span<const uint32_t> samples) {
  for (uint32_t s : samples) out << s << '\n';
}

std::vector<uint32_t> read_samples(std::istream& in) {
  std::vector<uint32_t> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    long long v;
    if (!(ls >> v) || v < 0 || v > 0xFFFFFFFFLL) throw std::invalid_argument("sample file: bad value on line " + std::to_string(lineno));
    out.push_back(static_cast<uint32_t>(v));
  }
  return out;
}

}  // namespace gbica
