#include <doctest.h>

#include <bit>

#include <sstream>

#include "gbica/prob_model.hpp"
#include "helpers.hpp"

using namespace gbica;
using doctest::Approx;

TEST_SUITE("prob_model") {
  TEST_CASE("binary entropy values") {
    CHECK(binary_entropy(0.5) == Approx(1.0));
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.25) == Approx(0.811278).epsilon(1e-6));
    CHECK_THROWS_AS(binary_entropy(-0.1), std::domain_error);
    CHECK_THROWS_AS(binary_entropy(1.5), std::domain_error);
  }

  TEST_CASE("entropy values") {
    CHECK(JointDistribution::uniform(4).entropy() == Approx(2.0));
    CHECK(JointDistribution::from_probs({0.5, 0.25, 0.25, 0.0}).entropy() == Approx(1.5));
    CHECK(JointDistribution::from_probs({0.6, 0.3, 0.1, 0.0}).entropy() == Approx(1.29546).epsilon(1e-5));
  }

  TEST_CASE("validation") {
    CHECK_THROWS_AS(JointDistribution::from_probs({0.5, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(JointDistribution::from_probs({1.2, -0.2}), std::invalid_argument);
    CHECK_THROWS_AS(JointDistribution::from_probs({0.2, 0.3, 0.5}), std::invalid_argument);
    CHECK_NOTHROW(JointDistribution::from_probs({0.2, 0.3, 0.5}, 3));
  }

  TEST_CASE("marginal bit probabilities") {
    for (int d = 1; d <= 5; ++d)
      for (double pi : JointDistribution::uniform(std::size_t{1} << d).marginal_bit_probs()) CHECK(pi == Approx(0.5));
    for (double pi : JointDistribution::point_mass(8, 0).marginal_bit_probs()) CHECK(pi == 1.0);
    auto p = JointDistribution::from_probs({0.1, 0.2, 0.3, 0.4});
    auto pi = p.marginal_bit_probs();
    CHECK(pi[0] == Approx(0.3));
    CHECK(pi[1] == Approx(0.4));
    CHECK(p.sum_marginal_entropies() == Approx(1.852242).epsilon(1e-6));
    CHECK(JointDistribution::uniform(8).sum_marginal_entropies() == Approx(3.0));
    CHECK(JointDistribution::point_mass(8, 5).sum_marginal_entropies() == Approx(0.0));
  }

  TEST_CASE("zipf generator") {
    auto u = gen_zipf(8, 0.0);
    for (double v : u.probs()) CHECK(v == Approx(0.125));
    auto z2 = gen_zipf(2, 1.0);
    CHECK(z2[0] == Approx(2.0 / 3));
    CHECK(z2[1] == Approx(1.0 / 3));
    auto z4 = gen_zipf(4, 1.0);
    CHECK(z4[0] == Approx(0.48));
    CHECK(z4[1] == Approx(0.24));
    CHECK(z4[2] == Approx(0.16));
    CHECK(z4[3] == Approx(0.12));
    auto z = gen_zipf(1024, 1.3);
    for (std::size_t i = 1; i < z.size(); ++i) CHECK(z[i] <= z[i - 1]);
  }

  TEST_CASE("uniform simplex moments") {
    Rng rng(3);
    const int draws = 100000;
    const std::size_t m = 8;
    double sum_first = 0.0, sum_sq = 0.0, sum_min = 0.0;
    for (int i = 0; i < draws; ++i) {
      auto p = gen_uniform_simplex(m, rng);
      double total = 0.0;
      for (double v : p.probs()) {
        CHECK_UNARY(v >= 0.0);
        total += v;
      }
      REQUIRE(total == Approx(1.0).epsilon(1e-12));
      sum_first += p[0];
      sum_sq += p[0] * p[0];
      sum_min += *std::min_element(p.probs().begin(), p.probs().end());
    }
    double mean = sum_first / draws;
    double var = sum_sq / draws - mean * mean;
    double se = std::sqrt(var / draws);
    CHECK(std::abs(mean - 1.0 / m) <= 3 * se);
    // Minimum of a flat Dirichlet coordinate set: 1/m².
    CHECK(sum_min / draws == Approx(1.0 / (m * m)).epsilon(0.02));
  }

  TEST_CASE("markov symmetric source") {
    auto u = gen_markov_symmetric(4, 0.5);
    for (double v : u.probs()) CHECK(v == Approx(1.0 / 16));
    auto p = gen_markov_symmetric(2, 0.1);
    CHECK(p[0] == Approx(0.45));
    CHECK(p[3] == Approx(0.45));
    CHECK(p[1] == Approx(0.05));
    CHECK(p[2] == Approx(0.05));
    auto q = gen_markov_symmetric(4, 0.2);
    std::vector<double> v(q.probs().begin(), q.probs().end());
    std::sort(v.begin(), v.end());
    std::size_t distinct = 1;
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i] - v[i - 1] > 1e-12) ++distinct;
    // Probability depends only on the number of bit flips between neighbours.
    CHECK(distinct == 4);
    for (std::size_t x = 0; x < 16; ++x) {
      int flips = std::popcount((x ^ (x >> 1)) & 0b111U);
      CHECK(q[x] == Approx(0.5 * std::pow(0.2, flips) * std::pow(0.8, 3 - flips)));
    }
  }

  TEST_CASE("empirical distribution") {
    std::vector<uint32_t> a = {0, 0, 1, 1};
    auto [c, d] = empirical_distribution(a, 2);
    CHECK(d[0] == Approx(0.5));
    CHECK(c.entropy() == Approx(1.0));
    std::vector<uint32_t> b = {0};
    auto [c2, d2] = empirical_distribution(b, 4);
    CHECK(c2.entropy() == 0.0);
    CHECK(d2[0] == 1.0);
    CHECK(c2.n0 == 1);

    auto z = gen_zipf(4096, 1.2);
    Rng rng(9);
    auto x = SymbolSampler(z.probs()).draw(100000, rng);
    CHECK(std::abs(count_symbols(x, 4096).entropy() - z.entropy()) < 0.1);
  }

  TEST_CASE("total correlation is non-negative") {
    Rng rng(4);
    for (int i = 0; i < 200; ++i) {
      auto p = gen_uniform_simplex(std::size_t{1} << (1 + i % 6), rng);
      double h = p.entropy(), s = p.sum_marginal_entropies();
      CHECK(h >= -1e-12);
      CHECK(h <= std::log2(static_cast<double>(p.size())) + 1e-12);
      CHECK(s >= h - 1e-12);
      CHECK(s <= p.components() + 1e-12);
      CHECK(h == Approx(testing::plain_entropy({p.probs().begin(), p.probs().end()})));
    }
  }

  TEST_CASE("text round trips") {
    auto p = gen_zipf(16, 0.7);
    std::stringstream ss;
    write_distribution(ss, p);
    auto q = read_distribution(ss);
    for (std::size_t i = 0; i < 16; ++i) CHECK(q[i] == p[i]);
    std::vector<uint32_t> x = {3, 1, 4, 1, 5};
    std::stringstream s2;
    write_samples(s2, x);
    CHECK(read_samples(s2) == x);
  }
}
