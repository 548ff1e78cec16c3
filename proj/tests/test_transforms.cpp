#include <doctest.h>

#include "gbica/order_theory.hpp"
#include "gbica/transforms.hpp"
#include "helpers.hpp"

using namespace gbica;
using doctest::Approx;

TEST_SUITE("transforms") {
  TEST_CASE("order permutation of ascending input is the identity") {
    std::vector<double> asc = {0.01, 0.02, 0.03, 0.04, 0.1, 0.2, 0.25, 0.35};
    auto t = order_permutation(JointDistribution::from_probs(asc));
    CHECK(t.table() == testing::iota_table(8));
  }

  TEST_CASE("order permutation places the i-th smallest at codeword i") {
    Rng rng(11);
    auto p = gen_uniform_simplex(8, rng);
    auto q = order_permutation(p).apply(p);
    std::vector<double> sorted(p.probs().begin(), p.probs().end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < 8; ++i) CHECK(q[i] == sorted[i]);
  }

  TEST_CASE("order permutation does not exceed identity cost on d=2 example") {
    auto p = JointDistribution::from_probs({0.4, 0.1, 0.3, 0.2});
    CHECK(cost(p, order_permutation(p)) <= total_correlation(p) + 1e-15);
  }

  TEST_CASE("msb marginal equals the sum of the m/2 smallest probabilities") {
    Rng rng(12);
    for (int i = 0; i < 50; ++i) {
      auto p = gen_uniform_simplex(64, rng);
      std::vector<double> s(p.probs().begin(), p.probs().end());
      std::sort(s.begin(), s.end());
      double half = std::accumulate(s.begin(), s.begin() + 32, 0.0);
      CHECK(order_permutation(p).apply(p).marginal_bit_probs()[0] == Approx(half));
    }
  }

  TEST_CASE("block order permutation") {
    Rng rng(13);
    auto p = gen_uniform_simplex(64, rng);
    CHECK(block_order_permutation(p, 6) == order_permutation(p));
    // Worked d=3, b=2 table: block {p6,p3,p1,p8} sorts to {p1,p3,p6,p8}.
    std::vector<double> v = {6, 3, 1, 8, 2, 5, 4, 7};
    for (auto& x : v) x /= 36.0;
    auto w = JointDistribution::from_probs(v);
    auto y = block_order_permutation(w, 2).apply(w);
    std::vector<double> expect = {1, 3, 6, 8, 2, 4, 5, 7};
    for (std::size_t i = 0; i < 8; ++i) CHECK(y[i] == Approx(expect[i] / 36.0));
    // b = 1: smaller probability of each pair takes the 0 lsb.
    auto b1 = block_order_permutation(p, 1).apply(p);
    for (std::size_t i = 0; i < 64; i += 2) CHECK(b1[i] <= b1[i + 1]);
    // Symbols never leave their block.
    auto t = block_order_permutation(p, 3);
    for (uint32_t x = 0; x < 64; ++x) CHECK((t.map(x) >> 3) == (x >> 3));
  }

  TEST_CASE("apply, inverse and entropy invariance") {
    Rng rng(14);
    auto p = gen_uniform_simplex(32, rng);
    CHECK(PermutationTransform::identity(32).apply(p) == p);
    std::vector<uint32_t> table = testing::iota_table(32);
    rng.shuffle(table.begin(), table.end());
    auto t = PermutationTransform::from_table(table);
    CHECK(t.inverse().apply(t.apply(p)) == p);
    CHECK(t.apply(p).entropy() == Approx(p.entropy()));
    CHECK_THROWS_AS(PermutationTransform::from_table({0, 0, 1, 2}), std::invalid_argument);
  }

  TEST_CASE("cost basics and oracle agreement") {
    Rng rng(15);
    std::vector<uint32_t> table = testing::iota_table(16);
    rng.shuffle(table.begin(), table.end());
    auto t = PermutationTransform::from_table(table);
    CHECK(cost(JointDistribution::uniform(16), t) == Approx(0.0).epsilon(1e-12));
    CHECK(cost(JointDistribution::point_mass(16, 3), t) == Approx(0.0).epsilon(1e-12));
    for (int i = 0; i < 30; ++i) {
      auto p = gen_uniform_simplex(16, rng);
      double direct = testing::marginal_sum_direct(p.probs(), table, 4) - testing::plain_entropy({p.probs().begin(), p.probs().end()});
      CHECK(cost(p, t) == Approx(direct).epsilon(1e-12));
      CHECK(cost(p, t) >= -1e-12);
    }
    std::vector<double> pi = {0.1, 0.3, 0.45};
    CHECK(cost(JointDistribution::independent_bits(pi), PermutationTransform::identity(8)) == Approx(0.0).epsilon(1e-12));
  }

  TEST_CASE("worst-case distribution cost") {
    auto w = worst_case_distribution(8);
    CHECK(cost(w, order_permutation(w)) == Approx(0.253319).epsilon(1e-5));
    auto w2 = worst_case_distribution(2);
    CHECK(w2[0] == Approx(1.0 / 3));
    CHECK(w2[1] == Approx(2.0 / 3));
  }

  TEST_CASE("cost invariant to bit inversion and bit reordering") {
    Rng rng(16);
    auto p = gen_uniform_simplex(16, rng);
    auto t = order_permutation(p);
    double c = cost(p, t);
    std::vector<uint32_t> flipped(16), swapped(16);
    for (uint32_t x = 0; x < 16; ++x) {
      uint32_t y = t.map(x);
      flipped[x] = y ^ 0b0100;
      swapped[x] = ((y & 1) << 3) | ((y >> 3) & 1) | (y & 0b0110);
    }
    CHECK(cost(p, PermutationTransform::from_table(flipped)) == Approx(c).epsilon(1e-12));
    CHECK(cost(p, PermutationTransform::from_table(swapped)) == Approx(c).epsilon(1e-12));
  }

  TEST_CASE("descriptor round trips") {
    Rng rng(17);
    auto p = JointDistribution::from_probs({0.0, 0.3, 0.0, 0.1, 0.2, 0.15, 0.05, 0.2});
    std::vector<PermutationTransform> all = {order_permutation(p), block_order_permutation(p, 2),
                                             PermutationTransform::identity(8)};
    std::vector<uint32_t> table = testing::iota_table(8);
    rng.shuffle(table.begin(), table.end());
    all.push_back(PermutationTransform::from_table(table));
    all.push_back(PermutationTransform::linear(BinaryMatrix(3, {0b011, 0b110, 0b100})));
    for (const auto& t : all) {
      auto bytes = t.serialize();
      std::size_t used = 0;
      auto u = PermutationTransform::deserialize(bytes, &used);
      CHECK(used == bytes.size());
      CHECK(u == t);
    }
    std::vector<uint8_t> junk = {9, 1, 2};
    CHECK_THROWS(PermutationTransform::deserialize(junk));
  }
}
