#include <doctest.h>

#include "gbica/arithmetic.hpp"
#include "gbica/bitstream.hpp"
#include "gbica/huffman.hpp"
#include "gbica/stream_format.hpp"
#include "helpers.hpp"

using namespace gbica;
using doctest::Approx;

namespace {

std::vector<double> random_probs(Rng& rng, std::size_t m) {
  std::vector<double> p(m);
  double t = 0.0;
  for (auto& v : p) t += (v = rng.exponential());
  for (auto& v : p) v /= t;
  return p;
}

// Minimum Σ p_i l_i over length vectors with Kraft sum ≤ 1 (lengths ≤ m).
double brute_force_min_length(const std::vector<double>& p) {
  std::size_t m = p.size();
  std::vector<int> len(m, 1);
  double best = 1e300;
  while (true) {
    double kraft = 0.0, avg = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      kraft += std::ldexp(1.0, -len[i]);
      avg += p[i] * len[i];
    }
    if (kraft <= 1.0 + 1e-12) best = std::min(best, avg);
    std::size_t i = 0;
    while (i < m && ++len[i] > static_cast<int>(m)) len[i++] = 1;
    if (i == m) break;
  }
  return best;
}

}  // namespace

TEST_SUITE("entropy_coding") {
  TEST_CASE("bit writer and reader") {
    BitWriter w;
    w.put_bits(0b1011, 4);
    w.put_gamma(1);
    w.put_gamma(9);
    w.put_bit(1);
    BitReader r(w.bytes(), w.bit_length());
    CHECK(r.get_bits(4) == 0b1011);
    CHECK(r.get_gamma() == 1);
    CHECK(r.get_gamma() == 9);
    CHECK(r.get_bit() == 1);
    CHECK(r.exhausted());
    CHECK_THROWS_AS(r.get_bit(), DecodeError);
    BitReader padded(w.bytes(), w.bit_length(), true);
    padded.get_bits(static_cast<int>(w.bit_length()));
    CHECK(padded.get_bits(5) == 0);
    std::vector<uint8_t> v;
    for (uint64_t x : {0ull, 1ull, 127ull, 128ull, 300ull, ~0ull}) put_varint(v, x);
    std::size_t pos = 0;
    for (uint64_t x : {0ull, 1ull, 127ull, 128ull, 300ull, ~0ull}) CHECK(get_varint(v, pos) == x);
    CHECK_THROWS_AS(get_varint(v, pos), DecodeError);
  }

  TEST_CASE("huffman dyadic and degenerate cases") {
    std::vector<double> p = {0.5, 0.25, 0.25};
    auto cb = huffman_build(p);
    CHECK(cb.lengths == std::vector<uint8_t>{1, 2, 2});
    CHECK(cb.average_length(p) == Approx(1.5));
    auto one = huffman_build(std::vector<double>{0.0, 1.0, 0.0});
    CHECK(one.lengths[1] == 1);
    CHECK(one.lengths[0] == 0);
    auto can = canonicalize(cb).to_codebook();
    CHECK(can.codes == std::vector<uint64_t>{0b0, 0b10, 0b11});
  }

  TEST_CASE("huffman bounds, Kraft and prefix property") {
    Rng rng(61);
    for (int i = 0; i < 300; ++i) {
      auto p = random_probs(rng, 2 + rng.below(200));
      auto cb = huffman_build(p);
      double h = testing::plain_entropy(p);
      double l = cb.average_length(p);
      CHECK(l >= h - 1e-12);
      CHECK(l < h + 1.0);
      CHECK(cb.kraft_sum() == Approx(1.0));
      CHECK(cb.prefix_free());
    }
  }

  TEST_CASE("huffman is optimal on small alphabets") {
    Rng rng(62);
    for (int i = 0; i < 40; ++i) {
      auto p = random_probs(rng, 2 + rng.below(5));
      CHECK(huffman_build(p).average_length(p) == Approx(brute_force_min_length(p)).epsilon(1e-12));
    }
  }

  TEST_CASE("canonical codebook example and serialization") {
    HuffmanCodebook abcd;
    abcd.lengths = {2, 1, 3, 3};
    abcd.codes = {0b11, 0b0, 0b101, 0b100};
    auto can = canonicalize(abcd);
    auto c = can.to_codebook();
    CHECK(c.codes == std::vector<uint64_t>{0b10, 0b0, 0b110, 0b111});
    CHECK(c.lengths == abcd.lengths);
    Rng rng(63);
    for (int i = 0; i < 100; ++i) {
      std::size_t m = 2 + rng.below(500);
      auto p = random_probs(rng, m);
      for (auto& v : p)
        if (rng.below(4) == 0) v = 0.0;
      p[0] += 1e-3;
      auto cb = huffman_build(p);
      auto cc = canonicalize(cb);
      auto bits = serialize_codebook(cc);
      BitReader r(bits.bytes(), bits.bit_length());
      CHECK(deserialize_codebook(r, m) == cc);
      CHECK(bits.bit_length() < explicit_table_bits(cb));
    }
  }

  TEST_CASE("prefix coding") {
    HuffmanCodebook cb;
    cb.lengths = {1, 2, 0};
    cb.codes = {0b0, 0b10, 0};
    BitWriter w;
    prefix_encode(std::vector<uint32_t>{0, 0, 1}, cb, w);
    CHECK(w.bit_length() == 4);
    BitReader r(w.bytes(), w.bit_length());
    CHECK(prefix_decode(r, cb, 3) == std::vector<uint32_t>{0, 0, 1});
    BitWriter e;
    prefix_encode(std::vector<uint32_t>{}, cb, e);
    CHECK(e.bit_length() == 0);
    auto z = gen_zipf(1024, 1.1);
    Rng rng(64);
    auto x = SymbolSampler(z.probs()).draw(10000, rng);
    auto code = huffman_build_counts(count_symbols(x, 1024).counts);
    BitWriter big;
    prefix_encode(x, code, big);
    BitReader br(big.bytes(), big.bit_length());
    CHECK(prefix_decode(br, code, x.size()) == x);
  }

  TEST_CASE("static arithmetic coding") {
    auto model = StaticModel::from_probabilities(std::vector<double>{0.5, 0.25, 0.25});
    BitWriter empty;
    arithmetic_encode(std::vector<uint32_t>{}, model, empty);
    CHECK(empty.bit_length() <= 2);
    BitWriter aab;
    arithmetic_encode(std::vector<uint32_t>{0, 0, 1}, model, aab);
    CHECK(aab.bit_length() <= 6);

    auto bern = StaticModel::from_probabilities(std::vector<double>{0.9, 0.1});
    Rng rng(65);
    std::vector<uint32_t> x(10000);
    for (auto& v : x) v = rng.uniform() < 0.1 ? 1 : 0;
    BitWriter w;
    arithmetic_encode(x, bern, w);
    double realized = model_code_length(x, bern);
    CHECK(static_cast<double>(w.bit_length()) <= std::ceil(realized) + 2);
    double ones = static_cast<double>(std::count(x.begin(), x.end(), 1u));
    CHECK(realized == Approx(-ones * std::log2(0.1) - (10000 - ones) * std::log2(0.9)).epsilon(1e-3));
    BitReader r(w.bytes(), w.bit_length(), true);
    CHECK(arithmetic_decode(r, bern, x.size()) == x);

    for (int i = 0; i < 200; ++i) {
      auto m = StaticModel::from_probabilities(random_probs(rng, 2 + rng.below(40)));
      std::vector<double> mp(m.size());
      for (std::size_t s = 0; s < m.size(); ++s) mp[s] = m.probability(static_cast<uint32_t>(s));
      auto y = SymbolSampler(mp).draw(rng.below(1500), rng);
      BitWriter bw;
      arithmetic_encode(y, m, bw);
      CHECK(static_cast<double>(bw.bit_length()) <= std::ceil(model_code_length(y, m) - 1e-9) + 2);
      BitReader rr(bw.bytes(), bw.bit_length(), true);
      CHECK(arithmetic_decode(rr, m, y.size()) == y);
    }
  }

  TEST_CASE("adaptive arithmetic coding") {
    Rng rng(66);
    for (std::size_t m : {2u, 4u, 16u}) {
      for (int i = 0; i < 20; ++i) {
        std::vector<uint32_t> x(rng.below(3000));
        for (auto& v : x) v = static_cast<uint32_t>(rng.below(m));
        BitWriter w;
        adaptive_encode(x, m, w);
        BitReader r(w.bytes(), w.bit_length(), true);
        CHECK(adaptive_decode(r, m, x.size()) == x);
        CHECK(static_cast<double>(w.bit_length()) <= kt_code_length(x, m) + 2 + 1e-3 * x.size() + 1);
      }
    }
    // Deterministic source: ~ (1/2) log2 n + O(1).
    for (std::size_t n : {1000u, 100000u}) {
      std::vector<uint32_t> zeros(n, 0);
      BitWriter w;
      adaptive_encode(zeros, 2, w);
      double expect = 0.5 * std::log2(static_cast<double>(n));
      CHECK(static_cast<double>(w.bit_length()) <= expect + 4);
      CHECK(kt_code_length(zeros, 2) == Approx(expect + 0.5 * std::log2(M_PI)).epsilon(0.05));
    }
    std::vector<uint32_t> u(10000);
    for (auto& v : u) v = static_cast<uint32_t>(rng.below(4));
    BitWriter w;
    adaptive_encode(u, 4, w);
    CHECK(std::abs(static_cast<double>(w.bit_length()) / u.size() - 2.0) <= 0.05);
    CHECK_THROWS(adaptive_encode(u, kMaxAdaptiveAlphabet * 2, w));
  }

  TEST_CASE("stream container round trips and determinism") {
    Rng rng(67);
    auto z = gen_zipf(256, 1.0);
    auto x = SymbolSampler(z.probs()).draw(5000, rng);
    for (auto c : {CoderId::Huffman, CoderId::StaticArithmetic, CoderId::Adaptive}) {
      auto a = encode_stream(x, 256, c);
      auto b = encode_stream(x, 256, c);
      CHECK(a.bytes == b.bytes);
      auto d = decode_stream(a.bytes);
      CHECK(d.samples == x);
      CHECK(d.m == 256);
      auto e = encode_stream(std::vector<uint32_t>{}, 256, c);
      CHECK(decode_stream(e.bytes).samples.empty());
      auto cut = a.bytes;
      cut.resize(cut.size() / 2);
      CHECK_THROWS_AS(decode_stream(cut), DecodeError);
    }
    std::vector<uint8_t> bad = {'X', 'B', 'E', 'C', 1, 0};
    CHECK_THROWS_AS(decode_stream(bad), DecodeError);
  }
}
