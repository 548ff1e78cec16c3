#include "gbica/huffman.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>

namespace gbica {

double HuffmanCodebook::kraft_sum() const {
  double s = 0.0;
  for (uint8_t l : lengths)
    if (l) s += std::ldexp(1.0, -l);
  return s;
}

bool HuffmanCodebook::prefix_free() const {
  std::vector<std::pair<uint64_t, int>> words;
  for (std::size_t i = 0; i < lengths.size(); ++i)
    if (lengths[i]) words.emplace_back(codes[i], lengths[i]);
  for (std::size_t a = 0; a < words.size(); ++a)
    for (std::size_t b = 0; b < words.size(); ++b) {
      if (a == b) continue;
      auto [ca, la] = words[a];
      auto [cb, lb] = words[b];
      if (la <= lb && (cb >> (lb - la)) == ca) return false;
    }
  return true;
}

double HuffmanCodebook::average_length(std::span<const double> weights) const {
  double total = 0.0, acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    total += weights[i];
    acc += weights[i] * lengths[i];
  }
  return total > 0.0 ? acc / total : 0.0;
}

HuffmanCodebook huffman_build(std::span<const double> weights) {
  std::size_t m = weights.size();
  // Node: (weight, creation order) keeps the merge order deterministic.
  using Item = std::tuple<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  std::vector<std::size_t> parent;
  std::vector<std::size_t> leaf_node(m, SIZE_MAX);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) throw std::invalid_argument("Huffman weights must be finite and non-negative");
    if (weights[i] > 0.0) {
      leaf_node[i] = parent.size();
      heap.emplace(weights[i], parent.size());
      parent.push_back(SIZE_MAX);
    }
  }
  if (heap.empty()) throw std::invalid_argument("Huffman code needs at least one positive weight");

  HuffmanCodebook cb;
  cb.lengths.assign(m, 0);
  cb.codes.assign(m, 0);
  if (heap.size() == 1) {
    for (std::size_t i = 0; i < m; ++i)
      if (leaf_node[i] != SIZE_MAX) cb.lengths[i] = 1;
    return canonicalize(cb).to_codebook();
  }
  while (heap.size() > 1) {
    auto [wa, a] = heap.top();
    heap.pop();
    auto [wb, b] = heap.top();
    heap.pop();
    std::size_t node = parent.size();
    parent.push_back(SIZE_MAX);
    parent[a] = node;
    parent[b] = node;
    heap.emplace(wa + wb, node);
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (leaf_node[i] == SIZE_MAX) continue;
    int depth = 0;
    for (std::size_t v = leaf_node[i]; parent[v] != SIZE_MAX; v = parent[v]) ++depth;
    if (depth > kMaxCodeLength) throw std::length_error("Huffman code length exceeds " + std::to_string(kMaxCodeLength));
    cb.lengths[i] = static_cast<uint8_t>(depth);
  }
  return canonicalize(cb).to_codebook();
}

HuffmanCodebook huffman_build_counts(std::span<const uint64_t> counts) {
  std::vector<double> w(counts.begin(), counts.end());
  return huffman_build(w);
}

CanonicalCodebook canonicalize(const HuffmanCodebook& codebook) {
  CanonicalCodebook c;
  c.m = codebook.size();
  for (uint8_t l : codebook.lengths) c.max_length = std::max<int>(c.max_length, l);
  c.count_per_length.assign(c.max_length + 1, 0);
  for (uint8_t l : codebook.lengths)
    if (l) ++c.count_per_length[l];
  for (int l = 1; l <= c.max_length; ++l)
    for (std::size_t i = 0; i < codebook.size(); ++i)
      if (codebook.lengths[i] == l) c.symbols.push_back(static_cast<uint32_t>(i));
  return c;
}

HuffmanCodebook CanonicalCodebook::to_codebook() const {
  HuffmanCodebook cb;
  cb.lengths.assign(m, 0);
  cb.codes.assign(m, 0);
  uint64_t code = 0;
  std::size_t k = 0;
  for (int l = 1; l <= max_length; ++l) {
    for (uint32_t c = 0; c < count_per_length[l]; ++c) {
      uint32_t s = symbols.at(k++);
      cb.lengths[s] = static_cast<uint8_t>(l);
      cb.codes[s] = code++;
    }
    code <<= 1;
  }
  return cb;
}

BitWriter serialize_codebook(const CanonicalCodebook& canonical) {
  BitWriter w;
  w.put_gamma(static_cast<uint64_t>(canonical.max_length) + 1);
  for (int l = 1; l <= canonical.max_length; ++l) w.put_gamma(uint64_t{canonical.count_per_length[l]} + 1);
  int id_bits = bits_for(canonical.m);
  for (uint32_t s : canonical.symbols) w.put_bits(s, id_bits);
  return w;
}

CanonicalCodebook deserialize_codebook(BitReader& in, std::size_t m) {
  CanonicalCodebook c;
  c.m = m;
  uint64_t ml = in.get_gamma() - 1;
  if (ml > static_cast<uint64_t>(kMaxCodeLength)) throw DecodeError("codebook max length out of range");
  c.max_length = static_cast<int>(ml);
  c.count_per_length.assign(c.max_length + 1, 0);
  uint64_t total = 0;
  double kraft = 0.0;
  for (int l = 1; l <= c.max_length; ++l) {
    uint64_t cnt = in.get_gamma() - 1;
    if (cnt > m) throw DecodeError("codebook length count exceeds alphabet");
    c.count_per_length[l] = static_cast<uint32_t>(cnt);
    total += cnt;
    kraft += std::ldexp(static_cast<double>(cnt), -l);
  }
  if (total > m || kraft > 1.0 + 1e-12) throw DecodeError("codebook histogram is not a valid prefix code");
  int id_bits = bits_for(m);
  std::vector<char> seen(m, 0);
  for (uint64_t i = 0; i < total; ++i) {
    uint64_t s = in.get_bits(id_bits);
    if (s >= m || seen[s]) throw DecodeError("codebook symbol invalid or repeated");
    seen[s] = 1;
    c.symbols.push_back(static_cast<uint32_t>(s));
  }
  return c;
}

uint64_t explicit_table_bits(const HuffmanCodebook& codebook) {
  uint64_t bits = 0;
  int id_bits = bits_for(codebook.size());
  for (uint8_t l : codebook.lengths)
    if (l) bits += static_cast<uint64_t>(id_bits) + 8 + l;
  return bits;
}

void prefix_encode(std::span<const uint32_t> samples, const HuffmanCodebook& codebook, BitWriter& out) {
  for (uint32_t s : samples) {
    if (s >= codebook.size() || codebook.lengths[s] == 0)
      throw std::invalid_argument("symbol " + std::to_string(s) + " has no codeword");
    out.put_bits(codebook.codes[s], codebook.lengths[s]);
  }
}

std::vector<uint32_t> prefix_decode(BitReader& in, const HuffmanCodebook& codebook, std::size_t n) {
  // Binary trie: child[node][bit]; leaves store symbol + 1 as a negative marker.
  std::vector<std::array<int64_t, 2>> child(1, {0, 0});
  for (std::size_t s = 0; s < codebook.size(); ++s) {
    int l = codebook.lengths[s];
    if (!l) continue;
    int64_t node = 0;
    for (int i = l - 1; i >= 0; --i) {
      unsigned b = (codebook.codes[s] >> i) & 1U;
      int64_t& next = child[node][b];
      if (i == 0) {
        if (next != 0) throw std::invalid_argument("codebook is not prefix free");
        next = -static_cast<int64_t>(s) - 1;
      } else {
        if (next < 0) throw std::invalid_argument("codebook is not prefix free");
        if (next == 0) {
          next = static_cast<int64_t>(child.size());
          child.push_back({0, 0});
        }
        node = child[node][b];
      }
    }
  }
  std::vector<uint32_t> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    int64_t node = 0;
    for (;;) {
      int64_t next = child[node][in.get_bit()];
      if (next < 0) {
        out.push_back(static_cast<uint32_t>(-next - 1));
        break;
      }
      if (next == 0) throw DecodeError("bit pattern matches no codeword");
      node = next;
    }
  }
  return out;
}

}  // namespace gbica
