#include "gbica/transforms.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace gbica {

namespace {

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

struct Reader {
  std::span<const uint8_t> bytes;
  std::size_t pos = 0;

  uint8_t u8() {
    if (pos >= bytes.size()) throw DecodeError("transform descriptor truncated");
    return bytes[pos++];
  }
  uint32_t u32() {
    if (bytes.size() - pos < 4 || pos > bytes.size()) throw DecodeError("transform descriptor truncated");
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(bytes[pos++]) << (8 * i);
    return v;
  }
};

constexpr uint32_t kMaxDescriptorSymbols = uint32_t{1} << 28;

std::vector<uint32_t> ascending_ranking(std::span<const double> w) {
  std::vector<uint32_t> idx(w.size());
  std::iota(idx.begin(), idx.end(), 0U);
  std::stable_sort(idx.begin(), idx.end(), [&](uint32_t a, uint32_t b) { return w[a] < w[b]; });
  return idx;
}

std::size_t count_zero_prefix(std::span<const double> w, const std::vector<uint32_t>& ranking) {
  std::size_t z = 0;
  while (z < ranking.size() && w[ranking[z]] == 0.0) ++z;
  return z;
}

// Rebuilds a full ranking from the positive-mass tail; zero-mass symbols
// (those absent from the tail) take the leading ranks by index.
std::vector<uint32_t> complete_ranking(std::size_t m, const std::vector<uint32_t>& tail) {
  std::vector<char> listed(m, 0);
  for (uint32_t s : tail) {
    if (s >= m) throw DecodeError("transform descriptor symbol out of range");
    if (listed[s]) throw DecodeError("transform descriptor repeats a symbol");
    listed[s] = 1;
  }
  std::vector<uint32_t> full;
  full.reserve(m);
  for (uint32_t s = 0; s < m; ++s)
    if (!listed[s]) full.push_back(s);
  full.insert(full.end(), tail.begin(), tail.end());
  return full;
}

}  // namespace

PermutationTransform PermutationTransform::identity(std::size_t m) {
  std::vector<uint32_t> t(m);
  std::iota(t.begin(), t.end(), 0U);
  return from_table(std::move(t));
}

PermutationTransform PermutationTransform::from_table(std::vector<uint32_t> table) {
  std::vector<char> seen(table.size(), 0);
  for (uint32_t y : table) {
    if (y >= table.size() || seen[y]) throw std::invalid_argument("transform table is not a bijection");
    seen[y] = 1;
  }
  PermutationTransform t;
  t.kind_ = TransformKind::Explicit;
  t.table_ = std::move(table);
  return t;
}

PermutationTransform PermutationTransform::from_ranking(std::vector<uint32_t> sorted_symbols, std::size_t zero_prefix) {
  std::vector<uint32_t> table(sorted_symbols.size());
  std::vector<char> seen(sorted_symbols.size(), 0);
  for (std::size_t i = 0; i < sorted_symbols.size(); ++i) {
    uint32_t s = sorted_symbols[i];
    if (s >= table.size() || seen[s]) throw std::invalid_argument("ranking is not a permutation");
    seen[s] = 1;
    table[s] = static_cast<uint32_t>(i);
  }
  PermutationTransform t;
  t.kind_ = TransformKind::Order;
  t.table_ = std::move(table);
  t.rankings_ = {std::move(sorted_symbols)};
  t.zero_prefix_ = {zero_prefix};
  return t;
}

PermutationTransform PermutationTransform::from_block_ranking(int b, std::vector<std::vector<uint32_t>> block_sorted,
                                                              std::vector<std::size_t> zero_prefix) {
  if (b < 0 || b > 31) throw std::invalid_argument("block bits out of range");
  std::size_t mb = std::size_t{1} << b;
  std::vector<uint32_t> table(mb * block_sorted.size());
  for (std::size_t v = 0; v < block_sorted.size(); ++v) {
    if (block_sorted[v].size() != mb) throw std::invalid_argument("block ranking has wrong size");
    std::vector<char> seen(mb, 0);
    for (std::size_t i = 0; i < mb; ++i) {
      uint32_t s = block_sorted[v][i];
      if (s >= mb || seen[s]) throw std::invalid_argument("block ranking is not a permutation");
      seen[s] = 1;
      table[v * mb + s] = static_cast<uint32_t>(v * mb + i);
    }
  }
  PermutationTransform t;
  t.kind_ = TransformKind::BlockOrder;
  t.table_ = std::move(table);
  t.block_bits_ = b;
  t.rankings_ = std::move(block_sorted);
  t.zero_prefix_ = std::move(zero_prefix);
  return t;
}

PermutationTransform PermutationTransform::linear(const BinaryMatrix& w) {
  if (!w.invertible()) throw std::invalid_argument("linear transform matrix is singular");
  if (w.dim() > 28) throw std::invalid_argument("linear transform dimension too large to tabulate");
  std::size_t m = std::size_t{1} << w.dim();
  std::vector<uint32_t> table(m);
  for (std::size_t x = 0; x < m; ++x) table[x] = static_cast<uint32_t>(w.apply(x));
  PermutationTransform t;
  t.kind_ = TransformKind::Linear;
  t.table_ = std::move(table);
  t.matrix_ = w;
  return t;
}

PermutationTransform PermutationTransform::inverse() const {
  std::vector<uint32_t> inv(table_.size());
  for (std::size_t x = 0; x < table_.size(); ++x) inv[table_[x]] = static_cast<uint32_t>(x);
  return from_table(std::move(inv));
}

JointDistribution PermutationTransform::apply(const JointDistribution& dist) const {
  if (dist.size() != table_.size()) throw std::invalid_argument("transform size does not match distribution");
  std::vector<double> q(table_.size());
  auto p = dist.probs();
  for (std::size_t x = 0; x < table_.size(); ++x) q[table_[x]] = p[x];
  return JointDistribution::from_probs(std::move(q), dist.radix());
}

std::vector<uint32_t> PermutationTransform::apply(std::span<const uint32_t> samples) const {
  std::vector<uint32_t> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i] >= table_.size()) throw std::out_of_range("sample outside transform alphabet");
    out[i] = table_[samples[i]];
  }
  return out;
}

std::vector<uint8_t> PermutationTransform::serialize() const {
  std::vector<uint8_t> out;
  out.push_back(static_cast<uint8_t>(kind_));
  switch (kind_) {
    case TransformKind::Explicit:
      put_u32(out, static_cast<uint32_t>(table_.size()));
      for (uint32_t y : table_) put_u32(out, y);
      break;
    case TransformKind::Order: {
      const auto& r = rankings_[0];
      std::size_t z = zero_prefix_[0];
      put_u32(out, static_cast<uint32_t>(r.size()));
      put_u32(out, static_cast<uint32_t>(r.size() - z));
      for (std::size_t i = z; i < r.size(); ++i) put_u32(out, r[i]);
      break;
    }
    case TransformKind::BlockOrder:
      out.push_back(static_cast<uint8_t>(block_bits_));
      put_u32(out, static_cast<uint32_t>(rankings_.size()));
      for (std::size_t v = 0; v < rankings_.size(); ++v) {
        const auto& r = rankings_[v];
        std::size_t z = zero_prefix_[v];
        put_u32(out, static_cast<uint32_t>(r.size() - z));
        for (std::size_t i = z; i < r.size(); ++i) put_u32(out, r[i]);
      }
      break;
    case TransformKind::Linear:
      out.push_back(static_cast<uint8_t>(matrix_.dim()));
      for (uint64_t row : matrix_.rows()) put_u32(out, static_cast<uint32_t>(row));
      break;
  }
  return out;
}

PermutationTransform PermutationTransform::deserialize(std::span<const uint8_t> bytes, std::size_t* consumed) {
  Reader rd{bytes};
  uint8_t tag = rd.u8();
  PermutationTransform t;
  try {
    switch (tag) {
      case 0: {
        uint32_t m = rd.u32();
        if (m > kMaxDescriptorSymbols) throw DecodeError("transform descriptor too large");
        std::vector<uint32_t> table(m);
        for (auto& y : table) y = rd.u32();
        t = from_table(std::move(table));
        break;
      }
      case 1: {
        uint32_t m = rd.u32();
        uint32_t count = rd.u32();
        if (m > kMaxDescriptorSymbols || count > m) throw DecodeError("transform descriptor sizes invalid");
        std::vector<uint32_t> tail(count);
        for (auto& s : tail) s = rd.u32();
        t = from_ranking(complete_ranking(m, tail), m - count);
        break;
      }
      case 2: {
        int b = rd.u8();
        uint32_t blocks = rd.u32();
        if (b > 28 || (static_cast<uint64_t>(blocks) << b) > kMaxDescriptorSymbols)
          throw DecodeError("transform descriptor sizes invalid");
        std::size_t mb = std::size_t{1} << b;
        std::vector<std::vector<uint32_t>> ranks(blocks);
        std::vector<std::size_t> zeros(blocks);
        for (uint32_t v = 0; v < blocks; ++v) {
          uint32_t count = rd.u32();
          if (count > mb) throw DecodeError("transform descriptor block count invalid");
          std::vector<uint32_t> tail(count);
          for (auto& s : tail) s = rd.u32();
          ranks[v] = complete_ranking(mb, tail);
          zeros[v] = mb - count;
        }
        t = from_block_ranking(b, std::move(ranks), std::move(zeros));
        break;
      }
      case 3: {
        int d = rd.u8();
        if (d > 28) throw DecodeError("transform descriptor dimension invalid");
        std::vector<uint64_t> rows(d);
        for (auto& r : rows) r = rd.u32();
        t = linear(BinaryMatrix(d, std::move(rows)));
        break;
      }
      default:
        throw DecodeError("unknown transform descriptor tag " + std::to_string(tag));
    }
  } catch (const std::invalid_argument& e) {
    throw DecodeError(std::string("invalid transform descriptor: ") + e.what());
  }
  if (consumed) *consumed = rd.pos;
  return t;
}

PermutationTransform order_permutation(std::span<const double> weights) {
  auto ranking = ascending_ranking(weights);
  std::size_t z = count_zero_prefix(weights, ranking);
  return PermutationTransform::from_ranking(std::move(ranking), z);
}

PermutationTransform order_permutation(const JointDistribution& dist) { return order_permutation(dist.probs()); }

PermutationTransform block_order_permutation(const JointDistribution& dist, int b) {
  int d = dist.components();
  if (dist.radix() != 2) throw std::invalid_argument("block order permutation requires a binary alphabet");
  if (b < 1 || b > d) throw std::invalid_argument("block bits b must satisfy 1 <= b <= d");
  std::size_t mb = std::size_t{1} << b;
  std::size_t blocks = dist.size() / mb;
  std::vector<std::vector<uint32_t>> ranks(blocks);
  std::vector<std::size_t> zeros(blocks);
  auto p = dist.probs();
  for (std::size_t v = 0; v < blocks; ++v) {
    auto block = p.subspan(v * mb, mb);
    ranks[v] = ascending_ranking(block);
    zeros[v] = count_zero_prefix(block, ranks[v]);
  }
  return PermutationTransform::from_block_ranking(b, std::move(ranks), std::move(zeros));
}

double cost(const JointDistribution& dist, const PermutationTransform& t) {
  double c = t.apply(dist).sum_marginal_entropies() - dist.entropy();
  return c < 0.0 && c > -1e-12 ? 0.0 : c;
}

double total_correlation(const JointDistribution& dist) {
  double c = dist.sum_marginal_entropies() - dist.entropy();
  return c < 0.0 && c > -1e-12 ? 0.0 : c;
}

}  // namespace gbica
