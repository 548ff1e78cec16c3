#include "gbica/arithmetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace gbica {

namespace {

constexpr uint64_t kTop = 0xFFFFFFFFULL;
constexpr uint64_t kHalf = 0x80000000ULL;
constexpr uint64_t kFirstQuarter = 0x40000000ULL;
constexpr uint64_t kThirdQuarter = 0xC0000000ULL;

void check_interval(uint32_t lo, uint32_t hi, uint32_t total) {
  if (!(lo < hi && hi <= total && total <= kMaxFrequencyTotal))
    throw std::invalid_argument("arithmetic coder: empty interval or total above 2^16");
}

}  // namespace

void ArithmeticEncoder::emit(unsigned bit) {
  out_.put_bit(bit);
  for (; follow_ > 0; --follow_) out_.put_bit(!bit);
}

void ArithmeticEncoder::encode(uint32_t cum_low, uint32_t cum_high, uint32_t total) {
  check_interval(cum_low, cum_high, total);
  uint64_t range = high_ - low_ + 1;
  high_ = low_ + range * cum_high / total - 1;
  low_ = low_ + range * cum_low / total;
  for (;;) {
    if (high_ < kHalf) {
      emit(0);
    } else if (low_ >= kHalf) {
      emit(1);
      low_ -= kHalf;
      high_ -= kHalf;
    } else if (low_ >= kFirstQuarter && high_ < kThirdQuarter) {
      ++follow_;
      low_ -= kFirstQuarter;
      high_ -= kFirstQuarter;
    } else {
      break;
    }
    low_ = 2 * low_;
    high_ = 2 * high_ + 1;
  }
}

void ArithmeticEncoder::finish() {
  // Two bits (plus pending follows) select a quarter inside [low, high].
  ++follow_;
  emit(low_ < kFirstQuarter ? 0 : 1);
}

ArithmeticDecoder::ArithmeticDecoder(BitReader& in) : in_(in) {
  for (int i = 0; i < 32; ++i) value_ = (value_ << 1) | in_.get_bit();
}

uint32_t ArithmeticDecoder::target(uint32_t total) const {
  uint64_t range = high_ - low_ + 1;
  return static_cast<uint32_t>(((value_ - low_ + 1) * total - 1) / range);
}

void ArithmeticDecoder::consume(uint32_t cum_low, uint32_t cum_high, uint32_t total) {
  check_interval(cum_low, cum_high, total);
  uint64_t range = high_ - low_ + 1;
  high_ = low_ + range * cum_high / total - 1;
  low_ = low_ + range * cum_low / total;
  for (;;) {
    if (high_ < kHalf) {
    } else if (low_ >= kHalf) {
      low_ -= kHalf;
      high_ -= kHalf;
      value_ -= kHalf;
    } else if (low_ >= kFirstQuarter && high_ < kThirdQuarter) {
      low_ -= kFirstQuarter;
      high_ -= kFirstQuarter;
      value_ -= kFirstQuarter;
    } else {
      break;
    }
    low_ = 2 * low_;
    high_ = 2 * high_ + 1;
    value_ = (2 * value_ | in_.get_bit()) & kTop;
  }
}

StaticModel::StaticModel(std::vector<uint32_t> freqs) : freqs_(std::move(freqs)), cum_(freqs_.size() + 1, 0) {
  if (freqs_.empty()) throw std::invalid_argument("static model needs at least one symbol");
  uint64_t t = 0;
  for (std::size_t i = 0; i < freqs_.size(); ++i) {
    t += freqs_[i];
    if (t > kMaxFrequencyTotal) throw std::invalid_argument("static model total exceeds 2^16");
    cum_[i + 1] = static_cast<uint32_t>(t);
  }
  if (t == 0) throw std::invalid_argument("static model has zero total frequency");
}

StaticModel StaticModel::from_probabilities(std::span<const double> probs) {
  std::size_t positive = 0;
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("model probabilities must be finite and non-negative");
    if (p > 0.0) ++positive;
    total += p;
  }
  if (positive == 0) throw std::invalid_argument("model needs a positive probability");
  if (positive > kMaxFrequencyTotal) throw std::invalid_argument("too many symbols for a 2^16 frequency total");
  // Every positive symbol keeps frequency >= 1; the rest share the remaining budget.
  double budget = static_cast<double>(kMaxFrequencyTotal - positive);
  std::vector<uint32_t> f(probs.size(), 0);
  for (std::size_t i = 0; i < probs.size(); ++i)
    if (probs[i] > 0.0) f[i] = 1 + static_cast<uint32_t>(std::floor(budget * probs[i] / total));
  return StaticModel(std::move(f));
}

uint32_t StaticModel::find(uint32_t target) const {
  auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
  return static_cast<uint32_t>(it - cum_.begin()) - 1;
}

double model_code_length(std::span<const uint32_t> samples, const StaticModel& model) {
  double bits = 0.0;
  for (uint32_t s : samples) {
    if (s >= model.size() || model.freq(s) == 0) return std::numeric_limits<double>::infinity();
    bits -= std::log2(model.probability(s));
  }
  return bits;
}

void arithmetic_encode(std::span<const uint32_t> samples, const StaticModel& model, BitWriter& out) {
  ArithmeticEncoder enc(out);
  for (uint32_t s : samples) {
    if (s >= model.size() || model.freq(s) == 0)
      throw std::invalid_argument("symbol " + std::to_string(s) + " has zero probability under the model");
    enc.encode(model.cum(s), model.cum(s + 1), model.total());
  }
  enc.finish();
}

std::vector<uint32_t> arithmetic_decode(BitReader& in, const StaticModel& model, std::size_t n) {
  ArithmeticDecoder dec(in);
  std::vector<uint32_t> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    uint32_t t = dec.target(model.total());
    if (t >= model.total()) throw DecodeError("arithmetic stream corrupt");
    uint32_t s = model.find(t);
    dec.consume(model.cum(s), model.cum(s + 1), model.total());
    out.push_back(s);
  }
  return out;
}

AdaptiveModel::AdaptiveModel(std::size_t m) : m_(m), freq_(m, 1), tree_(m + 1, 0) {
  if (m == 0 || m > kMaxAdaptiveAlphabet)
    throw std::invalid_argument("adaptive alphabet must be in [1, 2^15] (got " + std::to_string(m) + ")");
  while (top_bit_ * 2 <= m_) top_bit_ *= 2;
  rebuild();
}

void AdaptiveModel::fenwick_add(std::size_t i, int64_t delta) {
  for (++i; i <= m_; i += i & (~i + 1)) tree_[i] = static_cast<uint32_t>(tree_[i] + delta);
}

void AdaptiveModel::rebuild() {
  std::fill(tree_.begin(), tree_.end(), 0);
  total_ = 0;
  for (std::size_t i = 0; i < m_; ++i) {
    tree_[i + 1] += freq_[i];
    std::size_t parent = (i + 1) + ((i + 1) & (~(i + 1) + 1));
    if (parent <= m_) tree_[parent] += tree_[i + 1];
    total_ += freq_[i];
  }
}

uint32_t AdaptiveModel::cum(uint32_t s) const {
  uint32_t c = 0;
  for (std::size_t i = s; i > 0; i -= i & (~i + 1)) c += tree_[i];
  return c;
}

uint32_t AdaptiveModel::find(uint32_t target) const {
  // Largest prefix whose sum <= target.
  std::size_t pos = 0;
  uint32_t rem = target;
  for (std::size_t step = top_bit_; step > 0; step >>= 1) {
    std::size_t next = pos + step;
    if (next <= m_ && tree_[next] <= rem) {
      pos = next;
      rem -= tree_[next];
    }
  }
  return static_cast<uint32_t>(pos);
}

void AdaptiveModel::update(uint32_t s) {
  freq_[s] += 2;
  fenwick_add(s, 2);
  total_ += 2;
  if (total_ > kMaxFrequencyTotal) {
    for (auto& f : freq_) f = (f / 2) | 1U;
    rebuild();
  }
}

void AdaptiveModel::encode(ArithmeticEncoder& enc, uint32_t s) const {
  if (s >= m_) throw std::out_of_range("symbol " + std::to_string(s) + " outside adaptive alphabet");
  uint32_t lo = cum(s);
  enc.encode(lo, lo + freq_[s], total_);
}

uint32_t AdaptiveModel::decode(ArithmeticDecoder& dec) const {
  uint32_t t = dec.target(total_);
  if (t >= total_) throw DecodeError("arithmetic stream corrupt");
  uint32_t s = find(t);
  uint32_t lo = cum(s);
  dec.consume(lo, lo + freq_[s], total_);
  return s;
}

void adaptive_encode(std::span<const uint32_t> samples, std::size_t m, BitWriter& out) {
  AdaptiveModel model(m);
  ArithmeticEncoder enc(out);
  for (uint32_t s : samples) {
    model.encode(enc, s);
    model.update(s);
  }
  enc.finish();
}

std::vector<uint32_t> adaptive_decode(BitReader& in, std::size_t m, std::size_t n) {
  AdaptiveModel model(m);
  ArithmeticDecoder dec(in);
  std::vector<uint32_t> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    uint32_t s = model.decode(dec);
    model.update(s);
    out.push_back(s);
  }
  return out;
}

double kt_code_length(std::span<const uint32_t> samples, std::size_t m) {
  std::unordered_map<uint32_t, uint64_t> counts;
  double bits = 0.0;
  double half_m = 0.5 * static_cast<double>(m);
  uint64_t t = 0;
  for (uint32_t s : samples) {
    uint64_t& c = counts[s];
    bits -= std::log2((static_cast<double>(c) + 0.5) / (static_cast<double>(t) + half_m));
    ++c;
    ++t;
  }
  return bits;
}

}  // namespace gbica
