#pragma once

// 32-bit integer arithmetic coder with deferred (follow) bits.

#include <cstdint>
#include <span>
#include <vector>

#include "gbica/bitstream.hpp"

namespace gbica {

inline constexpr uint32_t kMaxFrequencyTotal = uint32_t{1} << 16;

class ArithmeticEncoder {
 public:
  explicit ArithmeticEncoder(BitWriter& out) : out_(out) {}
  /// Narrows to [cum_low, cum_high) out of total. Requires cum_low < cum_high <= total <= 2^16.
  void encode(uint32_t cum_low, uint32_t cum_high, uint32_t total);
  void finish();

 private:
  void emit(unsigned bit);
  BitWriter& out_;
  uint64_t low_ = 0;
  uint64_t high_ = 0xFFFFFFFFULL;
  uint64_t follow_ = 0;
};

class ArithmeticDecoder {
 public:
  /// Reads past the end of the payload as zeros.
  explicit ArithmeticDecoder(BitReader& in);
  /// Cumulative count the next symbol falls under.
  uint32_t target(uint32_t total) const;
  void consume(uint32_t cum_low, uint32_t cum_high, uint32_t total);

 private:
  BitReader& in_;
  uint64_t low_ = 0;
  uint64_t high_ = 0xFFFFFFFFULL;
  uint64_t value_ = 0;
};

/// Fixed integer frequency table.
class StaticModel {
 public:
  explicit StaticModel(std::vector<uint32_t> freqs);
  /// Scales probabilities to integer frequencies with total <= 2^16; every
  /// positive probability keeps a positive frequency.
  static StaticModel from_probabilities(std::span<const double> probs);

  std::size_t size() const { return freqs_.size(); }
  uint32_t total() const { return cum_.back(); }
  uint32_t freq(uint32_t s) const { return freqs_[s]; }
  uint32_t cum(uint32_t s) const { return cum_[s]; }
  const std::vector<uint32_t>& freqs() const { return freqs_; }
  double probability(uint32_t s) const { return static_cast<double>(freqs_[s]) / total(); }
  uint32_t find(uint32_t target) const;

 private:
  std::vector<uint32_t> freqs_;
  std::vector<uint32_t> cum_;  // size + 1 entries
};

/// −log2 P(samples) under the model; +inf if a symbol has zero frequency.
double model_code_length(std::span<const uint32_t> samples, const StaticModel& model);

void arithmetic_encode(std::span<const uint32_t> samples, const StaticModel& model, BitWriter& out);
std::vector<uint32_t> arithmetic_decode(BitReader& in, const StaticModel& model, std::size_t n);

/// Krichevsky–Trofimov adaptive model: weight of symbol i is 2·count_i + 1,
/// halved when the total passes 2^16.
class AdaptiveModel {
 public:
  explicit AdaptiveModel(std::size_t m);
  std::size_t size() const { return m_; }
  uint32_t total() const { return total_; }
  uint32_t freq(uint32_t s) const { return freq_[s]; }
  uint32_t cum(uint32_t s) const;
  uint32_t find(uint32_t target) const;
  void update(uint32_t s);

  void encode(ArithmeticEncoder& enc, uint32_t s) const;
  uint32_t decode(ArithmeticDecoder& dec) const;

 private:
  void fenwick_add(std::size_t i, int64_t delta);
  void rebuild();
  std::size_t m_;
  uint32_t total_ = 0;
  std::vector<uint32_t> freq_;
  std::vector<uint32_t> tree_;
  std::size_t top_bit_ = 1;
};

inline constexpr std::size_t kMaxAdaptiveAlphabet = std::size_t{1} << 15;

void adaptive_encode(std::span<const uint32_t> samples, std::size_t m, BitWriter& out);
std::vector<uint32_t> adaptive_decode(BitReader& in, std::size_t m, std::size_t n);

/// Ideal KT code length Σ −log2((c_s + 1/2) / (t + m/2)) of a sequence, in bits.
/// Symbols are not bounds-checked against m beyond the count table.
double kt_code_length(std::span<const uint32_t> samples, std::size_t m);

}  // namespace gbica
