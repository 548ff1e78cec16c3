#include "gbica/permutation_coding.hpp"

#include <cstring>
#include <stdexcept>
#include <string>

#include "gbica/arithmetic.hpp"
#include "gbica/bitstream.hpp"
#include "gbica/common.hpp"
#include "gbica/rank_tracker.hpp"

namespace gbica {

namespace {

constexpr char kMagic[4] = {'G', 'B', 'I', 'C'};

// Adaptive models over the components of a d-bit codeword.
class ComponentCoder {
 public:
  ComponentCoder(PermMode mode, int d) : d_(d) {
    if (mode == PermMode::Marginal) {
      widths_.assign(d, 1);
    } else {
      int hi = d - d / 2;
      widths_.push_back(hi);
      if (d / 2 > 0) widths_.push_back(d / 2);
    }
    for (int w : widths_) {
      if (w > 15) throw std::invalid_argument("block mode supports at most 30 bits per symbol");
      models_.emplace_back(std::size_t{1} << w);
    }
  }

  void encode(ArithmeticEncoder& enc, uint32_t y) {
    int shift = d_;
    for (std::size_t i = 0; i < widths_.size(); ++i) {
      shift -= widths_[i];
      uint32_t part = (y >> shift) & ((uint32_t{1} << widths_[i]) - 1);
      models_[i].encode(enc, part);
      models_[i].update(part);
    }
  }

  uint32_t decode(ArithmeticDecoder& dec) {
    uint32_t y = 0;
    for (std::size_t i = 0; i < widths_.size(); ++i) {
      uint32_t part = models_[i].decode(dec);
      models_[i].update(part);
      y = (y << widths_[i]) | part;
    }
    return y;
  }

 private:
  int d_;
  std::vector<int> widths_;
  std::vector<AdaptiveModel> models_;
};

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint64_t get_u64(std::span<const uint8_t> in, std::size_t& pos) {
  if (in.size() - pos < 8) throw DecodeError("container truncated");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= uint64_t{in[pos + i]} << (8 * i);
  pos += 8;
  return v;
}

uint8_t get_byte(std::span<const uint8_t> in, std::size_t& pos) {
  if (pos >= in.size()) throw DecodeError("container truncated");
  return in[pos++];
}

void put_blob(std::vector<uint8_t>& out, const std::vector<uint8_t>& blob) {
  put_varint(out, blob.size());
  out.insert(out.end(), blob.begin(), blob.end());
}

std::span<const uint8_t> get_blob(std::span<const uint8_t> in, std::size_t& pos) {
  uint64_t len = get_varint(in, pos);
  if (len > in.size() - pos) throw DecodeError("container truncated");
  auto s = in.subspan(pos, len);
  pos += len;
  return s;
}

// Relabels with an order permutation: fixed table, per-symbol updates or
// updates flushed at window boundaries.
class Relabeler {
 public:
  Relabeler(PermScheme scheme, std::size_t m, std::size_t window, const PermutationTransform* fixed)
      : scheme_(scheme), window_(window), tracker_(m) {
    if (scheme == PermScheme::Fixed) {
      forward_ = fixed->table();
      inverse_ = fixed->inverse().table();
    }
  }

  uint32_t forward(uint32_t x) const { return scheme_ == PermScheme::Fixed ? forward_[x] : tracker_.rank(x); }
  uint32_t backward(uint32_t y) const { return scheme_ == PermScheme::Fixed ? inverse_[y] : tracker_.select(y); }

  void observe(uint32_t x) {
    if (scheme_ == PermScheme::Adaptive) {
      tracker_.update(x);
    } else if (scheme_ == PermScheme::Window) {
      pending_.push_back(x);
      if (pending_.size() == window_) {
        for (uint32_t s : pending_) tracker_.update(s);
        pending_.clear();
      }
    }
  }

 private:
  PermScheme scheme_;
  std::size_t window_;
  RankTracker tracker_;
  std::vector<uint32_t> forward_, inverse_;
  std::vector<uint32_t> pending_;
};

void write_header(std::vector<uint8_t>& out, PermScheme scheme, PermMode mode, int d, int B, int b, uint64_t n) {
  out.insert(out.end(), kMagic, kMagic + 4);
  out.push_back(kContainerVersion);
  out.push_back(static_cast<uint8_t>(scheme));
  out.push_back(static_cast<uint8_t>(mode));
  put_varint(out, d);
  put_varint(out, B);
  put_varint(out, b);
  put_varint(out, n);
}

int alphabet_bits(std::size_t m) {
  if (m == 0 || m > (std::size_t{1} << 30)) throw std::invalid_argument("alphabet size must be in [1, 2^30]");
  return std::max(1, bits_for(m));
}

PermEncoded encode_pipeline(std::span<const uint32_t> samples, std::size_t m, const PermCodingOptions& options) {
  int d = alphabet_bits(m);
  auto res = blockwise_pipeline(samples, d, options.pipeline);
  PermEncoded pe;
  pe.best_iteration = res.best_iteration;
  auto& out = pe.bytes;
  write_header(out, PermScheme::Pipeline, PermMode::Block, d, res.B, res.b, samples.size());
  put_varint(out, static_cast<uint64_t>(res.best_iteration) + 1);
  for (int i = 0; i <= res.best_iteration; ++i) {
    const auto& it = res.iterations[i];
    for (int c : it.order) put_varint(out, c);
    for (const auto& t : it.block_transforms) put_blob(out, t.serialize());
  }
  if (res.b > 15) throw std::invalid_argument("pipeline container supports blocks of at most 15 bits");
  BitWriter payload;
  ArithmeticEncoder enc(payload);
  std::vector<AdaptiveModel> models(res.B, AdaptiveModel(std::size_t{1} << res.b));
  uint32_t mask = (uint32_t{1} << res.b) - 1;
  for (uint32_t y : res.final_symbols) {
    for (int v = 0; v < res.B; ++v) {
      uint32_t s = (y >> ((res.B - 1 - v) * res.b)) & mask;
      models[v].encode(enc, s);
      models[v].update(s);
    }
  }
  enc.finish();
  put_varint(out, payload.bit_length());
  out.insert(out.end(), payload.bytes().begin(), payload.bytes().end());
  pe.payload_bits = payload.bit_length();
  return pe;
}

}  // namespace

PermScheme parse_scheme(const std::string& name) {
  if (name == "fixed") return PermScheme::Fixed;
  if (name == "adaptive") return PermScheme::Adaptive;
  if (name == "window") return PermScheme::Window;
  if (name == "pipeline") return PermScheme::Pipeline;
  throw std::invalid_argument("unknown scheme '" + name + "'");
}

PermMode parse_mode(const std::string& name) {
  if (name == "marginal") return PermMode::Marginal;
  if (name == "block") return PermMode::Block;
  throw std::invalid_argument("unknown mode '" + name + "'");
}

uint64_t reference_hash(const PermutationTransform& t) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (uint32_t v : t.table()) {
    for (int i = 0; i < 4; ++i) {
      h ^= (v >> (8 * i)) & 0xFFU;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

PermEncoded permutation_encode(std::span<const uint32_t> samples, std::size_t m, const PermCodingOptions& options) {
  for (uint32_t s : samples)
    if (s >= m) throw std::out_of_range("symbol index " + std::to_string(s) + " >= alphabet size");
  if (options.scheme == PermScheme::Pipeline) return encode_pipeline(samples, m, options);
  int d = alphabet_bits(m);
  std::size_t full = std::size_t{1} << d;
  if (options.scheme == PermScheme::Window && options.window == 0) throw std::invalid_argument("window length must be >= 1");

  PermutationTransform reference;
  if (options.scheme == PermScheme::Fixed) {
    reference = options.reference ? *options.reference : PermutationTransform::identity(full);
    if (reference.size() != full) throw std::invalid_argument("reference relabeling must cover 2^d symbols");
  }

  PermEncoded pe;
  auto& out = pe.bytes;
  int B = options.mode == PermMode::Marginal ? d : (d > 1 ? 2 : 1);
  int b = options.mode == PermMode::Marginal ? 1 : d - d / 2;
  write_header(out, options.scheme, options.mode, d, B, b, samples.size());
  if (options.scheme == PermScheme::Fixed) {
    put_u64(out, reference_hash(reference));
    out.push_back(options.embed_reference ? 1 : 0);
    if (options.embed_reference) put_blob(out, reference.serialize());
  } else if (options.scheme == PermScheme::Window) {
    put_varint(out, options.window);
  }

  BitWriter payload;
  ArithmeticEncoder enc(payload);
  ComponentCoder coder(options.mode, d);
  Relabeler relabel(options.scheme, full, options.window, &reference);
  for (uint32_t x : samples) {
    coder.encode(enc, relabel.forward(x));
    relabel.observe(x);
  }
  enc.finish();
  put_varint(out, payload.bit_length());
  out.insert(out.end(), payload.bytes().begin(), payload.bytes().end());
  pe.payload_bits = payload.bit_length();
  return pe;
}

std::vector<uint32_t> permutation_decode(std::span<const uint8_t> bytes, const PermutationTransform* reference) {
  if (bytes.size() < 7 || std::memcmp(bytes.data(), kMagic, 4) != 0) throw DecodeError("not a GBIC container");
  if (bytes[4] != kContainerVersion) throw DecodeError("unsupported container version " + std::to_string(bytes[4]));
  uint8_t scheme_byte = bytes[5], mode_byte = bytes[6];
  if (scheme_byte > 3) throw DecodeError("unknown scheme id " + std::to_string(scheme_byte));
  if (mode_byte > 1) throw DecodeError("unknown mode id " + std::to_string(mode_byte));
  auto scheme = static_cast<PermScheme>(scheme_byte);
  auto mode = static_cast<PermMode>(mode_byte);
  std::size_t pos = 7;
  uint64_t d = get_varint(bytes, pos);
  uint64_t B = get_varint(bytes, pos);
  uint64_t b = get_varint(bytes, pos);
  uint64_t n = get_varint(bytes, pos);
  if (d < 1 || d > 30) throw DecodeError("symbol width out of range");
  if (n > (uint64_t{1} << 40)) throw DecodeError("sample count out of range");
  std::size_t full = std::size_t{1} << d;

  try {
    if (scheme == PermScheme::Pipeline) {
      if (B < 1 || B * b != d || b > 15) throw DecodeError("bad block layout");
      uint64_t count = get_varint(bytes, pos);
      if (count == 0 || count > (uint64_t{1} << 24)) throw DecodeError("bad iteration count");
      std::vector<PipelineIteration> its(count);
      for (auto& it : its) {
        it.order.resize(d);
        std::vector<bool> seen(d, false);
        for (auto& c : it.order) {
          uint64_t v = get_varint(bytes, pos);
          if (v >= d || seen[v]) throw DecodeError("bad component order");
          seen[v] = true;
          c = static_cast<int>(v);
        }
        for (uint64_t v = 0; v < B; ++v) {
          auto blob = get_blob(bytes, pos);
          std::size_t used = 0;
          auto t = PermutationTransform::deserialize(blob, &used);
          if (used != blob.size() || t.size() != (std::size_t{1} << b)) throw DecodeError("bad block transform");
          it.block_transforms.push_back(std::move(t));
        }
      }
      uint64_t bits = get_varint(bytes, pos);
      if (bits > (bytes.size() - pos) * 8) throw DecodeError("payload truncated");
      BitReader pr(bytes.subspan(pos, (bits + 7) / 8), bits, true);
      ArithmeticDecoder dec(pr);
      std::vector<AdaptiveModel> models(B, AdaptiveModel(std::size_t{1} << b));
      std::vector<uint32_t> state(n);
      for (auto& y : state) {
        y = 0;
        for (auto& model : models) {
          uint32_t s = model.decode(dec);
          model.update(s);
          y = (y << b) | s;
        }
      }
      for (auto it = its.rbegin(); it != its.rend(); ++it) state = invert_iteration(state, static_cast<int>(d), *it);
      return state;
    }

    PermutationTransform ref;
    std::size_t window = 1;
    if (scheme == PermScheme::Fixed) {
      uint64_t hash = get_u64(bytes, pos);
      uint8_t embedded = get_byte(bytes, pos);
      if (embedded > 1) throw DecodeError("bad reference flag");
      if (embedded) {
        auto blob = get_blob(bytes, pos);
        std::size_t used = 0;
        ref = PermutationTransform::deserialize(blob, &used);
        if (used != blob.size()) throw DecodeError("bad reference descriptor");
      } else if (reference) {
        ref = *reference;
      } else {
        ref = PermutationTransform::identity(full);
      }
      if (ref.size() != full) throw DecodeError("reference relabeling has the wrong size");
      if (reference_hash(ref) != hash) throw DecodeError("reference relabeling does not match the stream");
    } else if (scheme == PermScheme::Window) {
      uint64_t l = get_varint(bytes, pos);
      if (l == 0) throw DecodeError("window length must be >= 1");
      window = static_cast<std::size_t>(l);
    }
    uint64_t bits = get_varint(bytes, pos);
    if (bits > (bytes.size() - pos) * 8) throw DecodeError("payload truncated");
    BitReader pr(bytes.subspan(pos, (bits + 7) / 8), bits, true);
    ArithmeticDecoder dec(pr);
    ComponentCoder coder(mode, static_cast<int>(d));
    Relabeler relabel(scheme, full, window, &ref);
    std::vector<uint32_t> out(n);
    for (auto& x : out) {
      x = relabel.backward(coder.decode(dec));
      relabel.observe(x);
    }
    return out;
  } catch (const std::invalid_argument& e) {
    throw DecodeError(std::string("malformed container: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw DecodeError(std::string("malformed container: ") + e.what());
  }
}

double windowed_arithmetic_bits(std::span<const uint32_t> samples, std::size_t m, std::size_t l) {
  if (l == 0) throw std::invalid_argument("window length must be >= 1");
  std::size_t windows = (samples.size() + l - 1) / l;
  return kt_code_length(samples, m) + 2.0 * static_cast<double>(windows);
}

}  // namespace gbica
