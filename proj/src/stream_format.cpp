#include "gbica/stream_format.hpp"

#include <cstring>
#include <stdexcept>
#include <string>

#include "gbica/arithmetic.hpp"
#include "gbica/bitstream.hpp"
#include "gbica/huffman.hpp"
#include "gbica/prob_model.hpp"

namespace gbica {

namespace {

constexpr char kMagic[4] = {'G', 'B', 'E', 'C'};
constexpr uint64_t kMaxAlphabet = uint64_t{1} << 28;

// Static arithmetic model from counts: scaled frequencies, positive counts stay positive.
StaticModel model_from_counts(const EmpiricalCounts& c) {
  std::vector<double> w(c.counts.begin(), c.counts.end());
  return StaticModel::from_probabilities(w);
}

}  // namespace

EncodedStream encode_stream(std::span<const uint32_t> samples, std::size_t m, CoderId coder) {
  if (m == 0 || m > kMaxAlphabet) throw std::invalid_argument("alphabet size out of range");
  EncodedStream es;
  std::vector<uint8_t> model;
  BitWriter payload;
  if (coder == CoderId::Huffman) {
    if (!samples.empty()) {
      auto counts = count_symbols(samples, m);
      auto cb = huffman_build_counts(counts.counts);
      BitWriter cbw = serialize_codebook(canonicalize(cb));
      put_varint(model, cbw.bytes().size());
      model.insert(model.end(), cbw.bytes().begin(), cbw.bytes().end());
      prefix_encode(samples, cb, payload);
    }
  } else if (coder == CoderId::StaticArithmetic) {
    if (!samples.empty()) {
      auto counts = count_symbols(samples, m);
      auto sm = model_from_counts(counts);
      for (uint32_t f : sm.freqs()) put_varint(model, f);
      arithmetic_encode(samples, sm, payload);
    }
  } else if (coder == CoderId::Adaptive) {
    adaptive_encode(samples, m, payload);
  } else {
    throw std::invalid_argument("unknown coder id");
  }

  auto& out = es.bytes;
  out.insert(out.end(), kMagic, kMagic + 4);
  out.push_back(kStreamVersion);
  out.push_back(static_cast<uint8_t>(coder));
  put_varint(out, m);
  put_varint(out, samples.size());
  put_varint(out, payload.bit_length());
  out.insert(out.end(), model.begin(), model.end());
  out.insert(out.end(), payload.bytes().begin(), payload.bytes().end());
  es.payload_bits = payload.bit_length();
  es.model_bytes = model.size();
  return es;
}

DecodedStream decode_stream(std::span<const uint8_t> bytes) {
  if (bytes.size() < 6 || std::memcmp(bytes.data(), kMagic, 4) != 0) throw DecodeError("not a GBEC stream");
  if (bytes[4] != kStreamVersion) throw DecodeError("unsupported stream version " + std::to_string(bytes[4]));
  uint8_t coder = bytes[5];
  if (coder > 2) throw DecodeError("unknown coder id " + std::to_string(coder));
  std::size_t pos = 6;
  uint64_t m = get_varint(bytes, pos);
  uint64_t n = get_varint(bytes, pos);
  uint64_t bits = get_varint(bytes, pos);
  if (m == 0 || m > kMaxAlphabet) throw DecodeError("alphabet size out of range");
  if (n > (uint64_t{1} << 40)) throw DecodeError("sample count out of range");

  DecodedStream ds;
  ds.m = m;
  ds.coder = static_cast<CoderId>(coder);
  auto payload_of = [&](std::size_t at) {
    if (bits > (bytes.size() - at) * 8) throw DecodeError("payload truncated");
    return bytes.subspan(at, (bits + 7) / 8);
  };
  try {
    if (ds.coder == CoderId::Huffman) {
      if (n == 0) return ds;
      uint64_t len = get_varint(bytes, pos);
      if (len > bytes.size() - pos) throw DecodeError("codebook truncated");
      BitReader cbr(bytes.subspan(pos, len));
      auto cb = deserialize_codebook(cbr, m).to_codebook();
      pos += len;
      BitReader pr(payload_of(pos), bits);
      ds.samples = prefix_decode(pr, cb, n);
    } else if (ds.coder == CoderId::StaticArithmetic) {
      if (n == 0) return ds;
      std::vector<uint32_t> f(m);
      for (auto& v : f) {
        uint64_t x = get_varint(bytes, pos);
        if (x > kMaxFrequencyTotal) throw DecodeError("frequency out of range");
        v = static_cast<uint32_t>(x);
      }
      StaticModel sm(std::move(f));
      BitReader pr(payload_of(pos), bits, true);
      ds.samples = arithmetic_decode(pr, sm, n);
    } else {
      BitReader pr(payload_of(pos), bits, true);
      ds.samples = adaptive_decode(pr, m, n);
    }
  } catch (const std::invalid_argument& e) {
    throw DecodeError(std::string("malformed stream: ") + e.what());
  }
  return ds;
}

}  // namespace gbica
