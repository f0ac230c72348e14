#include "lexi/baselines.hpp"

#include <string>

#include "lexi/bitio.hpp"
#include "lexi/container.hpp"
#include "lexi/error.hpp"

namespace lexi {

std::vector<RleRecord> rle_compress(std::span<const std::uint8_t> exponents) {
  if (exponents.empty()) throw DataError("rle: empty input");
  std::vector<RleRecord> out;
  for (auto e : exponents) {
    if (!out.empty() && out.back().value == e && out.back().run_length < 255) {
      ++out.back().run_length;
    } else {
      out.push_back({1, e});
    }
  }
  return out;
}

std::vector<std::uint8_t> rle_decompress(std::span<const RleRecord> records) {
  std::vector<std::uint8_t> out;
  for (const auto& r : records) {
    if (r.run_length == 0) throw CorruptStream("rle: zero run length");
    out.insert(out.end(), r.run_length, r.value);
  }
  return out;
}

double rle_ratio(std::uint64_t count, std::uint64_t records) noexcept {
  return 8.0 * static_cast<double>(count) / (16.0 * static_cast<double>(records));
}

std::vector<std::uint8_t> rle_to_bytes(std::span<const RleRecord> records) {
  std::vector<std::uint8_t> out;
  out.reserve(records.size() * 2);
  for (const auto& r : records) {
    out.push_back(r.run_length);
    out.push_back(r.value);
  }
  return out;
}

std::vector<RleRecord> rle_from_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() % 2 != 0) throw FramingError("rle: odd record stream length");
  std::vector<RleRecord> out(bytes.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {bytes[2 * i], bytes[2 * i + 1]};
  return out;
}

std::uint64_t BdiStream::payload_bits() const noexcept {
  std::uint64_t bits = 0;
  for (const auto& b : blocks) bits += b.compressed ? kBdiCompressedBits : kBdiRawBits;
  return bits;
}

BdiStream bdi_compress(std::span<const std::uint8_t> exponents) {
  BdiStream s;
  s.original_length = exponents.size();
  for (std::size_t off = 0; off < exponents.size(); off += kBdiBlockSize) {
    BdiBlock b;
    for (std::size_t i = 0; i < kBdiBlockSize; ++i) {
      b.raw[i] = off + i < exponents.size() ? exponents[off + i] : exponents.back();
    }
    b.base = b.raw[0];
    b.compressed = true;
    for (std::size_t i = 1; i < kBdiBlockSize; ++i) {
      const int delta = int{b.raw[i]} - int{b.base};
      if (delta < kBdiDeltaMin || delta > kBdiDeltaMax) {
        b.compressed = false;
        break;
      }
      b.deltas[i - 1] = static_cast<std::int8_t>(delta);
    }
    if (b.compressed) {
      b.raw = {};
    } else {
      b.base = 0;
      b.deltas = {};
    }
    s.blocks.push_back(b);
  }
  return s;
}

std::vector<std::uint8_t> bdi_decompress(const BdiStream& s) {
  const std::uint64_t capacity = s.blocks.size() * kBdiBlockSize;
  if (s.original_length > capacity || s.original_length + kBdiBlockSize <= capacity) {
    throw CorruptStream("bdi: original length does not match block count");
  }
  std::vector<std::uint8_t> out;
  out.reserve(capacity);
  for (const auto& b : s.blocks) {
    if (!b.compressed) {
      out.insert(out.end(), b.raw.begin(), b.raw.end());
      continue;
    }
    out.push_back(b.base);
    for (auto d : b.deltas) {
      if (d < kBdiDeltaMin || d > kBdiDeltaMax) throw CorruptStream("bdi: delta out of range");
      out.push_back(static_cast<std::uint8_t>(b.base + d));
    }
  }
  out.resize(static_cast<std::size_t>(s.original_length));
  return out;
}

double bdi_ratio(const BdiStream& s) noexcept {
  return 8.0 * static_cast<double>(s.original_length) / static_cast<double>(s.payload_bits());
}

std::vector<std::uint8_t> bdi_to_bytes(const BdiStream& s) {
  BitWriter w;
  for (const auto& b : s.blocks) {
    w.put_bit(b.compressed);
    if (b.compressed) {
      w.put(b.base, 8);
      for (auto d : b.deltas) w.put(static_cast<std::uint8_t>(d) & 0x7u, 3);
    } else {
      for (auto v : b.raw) w.put(v, 8);
    }
  }
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(s.original_length >> (8 * i)));
  out.insert(out.end(), w.bytes().begin(), w.bytes().end());
  return out;
}

BdiStream bdi_from_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8) throw CorruptStream("bdi: missing length prefix");
  BdiStream s;
  for (std::size_t i = 0; i < 8; ++i) s.original_length |= std::uint64_t{bytes[i]} << (8 * i);
  const auto payload = bytes.subspan(8);
  const std::uint64_t block_count = (s.original_length + kBdiBlockSize - 1) / kBdiBlockSize;
  if (block_count > payload.size() * 8 / kBdiCompressedBits) throw CorruptStream("bdi: truncated block stream");
  BitReader r(payload);
  for (std::uint64_t k = 0; k < block_count; ++k) {
    BdiBlock b;
    b.compressed = r.get_bit();
    if (b.compressed) {
      b.base = static_cast<std::uint8_t>(r.get(8));
      for (auto& d : b.deltas) {
        const auto bits = static_cast<int>(r.get(3));
        d = static_cast<std::int8_t>(bits >= 4 ? bits - 8 : bits);
      }
    } else {
      for (auto& v : b.raw) v = static_cast<std::uint8_t>(r.get(8));
    }
    s.blocks.push_back(b);
  }
  if (r.remaining() >= 8 || !r.rest_is_zero()) throw FramingError("bdi: trailing data after the last block");
  return s;
}

Codec parse_codec(std::string_view name) {
  if (name == "lexi") return Codec::Lexi;
  if (name == "rle") return Codec::Rle;
  if (name == "bdi") return Codec::Bdi;
  throw ContractViolation("unknown codec '" + std::string(name) + "'");
}

std::string_view codec_name(Codec codec) noexcept {
  switch (codec) {
    case Codec::Lexi: return "lexi";
    case Codec::Rle: return "rle";
    case Codec::Bdi: return "bdi";
  }
  return "?";
}

BenchResult bench_codec(Codec codec, std::span<const Bf16Bits> values) {
  if (values.empty()) throw DataError("bench: empty input");
  BenchResult r{codec};
  const std::uint64_t n = values.size();
  r.bytes_in = 2 * n;
  const std::uint64_t raw_planes = (n + 7) / 8 + (7 * n + 7) / 8;

  switch (codec) {
    case Codec::Lexi: {
      const auto c = compress_weights(values);
      r.exponent_cr = c.stats.exponent_cr;
      r.bytes_out = c.stats.bytes_out;
      break;
    }
    case Codec::Rle: {
      const auto records = rle_compress(exponent_plane(values));
      r.exponent_cr = rle_ratio(n, records.size());
      r.bytes_out = raw_planes + rle_to_bytes(records).size();
      break;
    }
    case Codec::Bdi: {
      const auto stream = bdi_compress(exponent_plane(values));
      r.exponent_cr = bdi_ratio(stream);
      r.bytes_out = raw_planes + bdi_to_bytes(stream).size();
      break;
    }
  }
  r.total_cr = static_cast<double>(r.bytes_in) / static_cast<double>(r.bytes_out);
  return r;
}

}  // namespace lexi
