#include "lexi/flit_codec.hpp"

#include <algorithm>
#include <string>

#include "exponent_code.hpp"
#include "lexi/bitio.hpp"
#include "lexi/error.hpp"

namespace lexi {

namespace {

constexpr std::size_t kFlitBodyBytes = kFlitBytes - 1;
constexpr std::size_t kCountBytes = 8;

Flit make_flit(std::uint8_t marker, std::span<const std::uint8_t> body) {
  Flit f;
  f.bytes[0] = marker;
  std::copy(body.begin(), body.end(), f.bytes.begin() + 1);
  return f;
}

std::uint32_t crc_of_flits(std::span<const Flit> flits) {
  return crc32_of(flits_to_bytes(flits));
}

Flit make_trailer(std::span<const Flit> preceding) {
  const auto crc = crc_of_flits(preceding);
  const std::array<std::uint8_t, 4> body{static_cast<std::uint8_t>(crc), static_cast<std::uint8_t>(crc >> 8),
                                         static_cast<std::uint8_t>(crc >> 16), static_cast<std::uint8_t>(crc >> 24)};
  return make_flit(kTrailerFlitMarker, body);
}

Flit pack_data_flit(std::span<const Bf16Bits> values, const Codebook& cb) {
  BitWriter w;
  w.put(values.size(), kFlitHeaderBits);
  for (auto v : values) w.put(split(v).sign, 1);
  for (auto v : values) w.put(split(v).mantissa, 7);
  for (auto v : values) detail::put_exponent(w, cb, exponent_of(v));
  Flit f;
  std::copy(w.bytes().begin(), w.bytes().end(), f.bytes.begin());
  return f;
}

}  // namespace

std::vector<Flit> EncodedLayer::transmission_order() const {
  std::vector<Flit> out;
  out.reserve(header.size() + data.size() + 1);
  out.insert(out.end(), header.begin(), header.end());
  out.insert(out.end(), data.begin(), data.end());
  out.push_back(trailer);
  return out;
}

EncodedLayer encode_layer(std::span<const Bf16Bits> values, const Codebook& cb) {
  EncodedLayer layer;

  auto header_bytes = cb.wire_header();
  const std::uint64_t count = values.size();
  for (std::size_t i = 0; i < kCountBytes; ++i) header_bytes.push_back(static_cast<std::uint8_t>(count >> (8 * i)));
  for (std::size_t off = 0; off < header_bytes.size(); off += kFlitBodyBytes) {
    const auto n = std::min(kFlitBodyBytes, header_bytes.size() - off);
    layer.header.push_back(make_flit(kHeaderFlitMarker, std::span(header_bytes).subspan(off, n)));
  }

  auto& stats = layer.stats;
  std::size_t i = 0;
  while (i < values.size()) {
    std::size_t bits = kFlitHeaderBits;
    std::size_t n = 0;
    while (i + n < values.size()) {
      const std::size_t unit = 8 + cb.cost_bits(exponent_of(values[i + n]));
      if (bits + unit > kFlitBits) break;
      bits += unit;
      ++n;
    }
    for (std::size_t k = i; k < i + n; ++k) {
      const auto e = exponent_of(values[k]);
      stats.exponent_code_bits += cb.cost_bits(e);
      stats.escaped_values += cb.find(e) == nullptr;
    }
    layer.data.push_back(pack_data_flit(values.subspan(i, n), cb));
    i += n;
  }

  std::vector<Flit> preceding = layer.header;
  preceding.insert(preceding.end(), layer.data.begin(), layer.data.end());
  layer.trailer = make_trailer(preceding);

  stats.value_count = count;
  stats.header_flits = layer.header.size();
  stats.data_flits = layer.data.size();
  stats.total_flits = stats.header_flits + stats.data_flits + 1;
  if (count != 0) {
    stats.values_per_flit_mean = static_cast<double>(count) / static_cast<double>(stats.data_flits);
    stats.exponent_cr = 8.0 * static_cast<double>(count) / static_cast<double>(stats.exponent_code_bits);
    stats.total_cr = 16.0 * static_cast<double>(count) / static_cast<double>(kFlitBits * stats.total_flits);
  }
  return layer;
}

FlitDecode decode_flit(const Flit& flit, const DecoderTables& tables) {
  const std::size_t n = flit.header();
  if (n == 0 || n > kMaxValuesPerFlit) {
    throw FramingError("data flit declares " + std::to_string(n) + " values; expected 1.." +
                       std::to_string(kMaxValuesPerFlit));
  }
  BitReader r(flit.bytes);
  r.skip(kFlitHeaderBits);

  FlitDecode out;
  std::array<std::uint8_t, kMaxValuesPerFlit> signs{};
  std::array<std::uint8_t, kMaxValuesPerFlit> mantissas{};
  for (std::size_t k = 0; k < n; ++k) signs[k] = static_cast<std::uint8_t>(r.get(1));
  for (std::size_t k = 0; k < n; ++k) mantissas[k] = static_cast<std::uint8_t>(r.get(7));
  out.values.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto exponent = detail::get_exponent(r, tables, out.stage_hits);
    out.values.push_back(join({signs[k], exponent, mantissas[k]}));
  }
  if (!r.rest_is_zero()) throw FramingError("data flit padding is not zero");
  return out;
}

LayerDecode decode_layer(std::span<const Flit> flits) {
  LayerDecode out;

  std::size_t pos = 0;
  std::vector<std::uint8_t> header_bytes;
  while (pos < flits.size() && flits[pos].header() == kHeaderFlitMarker) {
    header_bytes.insert(header_bytes.end(), flits[pos].bytes.begin() + 1, flits[pos].bytes.end());
    ++pos;
  }
  if (pos == 0) throw FramingError("layer stream does not start with a codebook header flit");

  std::size_t consumed = 0;
  const auto cb = Codebook::from_wire_header(header_bytes, &consumed);
  const std::size_t used = consumed + kCountBytes;
  if (used > header_bytes.size()) throw FramingError("codebook header flits end before the value count");
  if ((used + kFlitBodyBytes - 1) / kFlitBodyBytes != pos) throw FramingError("wrong number of header flits");
  if (!std::all_of(header_bytes.begin() + static_cast<std::ptrdiff_t>(used), header_bytes.end(),
                   [](auto b) { return b == 0; })) {
    throw FramingError("codebook header padding is not zero");
  }
  std::uint64_t declared = 0;
  for (std::size_t i = 0; i < kCountBytes; ++i) declared |= std::uint64_t{header_bytes[consumed + i]} << (8 * i);
  const auto tables = DecoderTables::build(cb);

  const std::size_t data_begin = pos;
  while (pos < flits.size() && flits[pos].header() != kTrailerFlitMarker) {
    if (flits[pos].header() == kHeaderFlitMarker) throw FramingError("header flit inside the data section");
    ++pos;
  }
  if (pos == flits.size()) throw FramingError("layer stream has no trailer flit");
  if (pos + 1 != flits.size()) throw FramingError("flits follow the trailer");

  const auto& trailer = flits[pos];
  if (!std::all_of(trailer.bytes.begin() + 5, trailer.bytes.end(), [](auto b) { return b == 0; })) {
    throw FramingError("trailer padding is not zero");
  }
  const std::uint32_t stored = trailer.bytes[1] | (trailer.bytes[2] << 8) | (trailer.bytes[3] << 16) |
                               (static_cast<std::uint32_t>(trailer.bytes[4]) << 24);
  if (stored != crc_of_flits(flits.first(pos))) throw CorruptStream("layer checksum mismatch");

  // Each data flit holds at least one value.
  if (pos - data_begin > declared) throw FramingError("more data flits than declared values");
  out.values.reserve(declared);
  for (std::size_t f = data_begin; f < pos; ++f) {
    auto decoded = decode_flit(flits[f], tables);
    if (out.values.size() + decoded.values.size() > declared) {
      throw FramingError("data flits carry more values than declared");
    }
    out.values.insert(out.values.end(), decoded.values.begin(), decoded.values.end());
    for (std::size_t s = 0; s < 4; ++s) out.stage_hits[s] += decoded.stage_hits[s];
  }
  if (out.values.size() != declared) throw FramingError("data flits carry fewer values than declared");
  out.header_flits = data_begin;
  out.data_flits = pos - data_begin;
  return out;
}

std::vector<std::uint8_t> flits_to_bytes(std::span<const Flit> flits) {
  std::vector<std::uint8_t> out;
  out.reserve(flits.size() * kFlitBytes);
  for (const auto& f : flits) out.insert(out.end(), f.bytes.begin(), f.bytes.end());
  return out;
}

std::vector<Flit> flits_from_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() % kFlitBytes != 0) {
    throw FramingError("flit dump length " + std::to_string(bytes.size()) + " is not a multiple of 16");
  }
  std::vector<Flit> out(bytes.size() / kFlitBytes);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(i * kFlitBytes), kFlitBytes, out[i].bytes.begin());
  }
  return out;
}

}  // namespace lexi
