#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "lexi/bf16.hpp"
#include "lexi/codebook.hpp"
#include "lexi/decoder_tables.hpp"

namespace lexi {

inline constexpr std::size_t kFlitBytes = 16;
inline constexpr std::size_t kFlitBits = kFlitBytes * 8;
inline constexpr std::size_t kFlitHeaderBits = 8;
inline constexpr std::size_t kFlitPayloadBits = kFlitBits - kFlitHeaderBits;
// 1 sign + 7 mantissa + at least a 1-bit codeword per value.
inline constexpr std::size_t kMaxValuesPerFlit = kFlitPayloadBits / 9;

inline constexpr std::uint8_t kHeaderFlitMarker = 0x00;
inline constexpr std::uint8_t kTrailerFlitMarker = 0xFF;

// 128-bit link unit. Byte 0 is the header: the value count N (1..13) for
// data flits, 0x00 for codebook header flits, 0xFF for the trailer flit.
// Data payload, MSB-first: N sign bits, N x 7 mantissa bits, N exponent code
// units, then zero padding.
struct Flit {
  std::array<std::uint8_t, kFlitBytes> bytes{};

  std::uint8_t header() const noexcept { return bytes[0]; }
  friend bool operator==(const Flit&, const Flit&) = default;
};

struct LayerStats {
  std::uint64_t value_count = 0;
  std::uint64_t header_flits = 0;
  std::uint64_t data_flits = 0;
  std::uint64_t total_flits = 0;  // header + data + trailer
  std::uint64_t escaped_values = 0;
  std::uint64_t exponent_code_bits = 0;
  double values_per_flit_mean = 0.0;
  double exponent_cr = 0.0;  // 8 * values / exponent code bits
  double total_cr = 0.0;     // 16 * values / bits of all flits
};

struct EncodedLayer {
  std::vector<Flit> header;
  std::vector<Flit> data;
  Flit trailer;
  LayerStats stats;

  // header, data, trailer: the order flits cross the link.
  std::vector<Flit> transmission_order() const;
};

// Greedy packing: every data flit takes the longest whole-value prefix of the
// remaining stream that fits, so each flit decodes on its own given the book.
EncodedLayer encode_layer(std::span<const Bf16Bits> values, const Codebook& cb);

struct FlitDecode {
  std::vector<Bf16Bits> values;
  std::array<std::uint64_t, 4> stage_hits{};
};

// Throws CorruptStream when no stage matches and FramingError when the count,
// consumed bits or padding disagree.
FlitDecode decode_flit(const Flit& flit, const DecoderTables& tables);

struct LayerDecode {
  std::vector<Bf16Bits> values;
  std::array<std::uint64_t, 4> stage_hits{};
  std::uint64_t header_flits = 0;
  std::uint64_t data_flits = 0;
};

// Reassembles a layer from flits in transmission order. Any structural
// inconsistency, checksum mismatch or extra flit raises a DataError subtype.
LayerDecode decode_layer(std::span<const Flit> flits);

// Flit dump: consecutive 16-byte records.
std::vector<std::uint8_t> flits_to_bytes(std::span<const Flit> flits);
std::vector<Flit> flits_from_bytes(std::span<const std::uint8_t> bytes);

}  // namespace lexi
