#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "lexi/bf16.hpp"

namespace lexi {

// ---- run-length encoding over exponent bytes -------------------------------

struct RleRecord {
  std::uint8_t run_length;  // 1..255
  std::uint8_t value;
  friend bool operator==(const RleRecord&, const RleRecord&) = default;
};

// Throws DataError on empty input.
std::vector<RleRecord> rle_compress(std::span<const std::uint8_t> exponents);
// Throws CorruptStream on a zero run length.
std::vector<std::uint8_t> rle_decompress(std::span<const RleRecord> records);
// 8 * count / (16 * records).
double rle_ratio(std::uint64_t count, std::uint64_t records) noexcept;

std::vector<std::uint8_t> rle_to_bytes(std::span<const RleRecord> records);
std::vector<RleRecord> rle_from_bytes(std::span<const std::uint8_t> bytes);

// ---- base-delta-immediate over 32-exponent blocks ---------------------------

inline constexpr std::size_t kBdiBlockSize = 32;
inline constexpr int kBdiDeltaMin = -4;
inline constexpr int kBdiDeltaMax = 3;
inline constexpr std::uint64_t kBdiCompressedBits = 1 + 8 + (kBdiBlockSize - 1) * 3;  // 102
inline constexpr std::uint64_t kBdiRawBits = 1 + kBdiBlockSize * 8;                    // 257

struct BdiBlock {
  bool compressed = false;
  std::uint8_t base = 0;                               // element 0
  std::array<std::int8_t, kBdiBlockSize - 1> deltas{};  // compressed mode: elements 1..31 minus base
  std::array<std::uint8_t, kBdiBlockSize> raw{};        // raw mode
  friend bool operator==(const BdiBlock&, const BdiBlock&) = default;
};

struct BdiStream {
  std::uint64_t original_length = 0;
  std::vector<BdiBlock> blocks;

  std::uint64_t payload_bits() const noexcept;
};

// The tail block is padded by repeating the last exponent.
BdiStream bdi_compress(std::span<const std::uint8_t> exponents);
std::vector<std::uint8_t> bdi_decompress(const BdiStream& stream);
double bdi_ratio(const BdiStream& stream) noexcept;

// u64 LE original length, then the block bitstream (MSB-first, byte padded).
std::vector<std::uint8_t> bdi_to_bytes(const BdiStream& stream);
BdiStream bdi_from_bytes(std::span<const std::uint8_t> bytes);

// ---- codec comparison -------------------------------------------------------

enum class Codec { Lexi, Rle, Bdi };

Codec parse_codec(std::string_view name);
std::string_view codec_name(Codec codec) noexcept;

struct BenchResult {
  Codec codec;
  double exponent_cr = 0.0;
  double total_cr = 0.0;
  std::uint64_t bytes_in = 0;
  std::uint64_t bytes_out = 0;
};

// Exponent plane through `codec`; signs and mantissas counted as raw planes
// for RLE/BDI, the full container for LEXI.
BenchResult bench_codec(Codec codec, std::span<const Bf16Bits> values);

}  // namespace lexi
