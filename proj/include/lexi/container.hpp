#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "lexi/bf16.hpp"

namespace lexi {

// .lexi layout (integers little-endian, bit planes MSB-first):
//   "LEXC" | version u8 (=1) | value count u64 | codebook header [n][n x (exp,len)]
//   | sign plane ceil(N/8) | mantissa plane ceil(7N/8) | exponent codes (to byte)
//   | CRC-32 of everything before it, u32
// An empty container stores n = 0 and no planes.
inline constexpr std::uint8_t kContainerVersion = 1;

struct ContainerStats {
  std::uint64_t value_count = 0;
  std::uint64_t bytes_in = 0;
  std::uint64_t bytes_out = 0;
  std::uint64_t exponent_code_bits = 0;
  std::uint64_t escaped_values = 0;
  std::size_t coded_symbols = 0;
  double exponent_cr = 0.0;  // 8 * N / exponent code bits
  double total_cr = 0.0;     // bytes_in / bytes_out
};

struct CompressedWeights {
  std::vector<std::uint8_t> bytes;
  ContainerStats stats;
};

// Offline weight path: the codebook comes from the exact histogram of every value.
CompressedWeights compress_weights(std::span<const Bf16Bits> values);

// Throws DataError (bad magic), UnsupportedVersion, CorruptStream/FramingError.
std::vector<Bf16Bits> decompress_weights(std::span<const std::uint8_t> container);

ContainerStats compress_weights_file(const std::filesystem::path& in, const std::filesystem::path& out);
std::uint64_t decompress_weights_file(const std::filesystem::path& in, const std::filesystem::path& out);

}  // namespace lexi
