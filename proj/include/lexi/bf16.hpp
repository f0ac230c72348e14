#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace lexi {

using Bf16Bits = std::uint16_t;

// One BF16 word split into its IEEE fields.
struct Bf16Triple {
  std::uint8_t sign = 0;      // 0..1
  std::uint8_t exponent = 0;  // 0..255
  std::uint8_t mantissa = 0;  // 0..127

  friend constexpr bool operator==(const Bf16Triple&, const Bf16Triple&) = default;
};

constexpr Bf16Triple split(Bf16Bits bits) noexcept {
  return {static_cast<std::uint8_t>(bits >> 15), static_cast<std::uint8_t>((bits >> 7) & 0xFFu),
          static_cast<std::uint8_t>(bits & 0x7Fu)};
}

constexpr std::uint8_t exponent_of(Bf16Bits bits) noexcept {
  return static_cast<std::uint8_t>((bits >> 7) & 0xFFu);
}

// Inverse of split(). Throws ContractViolation if sign > 1 or mantissa > 127.
Bf16Bits join(const Bf16Triple& t);

// Truncating conversions are not used anywhere; float -> bf16 rounds to nearest even
// and leaves NaN payloads quiet.
Bf16Bits bf16_from_float(float value) noexcept;
float bf16_to_float(Bf16Bits bits) noexcept;

std::vector<std::uint8_t> exponent_plane(std::span<const Bf16Bits> values);

// Shannon entropy in bits of an empirical distribution given by raw counts. 0*log(0) := 0.
double shannon_entropy(std::span<const std::uint64_t> counts);

struct FieldEntropyReport {
  double sign_entropy_bits = 0.0;
  double exponent_entropy_bits = 0.0;
  double mantissa_entropy_bits = 0.0;
  std::size_t distinct_exponents = 0;
  std::uint64_t total_values = 0;
  std::array<std::uint64_t, 256> exponent_histogram{};
};

// Per-field entropy of a BF16 stream. Throws DataError on empty input.
FieldEntropyReport profile_stream(std::span<const Bf16Bits> values);

// Raw .bf16 files are packed little-endian 16-bit words.
std::vector<Bf16Bits> bf16_from_bytes(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> bf16_to_bytes(std::span<const Bf16Bits> values);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

std::vector<Bf16Bits> read_bf16_file(const std::filesystem::path& path);
void write_bf16_file(const std::filesystem::path& path, std::span<const Bf16Bits> values);

}  // namespace lexi
