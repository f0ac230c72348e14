#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace lexi {

// MSB-first bit packing: bit 0 of the stream is bit 7 of byte 0.
class BitWriter {
 public:
  void put(std::uint64_t value, unsigned bits);
  void put_bit(bool bit) { put(bit ? 1u : 0u, 1); }

  std::uint64_t bit_size() const noexcept { return bit_size_; }
  // Zero-pads the trailing partial byte.
  const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }
  std::vector<std::uint8_t> take() && { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
  std::uint64_t bit_size_ = 0;
};

class BitReader {
 public:
  BitReader(std::span<const std::uint8_t> bytes, std::uint64_t bit_limit);
  explicit BitReader(std::span<const std::uint8_t> bytes)
      : BitReader(bytes, static_cast<std::uint64_t>(bytes.size()) * 8) {}

  // Throws FramingError when fewer than `bits` remain.
  std::uint64_t get(unsigned bits);
  bool get_bit() { return get(1) != 0; }

  // Next 32 bits left-aligned; bits past the limit read as zero.
  std::uint32_t peek32() const noexcept;
  void skip(unsigned bits);

  std::uint64_t position() const noexcept { return pos_; }
  std::uint64_t remaining() const noexcept { return limit_ - pos_; }
  // True iff every bit from the cursor to the limit is zero.
  bool rest_is_zero() const noexcept;

 private:
  bool bit_at(std::uint64_t index) const noexcept {
    return (bytes_[index >> 3] >> (7 - (index & 7))) & 1u;
  }

  std::span<const std::uint8_t> bytes_;
  std::uint64_t limit_;
  std::uint64_t pos_ = 0;
};

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) noexcept;

}  // namespace lexi
