#include "lexi/bitio.hpp"

#include <zlib.h>

#include <algorithm>

#include "lexi/error.hpp"

namespace lexi {

void BitWriter::put(std::uint64_t value, unsigned bits) {
  for (unsigned i = bits; i-- > 0;) {
    const auto offset = bit_size_ & 7;
    if (offset == 0) bytes_.push_back(0);
    if ((value >> i) & 1u) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> offset);
    ++bit_size_;
  }
}

BitReader::BitReader(std::span<const std::uint8_t> bytes, std::uint64_t bit_limit)
    : bytes_(bytes), limit_(std::min<std::uint64_t>(bit_limit, bytes.size() * 8ull)) {}

std::uint64_t BitReader::get(unsigned bits) {
  if (bits > remaining()) {
    throw FramingError("bitstream overrun: need " + std::to_string(bits) + " bits, " +
                       std::to_string(remaining()) + " left");
  }
  std::uint64_t value = 0;
  for (unsigned i = 0; i < bits; ++i) value = (value << 1) | bit_at(pos_++);
  return value;
}

std::uint32_t BitReader::peek32() const noexcept {
  std::uint32_t window = 0;
  for (std::uint64_t i = 0; i < 32; ++i) {
    const auto index = pos_ + i;
    window = (window << 1) | (index < limit_ ? bit_at(index) : 0u);
  }
  return window;
}

void BitReader::skip(unsigned bits) {
  if (bits > remaining()) throw FramingError("bitstream overrun while skipping");
  pos_ += bits;
}

bool BitReader::rest_is_zero() const noexcept {
  for (auto i = pos_; i < limit_; ++i) {
    if (bit_at(i)) return false;
  }
  return true;
}

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) noexcept {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large buffers in chunks.
  constexpr std::size_t kChunk = 1u << 30;
  for (std::size_t off = 0; off < bytes.size(); off += kChunk) {
    const auto n = std::min(kChunk, bytes.size() - off);
    crc = crc32(crc, bytes.data() + off, static_cast<uInt>(n));
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace lexi
