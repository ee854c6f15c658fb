#ifndef ADARADAR_BITIO_HPP
#define ADARADAR_BITIO_HPP

#include <cstdint>
#include <cstring>
#include <span>
#include <vector>

#include "adaradar/errors.hpp"

namespace adaradar {

// Little-endian scalar writers.
inline void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

inline void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

inline void put_f32(std::vector<std::uint8_t>& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  put_u32(out, bits);
}

// Bounds-checked little-endian scalar reader. Throws CorruptPayloadError when
// the buffer runs out.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::size_t remaining() const { return data_.size() - pos_; }
  std::size_t position() const { return pos_; }

  std::uint8_t u8() {
    require(1);
    return data_[pos_++];
  }
  std::uint16_t u16() {
    require(2);
    std::uint16_t v = static_cast<std::uint16_t>(data_[pos_] | (data_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    require(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    require(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }
  float f32() {
    const std::uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }
  std::span<const std::uint8_t> bytes(std::size_t n) {
    require(n);
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  void require(std::size_t n) const {
    if (remaining() < n) throw CorruptPayloadError("truncated payload");
  }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

// MSB-first bit packer: the first value written lands in the high bits of the
// first byte.
class BitWriter {
 public:
  explicit BitWriter(std::vector<std::uint8_t>& out) : out_(out) {}

  void put(std::uint32_t value, int bits) {
    for (int i = bits - 1; i >= 0; --i) put_bit((value >> i) & 1u);
  }

  void put_bit(std::uint32_t bit) {
    if (fill_ == 0) {
      out_.push_back(0);
      fill_ = 8;
    }
    --fill_;
    if (bit) out_.back() |= static_cast<std::uint8_t>(1u << fill_);
  }

  // Pads the current byte with zero bits.
  void align() { fill_ = 0; }

 private:
  std::vector<std::uint8_t>& out_;
  int fill_ = 0;  // unused bits left in the current byte
};

// MSB-first bit reader over a fixed span.
class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint32_t get(int bits) {
    std::uint32_t v = 0;
    for (int i = 0; i < bits; ++i) v = (v << 1) | get_bit();
    return v;
  }

  std::uint32_t get_bit() {
    const std::size_t byte = bit_pos_ >> 3;
    if (byte >= data_.size()) throw CorruptPayloadError("truncated payload");
    const std::uint32_t bit = (data_[byte] >> (7 - (bit_pos_ & 7))) & 1u;
    ++bit_pos_;
    return bit;
  }

  void align() { bit_pos_ = (bit_pos_ + 7) & ~std::size_t{7}; }
  std::size_t byte_position() const { return (bit_pos_ + 7) >> 3; }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t bit_pos_ = 0;
};

}  // namespace adaradar

#endif  // ADARADAR_BITIO_HPP
