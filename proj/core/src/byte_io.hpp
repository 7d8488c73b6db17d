#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "stegbmp/bytes.hpp"
#include "stegbmp/errors.hpp"

namespace stegbmp::detail {

class ByteWriter {
 public:
  explicit ByteWriter(ByteVec& out) : out_(out) {}

  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { put_le(v, 2); }
  void u32(std::uint32_t v) { put_le(v, 4); }
  void u64(std::uint64_t v) { put_le(v, 8); }
  void bytes(ByteView v) { out_.insert(out_.end(), v.begin(), v.end()); }

 private:
  void put_le(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) {
      out_.push_back(static_cast<Byte>(v >> (8 * i)));
    }
  }

  ByteVec& out_;
};

// Bounds-checked little-endian cursor. Every overrun is a FormatError that
// names `what`.
class ByteReader {
 public:
  ByteReader(ByteView in, const char* what) : in_(in), what_(what) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get_le(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get_le(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get_le(4)); }
  std::uint64_t u64() { return get_le(8); }

  ByteView bytes(std::size_t n) {
    require(n);
    ByteView v = in_.subspan(pos_, n);
    pos_ += n;
    return v;
  }

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return in_.size() - pos_; }
  bool done() const { return pos_ == in_.size(); }

 private:
  void require(std::size_t n) const {
    if (n > in_.size() - pos_) {
      throw FormatError(std::string(what_) + ": truncated");
    }
  }

  std::uint64_t get_le(int width) {
    require(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
    }
    pos_ += static_cast<std::size_t>(width);
    return v;
  }

  ByteView in_;
  const char* what_;
  std::size_t pos_ = 0;
};

}  // namespace stegbmp::detail
