#pragma once

#include <cstdint>
#include <span>

#include "stegbmp/bytes.hpp"

namespace stegbmp {

// Interleaving parameters for N sinks sharing one LSB region: `n` sinks in the
// group, this sink being the `c`-th (1-based).
class SlotParams {
 public:
  // Throws std::invalid_argument unless 1 <= c <= n.
  SlotParams(std::uint32_t n, std::uint32_t c);

  std::uint32_t n() const { return n_; }
  std::uint32_t c() const { return c_; }

  bool operator==(const SlotParams&) const = default;

 private:
  std::uint32_t n_;
  std::uint32_t c_;
};

// Forces the LSB of `b` to `bit` by stepping the byte by one: odd bytes are
// decremented, even bytes incremented, so the result never wraps.
std::uint8_t set_lsb_pm1(std::uint8_t b, std::uint8_t bit);

// LSB-first within each byte.
BitVec bytes_to_bits(ByteView data);

// Inverse of bytes_to_bits. A trailing partial byte is zero-padded.
ByteVec bits_to_bytes(BitView bits);

// Z = n * bit_index + c: the 1-based index of the region byte carrying bit
// `bit_index` (also 1-based).
std::uint64_t slot_address(const SlotParams& params, std::uint64_t bit_index);

// Bytes of region needed to hold `bit_count` bits: n * bit_count + c.
std::uint64_t slots_required(const SlotParams& params, std::uint64_t bit_count);

// Writes bits[i-1] into the LSB of region[slot_address(params, i) - 1] using
// set_lsb_pm1. Throws CapacityExceeded before touching anything when the
// highest slot falls outside the region.
void embed_bits_into(std::span<Byte> region, BitView bits, const SlotParams& params);

// Copying form of embed_bits_into.
ByteVec embed_bits(ByteView region, BitView bits, const SlotParams& params);

// Throws CapacityExceeded when the highest slot falls outside the region.
BitVec extract_bits(ByteView region, std::uint64_t count, const SlotParams& params);

}  // namespace stegbmp
