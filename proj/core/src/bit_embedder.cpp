#include "stegbmp/bit_embedder.hpp"

#include <stdexcept>
#include <string>

#include "stegbmp/errors.hpp"

namespace stegbmp {

namespace {

void check_capacity(std::size_t region_size, std::uint64_t count, const SlotParams& params) {
  const std::uint64_t needed = slots_required(params, count);
  if (needed > region_size) {
    throw CapacityExceeded("LSB region holds " + std::to_string(region_size) +
                           " slots, " + std::to_string(needed) + " required");
  }
}

}  // namespace

SlotParams::SlotParams(std::uint32_t n, std::uint32_t c) : n_(n), c_(c) {
  if (n_ < 1 || c_ < 1 || c_ > n_) {
    throw std::invalid_argument("slot parameters require 1 <= c <= n");
  }
}

std::uint8_t set_lsb_pm1(std::uint8_t b, std::uint8_t bit) {
  if ((b & 1U) == (bit & 1U)) {
    return b;
  }
  return static_cast<std::uint8_t>(bit ? b + 1 : b - 1);
}

BitVec bytes_to_bits(ByteView data) {
  BitVec bits;
  bits.reserve(data.size() * 8);
  for (Byte value : data) {
    for (int j = 0; j < 8; ++j) {
      bits.push_back(static_cast<std::uint8_t>(value & 1U));
      value = static_cast<Byte>(value >> 1);
    }
  }
  return bits;
}

ByteVec bits_to_bytes(BitView bits) {
  ByteVec out((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] & 1U) {
      out[i / 8] = static_cast<Byte>(out[i / 8] | (1U << (i % 8)));
    }
  }
  return out;
}

std::uint64_t slot_address(const SlotParams& params, std::uint64_t bit_index) {
  return static_cast<std::uint64_t>(params.n()) * bit_index + params.c();
}

std::uint64_t slots_required(const SlotParams& params, std::uint64_t bit_count) {
  return slot_address(params, bit_count);
}

void embed_bits_into(std::span<Byte> region, BitView bits, const SlotParams& params) {
  check_capacity(region.size(), bits.size(), params);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    Byte& slot = region[slot_address(params, i + 1) - 1];
    slot = set_lsb_pm1(slot, bits[i]);
  }
}

ByteVec embed_bits(ByteView region, BitView bits, const SlotParams& params) {
  ByteVec out(region.begin(), region.end());
  embed_bits_into(out, bits, params);
  return out;
}

BitVec extract_bits(ByteView region, std::uint64_t count, const SlotParams& params) {
  check_capacity(region.size(), count, params);
  BitVec bits(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    bits[i] = static_cast<std::uint8_t>(region[slot_address(params, i + 1) - 1] & 1U);
  }
  return bits;
}

}  // namespace stegbmp
