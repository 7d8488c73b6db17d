#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace stegbmp {

using Byte = std::uint8_t;
using ByteVec = std::vector<Byte>;
using ByteView = std::span<const Byte>;

// One element per bit, each 0 or 1.
using BitVec = std::vector<std::uint8_t>;
using BitView = std::span<const std::uint8_t>;

}  // namespace stegbmp
