#pragma once

#include <cstdint>

#include "stegbmp/bytes.hpp"

namespace stegbmp {

inline constexpr std::size_t kBmpFileHeaderSize = 14;
inline constexpr std::size_t kBmpInfoHeaderSize = 40;
inline constexpr std::size_t kBmpMinHeaderSize = kBmpFileHeaderSize + kBmpInfoHeaderSize;

/**
 * A BMP file split at its pixel-data offset.
 *
 * `structural` holds the file header, info header and optional palette;
 * `data` holds everything from the pixel-data offset to the end of the file,
 * including any bytes trailing the nominal pixel rows. Concatenating the two
 * reproduces the original file exactly.
 */
struct BmpImage {
  ByteVec structural;
  ByteVec data;
  std::int32_t width = 0;
  std::int32_t height = 0;  // negative for top-down bitmaps
  std::uint16_t bits_per_pixel = 0;
  std::uint32_t pixel_data_offset = 0;
  bool has_palette = false;

  // Bytes per pixel row, padded to a 4-byte boundary.
  std::uint64_t row_stride() const;
  // row_stride() * |height|.
  std::uint64_t pixel_array_size() const;

  bool operator==(const BmpImage&) const = default;
};

// Accepts uncompressed 1/4/8/24/32-bpp bitmaps. Throws FormatError otherwise.
BmpImage parse_bmp(ByteView raw);

ByteVec serialize_bmp(const BmpImage& img);

// One embeddable bit per data-part byte.
std::uint64_t lsb_capacity_bits(const BmpImage& img);

}  // namespace stegbmp
