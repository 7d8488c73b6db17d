#include "stegbmp/bmp_codec.hpp"

#include <cstdlib>
#include <string>

#include "byte_io.hpp"
#include "stegbmp/errors.hpp"

namespace stegbmp {

namespace {

std::uint32_t read_u32(ByteView raw, std::size_t at) {
  detail::ByteReader r(raw.subspan(at), "BMP header");
  return r.u32();
}

std::uint16_t read_u16(ByteView raw, std::size_t at) {
  detail::ByteReader r(raw.subspan(at), "BMP header");
  return r.u16();
}

bool supported_bit_count(std::uint16_t bpp) {
  return bpp == 1 || bpp == 4 || bpp == 8 || bpp == 24 || bpp == 32;
}

}  // namespace

std::uint64_t BmpImage::row_stride() const {
  const auto bits = static_cast<std::uint64_t>(width) * bits_per_pixel;
  return 4 * ((bits + 31) / 32);
}

std::uint64_t BmpImage::pixel_array_size() const {
  return row_stride() * static_cast<std::uint64_t>(std::llabs(height));
}

BmpImage parse_bmp(ByteView raw) {
  if (raw.size() < kBmpMinHeaderSize) {
    throw FormatError("BMP header truncated: " + std::to_string(raw.size()) + " bytes");
  }
  if (raw[0] != 'B' || raw[1] != 'M') {
    throw FormatError("not a BMP file (missing 'BM' magic)");
  }

  const std::uint32_t offset = read_u32(raw, 10);
  if (offset < kBmpMinHeaderSize) {
    throw FormatError("pixel data offset " + std::to_string(offset) + " is inside the headers");
  }
  if (offset > raw.size()) {
    throw FormatError("pixel data offset " + std::to_string(offset) + " beyond end of file");
  }

  const std::uint32_t info_size = read_u32(raw, 14);
  if (info_size < kBmpInfoHeaderSize || kBmpFileHeaderSize + info_size > offset) {
    throw FormatError("unsupported info header size " + std::to_string(info_size));
  }

  BmpImage img;
  img.width = static_cast<std::int32_t>(read_u32(raw, 18));
  img.height = static_cast<std::int32_t>(read_u32(raw, 22));
  img.bits_per_pixel = read_u16(raw, 28);
  img.pixel_data_offset = offset;

  const std::uint32_t compression = read_u32(raw, 30);
  if (compression != 0) {
    throw FormatError("compressed BMPs are not supported (compression=" +
                      std::to_string(compression) + ")");
  }
  if (!supported_bit_count(img.bits_per_pixel)) {
    throw FormatError("unsupported bit count " + std::to_string(img.bits_per_pixel));
  }
  if (img.width <= 0 || img.height == 0 || img.height == INT32_MIN) {
    throw FormatError("invalid dimensions " + std::to_string(img.width) + "x" +
                      std::to_string(img.height));
  }

  const std::uint64_t data_size = raw.size() - offset;
  if (img.pixel_array_size() > data_size) {
    throw FormatError("pixel data truncated: need " + std::to_string(img.pixel_array_size()) +
                      " bytes, have " + std::to_string(data_size));
  }

  const std::size_t palette_bytes = offset - kBmpFileHeaderSize - info_size;
  img.has_palette = img.bits_per_pixel <= 8 || palette_bytes > 0;

  img.structural.assign(raw.begin(), raw.begin() + offset);
  img.data.assign(raw.begin() + offset, raw.end());
  return img;
}

ByteVec serialize_bmp(const BmpImage& img) {
  ByteVec out;
  out.reserve(img.structural.size() + img.data.size());
  out.insert(out.end(), img.structural.begin(), img.structural.end());
  out.insert(out.end(), img.data.begin(), img.data.end());
  return out;
}

std::uint64_t lsb_capacity_bits(const BmpImage& img) { return img.data.size(); }

}  // namespace stegbmp
