#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "stegbmp/bit_embedder.hpp"
#include "stegbmp/bytes.hpp"
#include "stegbmp/keystream.hpp"

namespace stegbmp {

/*
 * Stego file layout
 *
 *   [0, original_container_length)        container BMP (data-part LSBs may differ)
 *   [original_container_length, dir)      enciphered payload blobs
 *   [dir, size - 24)                      directory, one entry per sink
 *   [size - 24, size)                     footer
 *
 * Footer (24 bytes, little-endian)
 *   0   4  magic "SGV1"
 *   4   1  version = 0x01
 *   5   1  reserved = 0x00
 *   6   2  sink_count
 *   8   8  directory_offset
 *   16  8  original_container_length
 *
 * Directory entry
 *   0   4  body length (bytes following this field)
 *   4   1  method (1-4)
 *   5   1  sub_method (0, or 2/3 for method 4)
 *   6   8  key tag (FNV-1a 64 of the key)
 *   14  8  sink_total_length
 *   22  4  structural_length
 *   26  1  structural mode, then its locator
 *   ..  1  data mode, then its locator
 *
 * Locators
 *   APPENDED / TOKENIZED  u64 offset, u64 length       (absolute, inside the blob region)
 *   LSB                   u64 base, u32 n, u32 c, u64 bit_count
 *                         (base is a 0-based offset into the container data part;
 *                          bit i lands at data[base + n*i + c - 1])
 *   REUSED                u32 source (0 = container, k = k-th sink)
 *
 * Method 1 stores the whole sink in one blob; both of its locators name it.
 */

inline constexpr std::array<Byte, 4> kFooterMagic = {'S', 'G', 'V', '1'};
inline constexpr std::uint8_t kFormatVersion = 0x01;
inline constexpr std::size_t kFooterSize = 24;

enum class StructuralMode : std::uint8_t { Appended = 0, Lsb = 1, Reused = 2 };
enum class DataMode : std::uint8_t { Appended = 0, Lsb = 1, Tokenized = 2 };

const char* to_string(StructuralMode mode);
const char* to_string(DataMode mode);

struct BlobLocator {
  std::uint64_t offset = 0;
  std::uint64_t length = 0;

  bool operator==(const BlobLocator&) const = default;
};

struct LsbLocator {
  std::uint64_t base = 0;
  SlotParams params{1, 1};
  std::uint64_t bit_count = 0;

  // One past the last data-part byte this locator may touch.
  std::uint64_t end() const { return base + slots_required(params, bit_count); }

  bool operator==(const LsbLocator&) const = default;
};

struct ReuseLocator {
  std::uint32_t source = 0;

  bool operator==(const ReuseLocator&) const = default;
};

using Locator = std::variant<BlobLocator, LsbLocator, ReuseLocator>;

struct SinkEntry {
  std::uint8_t method = 1;
  std::uint8_t sub_method = 0;
  KeyTag key_tag = 0;
  std::uint64_t sink_total_length = 0;
  std::uint32_t structural_length = 0;
  StructuralMode structural_mode = StructuralMode::Appended;
  Locator structural_locator;
  DataMode data_mode = DataMode::Appended;
  Locator data_locator;

  bool operator==(const SinkEntry&) const = default;
};

struct StegoFooter {
  std::uint16_t sink_count = 0;
  std::uint64_t directory_offset = 0;
  std::uint64_t original_container_length = 0;

  bool operator==(const StegoFooter&) const = default;
};

// Everything probe_stego learns from a stego file without any key.
struct StegoIndex {
  StegoFooter footer;
  std::vector<SinkEntry> entries;
  std::uint32_t container_data_offset = 0;
};

// Throws FormatError when original_container_length > directory_offset.
ByteVec write_footer(const StegoFooter& footer);

// Reads the last 24 bytes of `tail`.
StegoFooter read_footer(ByteView tail);

// Checks the method/mode pairing, locator shapes and that a REUSED source
// precedes `index`. Throws FormatError.
void validate_entry(const SinkEntry& entry, std::size_t index);

std::size_t entry_wire_size(const SinkEntry& entry);

ByteVec write_directory(const std::vector<SinkEntry>& entries);
std::vector<SinkEntry> read_directory(ByteView raw, std::size_t count);

// Never throws. Returns nullopt for plain BMPs and anything whose trailer is
// not fully consistent with the file.
std::optional<StegoIndex> probe_stego(ByteView raw);

// First container data-part byte not claimed by any LSB locator.
std::uint64_t lsb_high_water(const std::vector<SinkEntry>& entries);

// True once any entry references the container data as a COPY dictionary;
// from then on the data part must not change.
bool lsb_sealed(const std::vector<SinkEntry>& entries);

}  // namespace stegbmp
