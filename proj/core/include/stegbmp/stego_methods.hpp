#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "stegbmp/bmp_codec.hpp"
#include "stegbmp/bytes.hpp"
#include "stegbmp/keystream.hpp"
#include "stegbmp/payload_format.hpp"

namespace stegbmp {

struct SinkInput {
  ByteVec bytes;  // a complete BMP file
  StegoKey key;
};

// How one sink will be stored.
struct EmbedPlan {
  std::uint8_t method = 1;
  std::uint8_t sub_method = 0;
  StructuralMode structural_mode = StructuralMode::Appended;
  DataMode data_mode = DataMode::Appended;
  std::optional<SlotParams> slot_params;     // set when any part goes into LSBs
  std::optional<std::uint32_t> reuse_source;  // set for REUSED structural parts
  // Upper bound on blob bytes appended for this sink (excludes its directory entry).
  std::uint64_t estimated_appended_bytes = 0;
};

// Structural parts a new sink may point at instead of storing its own.
struct RegistryEntry {
  std::uint32_t source = 0;  // 0 = container, k = k-th sink in the directory
  ByteVec structural;
};
using StructuralRegistry = std::vector<RegistryEntry>;

struct SinkSavings {
  std::uint64_t original_bytes = 0;   // M_i
  std::uint64_t appended_bytes = 0;   // blob bytes appended for this sink
  std::uint64_t directory_bytes = 0;  // this sink's directory entry
  std::uint64_t lsb_bits_used = 0;

  // N_i: what this sink adds to the file.
  std::uint64_t stored_bytes() const { return appended_bytes + directory_bytes; }
  std::int64_t saved_bytes() const {
    return static_cast<std::int64_t>(original_bytes) - static_cast<std::int64_t>(stored_bytes());
  }
};

struct SavingsReport {
  std::vector<SinkSavings> sinks;
  std::uint64_t total_original_bytes = 0;
  std::uint64_t total_appended_bytes = 0;
  std::uint64_t total_directory_bytes = 0;
  std::uint64_t footer_bytes = kFooterSize;
  std::uint64_t file_growth_bytes = 0;  // appended + directory + footer
  std::int64_t saved_bytes = 0;         // sum of M_i - N_i
  double saved_fraction = 0.0;          // saved_bytes / total_original_bytes
};

struct StegoArtifact {
  ByteVec bytes;
  std::vector<SinkEntry> entries;
  StegoFooter footer;
  std::uint32_t container_data_offset = 0;
  SavingsReport report;
};

// Byte-level comparison between a container and a stego file.
struct DiffReport {
  std::uint64_t compared_bytes = 0;
  std::uint64_t changed_bytes = 0;
  std::uint32_t max_delta = 0;
  bool structural_identical = false;
  std::uint64_t appended_bytes = 0;
  double growth_percent = 0.0;
};

// Loads an existing stego file so more sinks can be appended to it.
// Throws FormatError if `stego` has no valid trailer.
StegoArtifact open_stego(ByteView stego);

// Every embed_* function builds on `prior` when given; `container` must then
// be the container that `prior` was built over.

// Method 1: the whole sink, delimited and enciphered, after the container.
StegoArtifact embed_append(const BmpImage& container, ByteView sink, const StegoKey& key,
                           const StegoArtifact* prior = nullptr);

// Method 2: structural parts interleaved into container LSBs (n sinks,
// sink i at c = i + 1), data parts appended.
StegoArtifact embed_lsb_adjust(const BmpImage& container, std::span<const SinkInput> sinks,
                               const StegoArtifact* prior = nullptr);

// Method 3: structural part taken from the container or an earlier sink
// under the same key, data part in container LSBs. Throws StructuralMismatch
// when nothing identical exists.
StegoArtifact embed_structural_reuse(const BmpImage& container, ByteView sink,
                                     const StegoKey& key, const StegoArtifact* prior = nullptr);

// Method 4: data part tokenized against the container data part and
// appended; structural part via LSBs (sub_method 2) or reuse (sub_method 3).
StegoArtifact embed_data_dedup(const BmpImage& container, ByteView sink, const StegoKey& key,
                               int sub_method, const StegoArtifact* prior = nullptr);

// Embeds every sink with one method in a single pass. Method 2 interleaves the
// structural parts; method 4 with sub_method 0 picks 3 when a structural match
// exists and 2 otherwise.
StegoArtifact embed_batch(const BmpImage& container, std::span<const SinkInput> sinks, int method,
                          int sub_method = 0, const StegoArtifact* prior = nullptr);

// Runs select_method for each sink in order and embeds the batch.
StegoArtifact embed_auto(const BmpImage& container, std::span<const SinkInput> sinks,
                         const StegoArtifact* prior = nullptr);

// Structural reuse first, then LSB structural if it fits in `free_slots`, else
// plain append.
EmbedPlan select_method(const BmpImage& container, ByteView sink, const StegoKey& key,
                        const StructuralRegistry& registry, std::uint64_t free_slots);

// Data-part bytes an LSB payload may still use in `artifact` (0 once sealed).
std::uint64_t free_lsb_slots(const StegoArtifact& artifact);

// Recovers sink `index` bit-exactly. Throws KeyMismatch, IndexOutOfRange or
// FormatError; nothing is returned on failure.
ByteVec extract(ByteView stego, const StegoKey& key, std::size_t index);

// Every sink stored under `key`, by directory index.
std::vector<std::pair<std::size_t, ByteVec>> extract_all(ByteView stego, const StegoKey& key);

SavingsReport savings_report(const StegoArtifact& artifact);
SavingsReport savings_report(const std::vector<SinkEntry>& entries);

DiffReport inspect_stego(ByteView container, ByteView stego);

}  // namespace stegbmp
