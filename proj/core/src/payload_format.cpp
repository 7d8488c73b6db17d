#include "stegbmp/payload_format.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "byte_io.hpp"
#include "stegbmp/bmp_codec.hpp"
#include "stegbmp/errors.hpp"

namespace stegbmp {

namespace {

constexpr std::size_t kEntryFixedBody = 1 + 1 + 8 + 8 + 4;

std::size_t locator_wire_size(const Locator& locator) {
  return std::visit(
      [](const auto& l) -> std::size_t {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, BlobLocator>) {
          return 16;
        } else if constexpr (std::is_same_v<T, LsbLocator>) {
          return 24;
        } else {
          return 4;
        }
      },
      locator);
}

void write_locator(detail::ByteWriter& w, const Locator& locator) {
  if (const auto* blob = std::get_if<BlobLocator>(&locator)) {
    w.u64(blob->offset);
    w.u64(blob->length);
  } else if (const auto* lsb = std::get_if<LsbLocator>(&locator)) {
    w.u64(lsb->base);
    w.u32(lsb->params.n());
    w.u32(lsb->params.c());
    w.u64(lsb->bit_count);
  } else {
    w.u32(std::get<ReuseLocator>(locator).source);
  }
}

BlobLocator read_blob(detail::ByteReader& r) {
  BlobLocator blob;
  blob.offset = r.u64();
  blob.length = r.u64();
  return blob;
}

LsbLocator read_lsb(detail::ByteReader& r) {
  const std::uint64_t base = r.u64();
  const std::uint32_t n = r.u32();
  const std::uint32_t c = r.u32();
  const std::uint64_t bits = r.u64();
  if (n < 1 || c < 1 || c > n) {
    throw FormatError("directory: LSB slot parameters out of range");
  }
  return LsbLocator{base, SlotParams(n, c), bits};
}

Locator read_structural_locator(detail::ByteReader& r, StructuralMode mode) {
  switch (mode) {
    case StructuralMode::Appended:
      return read_blob(r);
    case StructuralMode::Lsb:
      return read_lsb(r);
    case StructuralMode::Reused:
      return ReuseLocator{r.u32()};
  }
  throw FormatError("directory: unknown structural mode");
}

Locator read_data_locator(detail::ByteReader& r, DataMode mode) {
  switch (mode) {
    case DataMode::Appended:
    case DataMode::Tokenized:
      return read_blob(r);
    case DataMode::Lsb:
      return read_lsb(r);
  }
  throw FormatError("directory: unknown data mode");
}

template <typename T>
bool holds(const Locator& l) {
  return std::holds_alternative<T>(l);
}

bool blob_inside(const Locator& l, std::uint64_t begin, std::uint64_t end) {
  const auto* blob = std::get_if<BlobLocator>(&l);
  if (blob == nullptr) {
    return true;
  }
  return blob->offset >= begin && blob->offset <= end && blob->length <= end - blob->offset;
}

bool lsb_inside(const Locator& l, std::uint64_t data_size) {
  const auto* lsb = std::get_if<LsbLocator>(&l);
  if (lsb == nullptr) {
    return true;
  }
  // Reject values whose slot arithmetic would overflow before comparing.
  if (lsb->bit_count > data_size || lsb->base > data_size) {
    return false;
  }
  return lsb->end() <= data_size;
}

}  // namespace

const char* to_string(StructuralMode mode) {
  switch (mode) {
    case StructuralMode::Appended:
      return "APPENDED";
    case StructuralMode::Lsb:
      return "LSB";
    case StructuralMode::Reused:
      return "REUSED";
  }
  return "?";
}

const char* to_string(DataMode mode) {
  switch (mode) {
    case DataMode::Appended:
      return "APPENDED";
    case DataMode::Lsb:
      return "LSB";
    case DataMode::Tokenized:
      return "TOKENIZED";
  }
  return "?";
}

ByteVec write_footer(const StegoFooter& footer) {
  if (footer.original_container_length > footer.directory_offset) {
    throw FormatError("footer: container length exceeds directory offset");
  }
  ByteVec out;
  out.reserve(kFooterSize);
  detail::ByteWriter w(out);
  w.bytes(kFooterMagic);
  w.u8(kFormatVersion);
  w.u8(0);
  w.u16(footer.sink_count);
  w.u64(footer.directory_offset);
  w.u64(footer.original_container_length);
  return out;
}

StegoFooter read_footer(ByteView tail) {
  if (tail.size() < kFooterSize) {
    throw FormatError("footer: truncated");
  }
  detail::ByteReader r(tail.last(kFooterSize), "footer");
  const ByteView magic = r.bytes(kFooterMagic.size());
  if (!std::equal(magic.begin(), magic.end(), kFooterMagic.begin())) {
    throw FormatError("footer: bad magic");
  }
  if (r.u8() != kFormatVersion) {
    throw FormatError("footer: unsupported version");
  }
  if (r.u8() != 0) {
    throw FormatError("footer: reserved byte must be zero");
  }
  StegoFooter footer;
  footer.sink_count = r.u16();
  footer.directory_offset = r.u64();
  footer.original_container_length = r.u64();
  if (footer.original_container_length > footer.directory_offset) {
    throw FormatError("footer: container length exceeds directory offset");
  }
  return footer;
}

void validate_entry(const SinkEntry& e, std::size_t index) {
  using SM = StructuralMode;
  using DM = DataMode;

  bool shape_ok = false;
  switch (e.method) {
    case 1:
      shape_ok = e.sub_method == 0 && e.structural_mode == SM::Appended &&
                 e.data_mode == DM::Appended && e.structural_locator == e.data_locator;
      break;
    case 2:
      shape_ok = e.sub_method == 0 && e.structural_mode == SM::Lsb && e.data_mode == DM::Appended;
      break;
    case 3:
      shape_ok = e.sub_method == 0 && e.structural_mode == SM::Reused && e.data_mode == DM::Lsb;
      break;
    case 4:
      shape_ok = e.data_mode == DM::Tokenized &&
                 ((e.sub_method == 2 && e.structural_mode == SM::Lsb) ||
                  (e.sub_method == 3 && e.structural_mode == SM::Reused));
      break;
    default:
      break;
  }
  if (!shape_ok) {
    throw FormatError("directory entry " + std::to_string(index) +
                      ": method/mode combination is invalid");
  }

  const bool structural_locator_ok =
      (e.structural_mode == SM::Appended && holds<BlobLocator>(e.structural_locator)) ||
      (e.structural_mode == SM::Lsb && holds<LsbLocator>(e.structural_locator)) ||
      (e.structural_mode == SM::Reused && holds<ReuseLocator>(e.structural_locator));
  const bool data_locator_ok =
      ((e.data_mode == DM::Appended || e.data_mode == DM::Tokenized) &&
       holds<BlobLocator>(e.data_locator)) ||
      (e.data_mode == DM::Lsb && holds<LsbLocator>(e.data_locator));
  if (!structural_locator_ok || !data_locator_ok) {
    throw FormatError("directory entry " + std::to_string(index) + ": locator shape mismatch");
  }

  if (const auto* reuse = std::get_if<ReuseLocator>(&e.structural_locator)) {
    if (reuse->source > index) {
      throw FormatError("directory entry " + std::to_string(index) +
                        ": REUSED source does not precede the entry");
    }
  }
  for (const Locator* l : {&e.structural_locator, &e.data_locator}) {
    if (const auto* lsb = std::get_if<LsbLocator>(l); lsb && lsb->bit_count % 8 != 0) {
      throw FormatError("directory entry " + std::to_string(index) +
                        ": LSB bit count is not a whole number of bytes");
    }
  }
  if (e.structural_length < kBmpMinHeaderSize || e.structural_length > e.sink_total_length) {
    throw FormatError("directory entry " + std::to_string(index) + ": bad structural length");
  }
}

std::size_t entry_wire_size(const SinkEntry& entry) {
  return 4 + kEntryFixedBody + 1 + locator_wire_size(entry.structural_locator) + 1 +
         locator_wire_size(entry.data_locator);
}

ByteVec write_directory(const std::vector<SinkEntry>& entries) {
  ByteVec out;
  detail::ByteWriter w(out);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const SinkEntry& e = entries[i];
    validate_entry(e, i);
    w.u32(static_cast<std::uint32_t>(entry_wire_size(e) - 4));
    w.u8(e.method);
    w.u8(e.sub_method);
    w.u64(e.key_tag);
    w.u64(e.sink_total_length);
    w.u32(e.structural_length);
    w.u8(static_cast<std::uint8_t>(e.structural_mode));
    write_locator(w, e.structural_locator);
    w.u8(static_cast<std::uint8_t>(e.data_mode));
    write_locator(w, e.data_locator);
  }
  return out;
}

std::vector<SinkEntry> read_directory(ByteView raw, std::size_t count) {
  std::vector<SinkEntry> entries;
  entries.reserve(std::min<std::size_t>(count, raw.size() / 4));
  detail::ByteReader outer(raw, "directory");
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint32_t body_length = outer.u32();
    detail::ByteReader r(outer.bytes(body_length), "directory entry");

    SinkEntry e;
    e.method = r.u8();
    e.sub_method = r.u8();
    e.key_tag = r.u64();
    e.sink_total_length = r.u64();
    e.structural_length = r.u32();

    const std::uint8_t smode = r.u8();
    if (smode > static_cast<std::uint8_t>(StructuralMode::Reused)) {
      throw FormatError("directory: unknown structural mode " + std::to_string(smode));
    }
    e.structural_mode = static_cast<StructuralMode>(smode);
    e.structural_locator = read_structural_locator(r, e.structural_mode);

    const std::uint8_t dmode = r.u8();
    if (dmode > static_cast<std::uint8_t>(DataMode::Tokenized)) {
      throw FormatError("directory: unknown data mode " + std::to_string(dmode));
    }
    e.data_mode = static_cast<DataMode>(dmode);
    e.data_locator = read_data_locator(r, e.data_mode);

    if (!r.done()) {
      throw FormatError("directory entry " + std::to_string(i) + ": trailing bytes");
    }
    validate_entry(e, i);
    entries.push_back(std::move(e));
  }
  if (!outer.done()) {
    throw FormatError("directory: trailing bytes after last entry");
  }
  return entries;
}

std::optional<StegoIndex> probe_stego(ByteView raw) {
  if (raw.size() < kFooterSize + kBmpMinHeaderSize) {
    return std::nullopt;
  }
  try {
    StegoIndex index;
    index.footer = read_footer(raw);
    const StegoFooter& f = index.footer;
    const std::uint64_t dir_end = raw.size() - kFooterSize;
    if (f.directory_offset >= dir_end || f.original_container_length < kBmpMinHeaderSize) {
      return std::nullopt;
    }

    const BmpImage container = parse_bmp(raw.first(f.original_container_length));
    index.container_data_offset = container.pixel_data_offset;
    const std::uint64_t data_size = container.data.size();

    index.entries = read_directory(
        raw.subspan(f.directory_offset, dir_end - f.directory_offset), f.sink_count);

    for (std::size_t i = 0; i < index.entries.size(); ++i) {
      const SinkEntry& e = index.entries[i];
      for (const Locator* l : {&e.structural_locator, &e.data_locator}) {
        if (!blob_inside(*l, f.original_container_length, f.directory_offset) ||
            !lsb_inside(*l, data_size)) {
          return std::nullopt;
        }
      }
      // A prior sink can only lend its structural part under the same key.
      if (const auto* reuse = std::get_if<ReuseLocator>(&e.structural_locator);
          reuse && reuse->source > 0 && index.entries[reuse->source - 1].key_tag != e.key_tag) {
        return std::nullopt;
      }
    }
    return index;
  } catch (const StegoError&) {
    return std::nullopt;
  }
}

std::uint64_t lsb_high_water(const std::vector<SinkEntry>& entries) {
  std::uint64_t mark = 0;
  for (const SinkEntry& e : entries) {
    for (const Locator* l : {&e.structural_locator, &e.data_locator}) {
      if (const auto* lsb = std::get_if<LsbLocator>(l)) {
        mark = std::max(mark, lsb->end());
      }
    }
  }
  return mark;
}

bool lsb_sealed(const std::vector<SinkEntry>& entries) {
  return std::any_of(entries.begin(), entries.end(),
                     [](const SinkEntry& e) { return e.data_mode == DataMode::Tokenized; });
}

}  // namespace stegbmp
