#pragma once

#include <cstdint>
#include <string_view>

#include "stegbmp/bytes.hpp"

namespace stegbmp {

// Per-sink secret. Holds 1 to 255 bytes.
class StegoKey {
 public:
  static constexpr std::size_t kMaxLength = 255;

  // Throws std::invalid_argument for an empty or over-long key.
  explicit StegoKey(ByteVec bytes);
  explicit StegoKey(std::string_view text);

  ByteView bytes() const { return bytes_; }
  std::size_t size() const { return bytes_.size(); }

  bool operator==(const StegoKey&) const = default;

 private:
  ByteVec bytes_;
};

inline constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

// FNV-1a, 64-bit.
std::uint64_t fnv1a64(ByteView data);

using KeyTag = std::uint64_t;

// Stored in the cleartext directory instead of the key itself.
KeyTag key_tag(const StegoKey& key);

// out[i] = data[i] ^ key[i % |key|]. Applying it twice restores the input.
ByteVec xor_keystream(ByteView data, const StegoKey& key);

// key ++ payload ++ key
ByteVec wrap_with_delimiters(ByteView payload, const StegoKey& key);

// Inverse of wrap_with_delimiters. Throws DelimiterMismatch when either
// delimiter differs from the key or the input is too short to hold both.
ByteVec unwrap_delimiters(ByteView wrapped, const StegoKey& key);

}  // namespace stegbmp
