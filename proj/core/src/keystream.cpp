#include "stegbmp/keystream.hpp"

#include <algorithm>
#include <stdexcept>

#include "stegbmp/errors.hpp"

namespace stegbmp {

StegoKey::StegoKey(ByteVec bytes) : bytes_(std::move(bytes)) {
  if (bytes_.empty() || bytes_.size() > kMaxLength) {
    throw std::invalid_argument("stego key must be 1 to 255 bytes long");
  }
}

StegoKey::StegoKey(std::string_view text) : StegoKey(ByteVec(text.begin(), text.end())) {}

std::uint64_t fnv1a64(ByteView data) {
  std::uint64_t hash = kFnvOffsetBasis;
  for (Byte b : data) {
    hash ^= b;
    hash *= kFnvPrime;
  }
  return hash;
}

KeyTag key_tag(const StegoKey& key) { return fnv1a64(key.bytes()); }

ByteVec xor_keystream(ByteView data, const StegoKey& key) {
  const ByteView k = key.bytes();
  ByteVec out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    out[i] = static_cast<Byte>(data[i] ^ k[i % k.size()]);
  }
  return out;
}

ByteVec wrap_with_delimiters(ByteView payload, const StegoKey& key) {
  const ByteView k = key.bytes();
  ByteVec out;
  out.reserve(payload.size() + 2 * k.size());
  out.insert(out.end(), k.begin(), k.end());
  out.insert(out.end(), payload.begin(), payload.end());
  out.insert(out.end(), k.begin(), k.end());
  return out;
}

ByteVec unwrap_delimiters(ByteView wrapped, const StegoKey& key) {
  const ByteView k = key.bytes();
  if (wrapped.size() < 2 * k.size()) {
    throw DelimiterMismatch("payload shorter than its key delimiters");
  }
  const ByteView head = wrapped.first(k.size());
  const ByteView tail = wrapped.last(k.size());
  if (!std::equal(head.begin(), head.end(), k.begin()) ||
      !std::equal(tail.begin(), tail.end(), k.begin())) {
    throw DelimiterMismatch("key delimiters do not match");
  }
  const ByteView body = wrapped.subspan(k.size(), wrapped.size() - 2 * k.size());
  return ByteVec(body.begin(), body.end());
}

}  // namespace stegbmp
