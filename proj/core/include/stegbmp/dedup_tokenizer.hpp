#pragma once

#include <array>
#include <cstdint>
#include <variant>
#include <vector>

#include "stegbmp/bytes.hpp"

namespace stegbmp {

// Shortest run worth a COPY token. A COPY costs 9 serialized bytes.
inline constexpr std::uint32_t kMinRun = 16;

inline constexpr std::uint8_t kCopyTag = 0x01;
inline constexpr std::uint8_t kLiteralTag = 0x02;

struct CopyToken {
  std::uint32_t source_offset = 0;
  std::uint32_t length = 0;

  bool operator==(const CopyToken&) const = default;
};

struct LiteralToken {
  ByteVec bytes;

  bool operator==(const LiteralToken&) const = default;
};

using Token = std::variant<CopyToken, LiteralToken>;

struct TokenStream {
  std::vector<Token> tokens;
  std::uint64_t total_length = 0;

  std::size_t copy_count() const;

  bool operator==(const TokenStream&) const = default;
};

struct Match {
  std::uint32_t offset = 0;
  std::uint32_t length = 0;
};

// Substring index over a dictionary. Answers "longest prefix of `needle` that
// occurs in the dictionary, earliest occurrence first" in O(match length).
class DictionaryIndex {
 public:
  explicit DictionaryIndex(ByteView dictionary);

  Match longest_match(ByteView needle) const;
  ByteView dictionary() const { return dictionary_; }

 private:
  static constexpr std::int32_t kNone = -1;

  struct State {
    std::uint32_t len = 0;
    std::int32_t link = kNone;
    std::uint32_t first_end = 0;  // end index (inclusive) of the earliest occurrence
    std::int32_t first_edge = kNone;
    std::uint32_t degree = 0;
    std::int32_t row = kNone;  // index into rows_ once the state is dense
  };

  struct Edge {
    std::int32_t target;
    std::int32_t next;
    Byte label;
  };

  std::int32_t transition(std::int32_t state, Byte label) const;
  void set_transition(std::int32_t state, Byte label, std::int32_t target);
  void add_transition(std::int32_t state, Byte label, std::int32_t target);
  void extend(Byte label, std::uint32_t position);
  void make_dense(std::int32_t state);

  ByteVec dictionary_;
  std::vector<State> states_;
  std::vector<Edge> edges_;
  // High-degree states (the root above all) get a full table instead of a list.
  std::vector<std::array<std::int32_t, 256>> rows_;
  std::int32_t last_ = 0;
};

// Greedy left-to-right scan emitting COPY for every longest match of at least
// kMinRun bytes and coalesced LITERALs elsewhere.
TokenStream tokenize(ByteView sink_data, ByteView dictionary);
TokenStream tokenize(ByteView sink_data, const DictionaryIndex& index);

// Throws FormatError when a COPY leaves the dictionary or the stream's
// total_length disagrees with its tokens.
ByteVec detokenize(const TokenStream& stream, ByteView dictionary);

// Wire format, little-endian:
//   COPY    = 0x01, u32 source_offset, u32 length
//   LITERAL = 0x02, u32 length, length raw bytes
ByteVec serialize_tokens(const TokenStream& stream);

// Throws FormatError on unknown tags, truncation, empty literals or COPYs
// shorter than kMinRun.
TokenStream parse_tokens(ByteView raw);

}  // namespace stegbmp
