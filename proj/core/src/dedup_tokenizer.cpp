#include "stegbmp/dedup_tokenizer.hpp"

#include <limits>
#include <stdexcept>
#include <string>

#include "byte_io.hpp"
#include "stegbmp/errors.hpp"

namespace stegbmp {

namespace {

void append_literal(TokenStream& stream, Byte value) {
  if (stream.tokens.empty() || !std::holds_alternative<LiteralToken>(stream.tokens.back())) {
    stream.tokens.emplace_back(LiteralToken{});
  }
  std::get<LiteralToken>(stream.tokens.back()).bytes.push_back(value);
}

std::uint64_t token_length(const Token& token) {
  if (const auto* copy = std::get_if<CopyToken>(&token)) {
    return copy->length;
  }
  return std::get<LiteralToken>(token).bytes.size();
}

}  // namespace

std::size_t TokenStream::copy_count() const {
  std::size_t count = 0;
  for (const Token& t : tokens) {
    count += std::holds_alternative<CopyToken>(t) ? 1 : 0;
  }
  return count;
}

DictionaryIndex::DictionaryIndex(ByteView dictionary)
    : dictionary_(dictionary.begin(), dictionary.end()) {
  if (dictionary_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::length_error("dictionary larger than 4 GiB");
  }
  states_.reserve(2 * dictionary_.size() + 1);
  edges_.reserve(3 * dictionary_.size());
  states_.push_back(State{});
  for (std::size_t i = 0; i < dictionary_.size(); ++i) {
    extend(dictionary_[i], static_cast<std::uint32_t>(i));
  }
}

namespace {
constexpr std::uint32_t kDenseDegree = 32;
}  // namespace

std::int32_t DictionaryIndex::transition(std::int32_t state, Byte label) const {
  if (states_[state].row != kNone) {
    return rows_[states_[state].row][label];
  }
  for (std::int32_t e = states_[state].first_edge; e != kNone; e = edges_[e].next) {
    if (edges_[e].label == label) {
      return edges_[e].target;
    }
  }
  return kNone;
}

void DictionaryIndex::set_transition(std::int32_t state, Byte label, std::int32_t target) {
  if (states_[state].row != kNone) {
    rows_[states_[state].row][label] = target;
    return;
  }
  for (std::int32_t e = states_[state].first_edge; e != kNone; e = edges_[e].next) {
    if (edges_[e].label == label) {
      edges_[e].target = target;
      return;
    }
  }
  add_transition(state, label, target);
}

void DictionaryIndex::add_transition(std::int32_t state, Byte label, std::int32_t target) {
  State& s = states_[state];
  if (s.row != kNone) {
    rows_[s.row][label] = target;
    return;
  }
  edges_.push_back(Edge{target, s.first_edge, label});
  s.first_edge = static_cast<std::int32_t>(edges_.size() - 1);
  if (++s.degree >= kDenseDegree) {
    make_dense(state);
  }
}

void DictionaryIndex::make_dense(std::int32_t state) {
  std::array<std::int32_t, 256> row;
  row.fill(kNone);
  for (std::int32_t e = states_[state].first_edge; e != kNone; e = edges_[e].next) {
    row[edges_[e].label] = edges_[e].target;
  }
  rows_.push_back(row);
  states_[state].row = static_cast<std::int32_t>(rows_.size() - 1);
}

void DictionaryIndex::extend(Byte label, std::uint32_t position) {
  const auto cur = static_cast<std::int32_t>(states_.size());
  states_.push_back(State{states_[last_].len + 1, kNone, position});

  std::int32_t p = last_;
  while (p != kNone && transition(p, label) == kNone) {
    add_transition(p, label, cur);
    p = states_[p].link;
  }

  if (p == kNone) {
    states_[cur].link = 0;
  } else {
    const std::int32_t q = transition(p, label);
    if (states_[p].len + 1 == states_[q].len) {
      states_[cur].link = q;
    } else {
      const auto clone = static_cast<std::int32_t>(states_.size());
      states_.push_back(State{states_[p].len + 1, states_[q].link, states_[q].first_end});
      if (states_[q].row != kNone) {
        const std::array<std::int32_t, 256> row = rows_[states_[q].row];
        rows_.push_back(row);
        states_[clone].row = static_cast<std::int32_t>(rows_.size() - 1);
      } else {
        for (std::int32_t e = states_[q].first_edge; e != kNone; e = edges_[e].next) {
          add_transition(clone, edges_[e].label, edges_[e].target);
        }
      }
      while (p != kNone && transition(p, label) == q) {
        set_transition(p, label, clone);
        p = states_[p].link;
      }
      states_[q].link = clone;
      states_[cur].link = clone;
    }
  }
  last_ = cur;
}

Match DictionaryIndex::longest_match(ByteView needle) const {
  std::int32_t state = 0;
  std::uint32_t length = 0;
  while (length < needle.size()) {
    const std::int32_t next = transition(state, needle[length]);
    if (next == kNone) {
      break;
    }
    state = next;
    ++length;
  }
  if (length == 0) {
    return {};
  }
  // Every string in a state shares its end positions, so the earliest end is
  // also the earliest start for this length.
  return Match{states_[state].first_end + 1 - length, length};
}

TokenStream tokenize(ByteView sink_data, ByteView dictionary) {
  return tokenize(sink_data, DictionaryIndex(dictionary));
}

TokenStream tokenize(ByteView sink_data, const DictionaryIndex& index) {
  TokenStream stream;
  std::size_t pos = 0;
  while (pos < sink_data.size()) {
    const Match m = index.longest_match(sink_data.subspan(pos));
    if (m.length >= kMinRun) {
      stream.tokens.emplace_back(CopyToken{m.offset, m.length});
      pos += m.length;
    } else {
      append_literal(stream, sink_data[pos]);
      ++pos;
    }
  }
  stream.total_length = sink_data.size();
  return stream;
}

ByteVec detokenize(const TokenStream& stream, ByteView dictionary) {
  ByteVec out;
  out.reserve(stream.total_length);
  for (const Token& token : stream.tokens) {
    if (const auto* copy = std::get_if<CopyToken>(&token)) {
      const std::uint64_t end = std::uint64_t{copy->source_offset} + copy->length;
      if (end > dictionary.size()) {
        throw FormatError("COPY token [" + std::to_string(copy->source_offset) + ", " +
                          std::to_string(end) + ") outside dictionary of " +
                          std::to_string(dictionary.size()) + " bytes");
      }
      out.insert(out.end(), dictionary.begin() + copy->source_offset, dictionary.begin() + end);
    } else {
      const ByteVec& bytes = std::get<LiteralToken>(token).bytes;
      out.insert(out.end(), bytes.begin(), bytes.end());
    }
  }
  if (out.size() != stream.total_length) {
    throw FormatError("token stream expands to " + std::to_string(out.size()) +
                      " bytes, expected " + std::to_string(stream.total_length));
  }
  return out;
}

ByteVec serialize_tokens(const TokenStream& stream) {
  ByteVec out;
  detail::ByteWriter w(out);
  for (const Token& token : stream.tokens) {
    if (const auto* copy = std::get_if<CopyToken>(&token)) {
      w.u8(kCopyTag);
      w.u32(copy->source_offset);
      w.u32(copy->length);
    } else {
      const ByteVec& bytes = std::get<LiteralToken>(token).bytes;
      if (bytes.size() > std::numeric_limits<std::uint32_t>::max()) {
        throw std::length_error("literal token larger than 4 GiB");
      }
      w.u8(kLiteralTag);
      w.u32(static_cast<std::uint32_t>(bytes.size()));
      w.bytes(bytes);
    }
  }
  return out;
}

TokenStream parse_tokens(ByteView raw) {
  TokenStream stream;
  detail::ByteReader r(raw, "token stream");
  while (!r.done()) {
    const std::uint8_t tag = r.u8();
    if (tag == kCopyTag) {
      CopyToken copy;
      copy.source_offset = r.u32();
      copy.length = r.u32();
      if (copy.length < kMinRun) {
        throw FormatError("COPY token shorter than the minimum run");
      }
      stream.tokens.emplace_back(copy);
    } else if (tag == kLiteralTag) {
      const std::uint32_t length = r.u32();
      if (length == 0) {
        throw FormatError("empty LITERAL token");
      }
      const ByteView bytes = r.bytes(length);
      stream.tokens.emplace_back(LiteralToken{ByteVec(bytes.begin(), bytes.end())});
    } else {
      throw FormatError("unknown token tag " + std::to_string(tag));
    }
    stream.total_length += token_length(stream.tokens.back());
  }
  return stream;
}

}  // namespace stegbmp
