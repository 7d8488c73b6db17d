// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Criteria 3 and 7 reuse the corpus built by criterion 2.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "cli.hpp"
#include "stegbmp/bit_embedder.hpp"
#include "stegbmp/bmp_codec.hpp"
#include "stegbmp/dedup_tokenizer.hpp"
#include "stegbmp/errors.hpp"
#include "stegbmp/keystream.hpp"
#include "stegbmp/payload_format.hpp"
#include "stegbmp/stego_methods.hpp"
#include "support/bmp_builder.hpp"
#include "support/brute_force_tokenizer.hpp"
#include "support/format_gen.hpp"
#include "support/temp_dir.hpp"

namespace stegbmp {
namespace {

using Rng = std::mt19937_64;
using Clock = std::chrono::steady_clock;
using testing::BmpSpec;
using testing::make_bmp;
using testing::random_bytes;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fixed2(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << v;
  return os.str();
}

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

// Keys stay printable and never start with '-' so they survive argv.
const std::string kKeyAlphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_.:+=@#%";

char random_key_char(Rng& rng) {
  return kKeyAlphabet[static_cast<std::size_t>(uniform(rng, 0, int(kKeyAlphabet.size()) - 1))];
}

StegoKey random_key(Rng& rng) {
  std::string text(static_cast<std::size_t>(uniform(rng, 1, 32)), ' ');
  for (char& ch : text) ch = random_key_char(rng);
  return StegoKey(text);
}

std::string key_text(const StegoKey& key) { return std::string(key.bytes().begin(), key.bytes().end()); }

std::string flip_one_byte(const std::string& key, Rng& rng) {
  std::string out = key;
  const auto pos = static_cast<std::size_t>(uniform(rng, 0, int(key.size()) - 1));
  while (out[pos] == key[pos]) out[pos] = random_key_char(rng);
  return out;
}

// Pixel bytes built from runs that are either copied from `source` or random.
ByteVec similar_data(ByteView source, std::size_t n, Rng& rng, double copy_share, int min_run,
                     int max_run) {
  ByteVec out;
  out.reserve(n);
  while (out.size() < n) {
    const std::size_t run =
        std::min<std::size_t>(static_cast<std::size_t>(uniform(rng, min_run, max_run)), n - out.size());
    if (source.size() >= run && coin(rng, copy_share)) {
      const auto at = static_cast<std::size_t>(uniform(rng, 0, int(source.size() - run)));
      out.insert(out.end(), source.begin() + at, source.begin() + at + run);
    } else {
      const ByteVec r = random_bytes(run, rng);
      out.insert(out.end(), r.begin(), r.end());
    }
  }
  return out;
}

// Overwrites scattered short runs until about `share` of the bytes are replaced.
ByteVec mutate(ByteVec data, double share, Rng& rng) {
  if (data.empty()) return data;
  const auto target = static_cast<std::size_t>(share * double(data.size()));
  std::size_t replaced = 0;
  while (replaced < target) {
    const auto run = static_cast<std::size_t>(uniform(rng, 1, 24));
    const auto at = static_cast<std::size_t>(uniform(rng, 0, int(data.size()) - 1));
    for (std::size_t i = at; i < std::min(data.size(), at + run); ++i, ++replaced) {
      data[i] = static_cast<Byte>(uniform(rng, 0, 255));
    }
  }
  return data;
}

ByteVec concat(ByteView a, ByteView b) {
  ByteVec out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

ByteVec with_pixels(ByteVec bmp, ByteView pixels) {
  const std::size_t offset = parse_bmp(bmp).pixel_data_offset;
  std::copy(pixels.begin(), pixels.end(), bmp.begin() + static_cast<std::ptrdiff_t>(offset));
  return bmp;
}

std::uint64_t sealed_bits(std::size_t payload, const StegoKey& key) {
  return 8 * (payload + 2 * key.size());
}

// ---------------------------------------------------------------------------
// Round-trip corpus

enum class Variant { Append, LsbAdjust, Reuse, DedupLsb, DedupReuse, Auto };
constexpr int kVariantCount = 6;

struct Case {
  Variant variant = Variant::Append;
  ByteVec container;
  std::vector<SinkInput> sinks;
  ByteVec stego;
  std::vector<SinkEntry> entries;
};

std::vector<Case> g_corpus;

BmpSpec random_sink_spec(Rng& rng, std::vector<std::uint16_t> bpps, int max_side) {
  const auto bpp = bpps[static_cast<std::size_t>(uniform(rng, 0, int(bpps.size()) - 1))];
  const int h = uniform(rng, 1, max_side);
  return BmpSpec{uniform(rng, 1, max_side), coin(rng, 0.2) ? -h : h, bpp};
}

BmpSpec random_container_spec(Rng& rng) {
  return BmpSpec{uniform(rng, 2, 64), uniform(rng, 2, 64), coin(rng, 0.3) ? std::uint16_t{8}
                                                                          : std::uint16_t{24}};
}

ByteVec similar_sink(const BmpSpec& spec, ByteView container_data, Rng& rng, double copy_share) {
  const ByteVec blank = make_bmp(spec, rng);
  const std::size_t n = parse_bmp(blank).data.size();
  return with_pixels(blank, similar_data(container_data, n, rng, copy_share, 8, 96));
}

Case make_candidate(Variant v, Rng& rng) {
  Case c;
  c.variant = v;
  const int n = uniform(rng, 1, 3);
  const std::vector<std::uint16_t> all_bpps = {1, 4, 8, 24, 32};
  BmpSpec cs = random_container_spec(rng);

  switch (v) {
    case Variant::Append:
    case Variant::LsbAdjust: {
      c.container = make_bmp(cs, rng);
      for (int i = 0; i < n; ++i) {
        c.sinks.push_back({make_bmp(random_sink_spec(rng, all_bpps, 24), rng), random_key(rng)});
      }
      break;
    }
    case Variant::Reuse: {
      // Sinks copy the container header; trailing container bytes give the
      // data parts room in the LSBs.
      cs.width = uniform(rng, 2, 16);
      cs.height = uniform(rng, 2, 16);
      std::vector<StegoKey> keys;
      std::uint64_t need = 0;
      const std::size_t pixels = testing::stride_of(cs.width, cs.bpp) * std::size_t(cs.height);
      for (int i = 0; i < n; ++i) {
        keys.push_back(random_key(rng));
        need += sealed_bits(pixels, keys.back()) + 1;
      }
      cs.trailing_bytes = need + static_cast<std::size_t>(uniform(rng, 0, 64));
      c.container = make_bmp(cs, rng);
      const BmpImage img = parse_bmp(c.container);
      for (const StegoKey& k : keys) {
        const ByteVec data = similar_data(img.data, pixels, rng, 0.3, 8, 64);
        c.sinks.push_back({concat(img.structural, data), k});
      }
      break;
    }
    case Variant::DedupLsb: {
      c.container = make_bmp(cs, rng);
      const BmpImage img = parse_bmp(c.container);
      for (int i = 0; i < n; ++i) {
        c.sinks.push_back(
            {similar_sink(random_sink_spec(rng, {8, 24, 32}, 32), img.data, rng, 0.5), random_key(rng)});
      }
      break;
    }
    case Variant::DedupReuse: {
      c.container = make_bmp(cs, rng);
      const BmpImage img = parse_bmp(c.container);
      for (int i = 0; i < n; ++i) {
        const double share = std::uniform_real_distribution<double>(0.05, 0.6)(rng);
        c.sinks.push_back({concat(img.structural, mutate(img.data, share, rng)), random_key(rng)});
      }
      break;
    }
    case Variant::Auto: {
      c.container = make_bmp(cs, rng);
      const BmpImage img = parse_bmp(c.container);
      std::vector<std::optional<BmpSpec>> specs;
      const int count = uniform(rng, 1, 4);
      for (int i = 0; i < count; ++i) {
        const int kind = uniform(rng, 0, 2);
        if (kind == 0) {
          c.sinks.push_back({concat(img.structural, mutate(img.data, 0.3, rng)), random_key(rng)});
          specs.push_back(std::nullopt);
        } else if (kind == 1 || i == 0 || !specs[static_cast<std::size_t>(i - 1)]) {
          const BmpSpec s = random_sink_spec(rng, all_bpps, 32);
          c.sinks.push_back({similar_sink(s, img.data, rng, 0.5), random_key(rng)});
          specs.push_back(s);
        } else {
          // Same header as the previous sink, usually under the same key.
          const BmpSpec s = *specs.back();
          const StegoKey key = coin(rng, 0.7) ? c.sinks.back().key : random_key(rng);
          c.sinks.push_back({similar_sink(s, img.data, rng, 0.5), key});
          specs.push_back(s);
        }
      }
      break;
    }
  }
  return c;
}

// Independent restatement of each method's capacity precondition.
bool precondition_holds(const Case& c) {
  const std::uint64_t slots = parse_bmp(c.container).data.size();
  std::uint64_t max_bits = 0;
  std::uint64_t sequential = 0;
  for (const SinkInput& s : c.sinks) {
    const BmpImage sink = parse_bmp(s.bytes);
    const std::uint64_t structural = sealed_bits(sink.structural.size(), s.key);
    max_bits = std::max(max_bits, structural);
    if (c.variant == Variant::Reuse) {
      sequential += sealed_bits(sink.data.size(), s.key) + 1;
    } else {
      sequential += structural + 1;
    }
  }
  switch (c.variant) {
    case Variant::LsbAdjust:
      return c.sinks.size() * max_bits + c.sinks.size() <= slots;
    case Variant::Reuse:
    case Variant::DedupLsb:
      return sequential <= slots;
    default:
      return true;
  }
}

StegoArtifact embed_case(const Case& c) {
  const BmpImage img = parse_bmp(c.container);
  const bool single = c.sinks.size() == 1;
  const SinkInput& first = c.sinks.front();
  switch (c.variant) {
    case Variant::Append:
      return single ? embed_append(img, first.bytes, first.key) : embed_batch(img, c.sinks, 1);
    case Variant::LsbAdjust:
      return embed_lsb_adjust(img, c.sinks);
    case Variant::Reuse:
      return single ? embed_structural_reuse(img, first.bytes, first.key)
                    : embed_batch(img, c.sinks, 3);
    case Variant::DedupLsb:
      return single ? embed_data_dedup(img, first.bytes, first.key, 2)
                    : embed_batch(img, c.sinks, 4, 2);
    case Variant::DedupReuse:
      return single ? embed_data_dedup(img, first.bytes, first.key, 3)
                    : embed_batch(img, c.sinks, 4, 3);
    case Variant::Auto:
      return embed_auto(img, c.sinks);
  }
  return {};
}

std::string method_label(const SinkEntry& e) {
  return e.method == 4 ? "4/" + std::to_string(e.sub_method) : std::to_string(e.method);
}

// ---------------------------------------------------------------------------
// Criteria

Outcome slot_addresses() {
  const std::uint64_t a = slot_address(SlotParams(6, 1), 1);
  const std::uint64_t b = slot_address(SlotParams(6, 2), 2);
  return {a == 7 && b == 14,
          "Z(n=6,c=1,bit 1)=" + std::to_string(a) + ", Z(n=6,c=2,bit 2)=" + std::to_string(b)};
}

Outcome universal_round_trip() {
  const auto start = Clock::now();
  Rng rng(2024);
  constexpr int kPerVariant = 40;
  std::size_t sinks = 0;
  std::size_t mismatched = 0;
  std::size_t errors = 0;
  std::size_t rejections_checked = 0;
  std::string first_error;
  std::map<std::string, std::size_t> methods;

  for (int i = 0; i < kPerVariant * kVariantCount; ++i) {
    const auto v = static_cast<Variant>(i % kVariantCount);
    Case c = make_candidate(v, rng);
    while (!precondition_holds(c)) {
      // Unmet preconditions must be refused before anything is written.
      if (rejections_checked < 25) {
        ++rejections_checked;
        try {
          embed_case(c);
          ++errors;
          if (first_error.empty()) first_error = "embed accepted a case over capacity";
        } catch (const CapacityExceeded&) {
        }
      }
      c = make_candidate(v, rng);
    }
    try {
      StegoArtifact a = embed_case(c);
      for (std::size_t j = 0; j < c.sinks.size(); ++j) {
        ++sinks;
        if (extract(a.bytes, c.sinks[j].key, j) != c.sinks[j].bytes) ++mismatched;
        ++methods[method_label(a.entries[j])];
      }
      c.stego = std::move(a.bytes);
      c.entries = std::move(a.entries);
      g_corpus.push_back(std::move(c));
    } catch (const std::exception& e) {
      ++errors;
      if (first_error.empty()) first_error = e.what();
    }
  }

  const double secs = seconds_since(start);
  std::string detail = std::to_string(g_corpus.size()) + " cases, " + std::to_string(sinks) +
                       " sinks, methods {";
  for (const auto& [m, count] : methods) detail += " " + m + ":" + std::to_string(count);
  detail += " }, " + std::to_string(mismatched) + " mismatched sinks, " + std::to_string(errors) +
            " errors, " + std::to_string(rejections_checked) +
            " over-capacity cases refused, " + fixed2(secs) + " s (limit 30 s)";
  if (!first_error.empty()) detail += "; first error: " + first_error;
  const bool all_methods = methods.size() == 5;
  return {g_corpus.size() >= 200 && mismatched == 0 && errors == 0 && all_methods && secs < 30.0,
          detail};
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

bool uses_lsb(const std::vector<SinkEntry>& entries) {
  return std::any_of(entries.begin(), entries.end(), [](const SinkEntry& e) {
    return std::holds_alternative<LsbLocator>(e.structural_locator) ||
           std::holds_alternative<LsbLocator>(e.data_locator);
  });
}

Outcome visual_invariance() {
  if (g_corpus.empty()) return {false, "round-trip corpus is empty"};
  testing::TempDir dir;
  const std::string container_path = dir.file("container.bmp");
  const std::string stego_path = dir.file("stego.bmp");
  std::size_t violations = 0;
  std::size_t untouched = 0;
  unsigned max_delta = 0;
  for (const Case& c : g_corpus) {
    testing::write_bytes(container_path, c.container);
    testing::write_bytes(stego_path, c.stego);
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run({"inspect", "--container", container_path, "--stego", stego_path},
                              out, err);
    auto kv = parse_key_values(out.str());
    if (code != cli::kOk || kv["structural_identical"] != "true" ||
        kv["compared_bytes"] != std::to_string(c.container.size())) {
      ++violations;
      continue;
    }
    const unsigned delta = static_cast<unsigned>(std::stoul(kv["max_delta"]));
    const std::uint64_t changed = std::stoull(kv["changed_bytes"]);
    max_delta = std::max(max_delta, delta);
    if (delta > 1) ++violations;
    if (!uses_lsb(c.entries)) {
      if (changed != 0) {
        ++violations;
      } else {
        ++untouched;
      }
    }
  }
  return {violations == 0,
          std::to_string(g_corpus.size()) + " outputs inspected, max data delta " +
              std::to_string(max_delta) + ", " + std::to_string(untouched) +
              " outputs without LSB use have an identical prefix, " + std::to_string(violations) +
              " violations"};
}

Outcome pm1_rule() {
  int bad = 0;
  for (int b = 0; b < 256; ++b) {
    for (int bit = 0; bit < 2; ++bit) {
      const int r = set_lsb_pm1(static_cast<std::uint8_t>(b), static_cast<std::uint8_t>(bit));
      if ((r & 1) != bit || std::abs(r - b) > 1 || r < 0 || r > 255) ++bad;
    }
  }
  return {bad == 0, "512 (byte, bit) pairs, " + std::to_string(bad) + " violations"};
}

Outcome dedup_savings() {
  const auto start = Clock::now();
  Rng rng(5);
  const StegoKey key("dedup-key");
  const ByteVec container = make_bmp({64, 64, 24}, rng);
  const BmpImage c = parse_bmp(container);

  // 12 bytes replaced in every 40: 30% of the data part, intact runs of 28.
  ByteVec sink = container;
  std::size_t replaced = 0;
  for (std::size_t at = c.pixel_data_offset; at + 12 <= sink.size(); at += 40) {
    for (std::size_t i = at; i < at + 12; ++i, ++replaced) sink[i] = static_cast<Byte>(~sink[i]);
  }
  const double share = double(replaced) / double(c.data.size());

  const StegoArtifact m1 = embed_append(c, sink, key);
  const StegoArtifact m43 = embed_data_dedup(c, sink, key, 3);
  const StegoArtifact m42 = embed_data_dedup(c, sink, key, 2);
  const bool round_trips = extract(m1.bytes, key, 0) == sink && extract(m43.bytes, key, 0) == sink &&
                           extract(m42.bytes, key, 0) == sink;

  const double a1 = double(m1.report.total_appended_bytes);
  const double r3 = double(m43.report.total_appended_bytes) / a1;
  const double r2 = double(m42.report.total_appended_bytes) / a1;
  const double secs = seconds_since(start);
  return {round_trips && r3 <= 0.75 && r2 <= 0.75 && secs < 5.0,
          fixed2(100 * share) + "% of data replaced; appended bytes method 1=" +
              std::to_string(m1.report.total_appended_bytes) + ", method 4/3=" +
              std::to_string(m43.report.total_appended_bytes) + " (" + fixed2(100 * r3) +
              "%), method 4/2=" + std::to_string(m42.report.total_appended_bytes) + " (" +
              fixed2(100 * r2) + "%), limit 75%, " + fixed2(secs) + " s"};
}

Outcome pipeline_savings() {
  const auto start = Clock::now();
  Rng rng(6);
  const ByteVec container = make_bmp({64, 64, 24}, rng);
  const BmpImage c = parse_bmp(container);
  const StegoKey a("pipeline-a");
  const StegoKey b("pipeline-b");

  std::vector<SinkInput> sinks;
  double similarity = 1.0;
  for (int i = 0; i < 5; ++i) {
    const ByteVec blank = make_bmp({32, 32, 24}, rng);
    const ByteVec data = similar_data(c.data, parse_bmp(blank).data.size(), rng, 0.5, 32, 96);
    // Run-wise similarity: share of bytes covered by matches of at least kMinRun.
    const TokenStream t = tokenize(data, c.data);
    std::size_t covered = 0;
    for (const Token& tok : t.tokens) {
      if (const auto* copy = std::get_if<CopyToken>(&tok)) covered += copy->length;
    }
    similarity = std::min(similarity, double(covered) / double(data.size()));
    sinks.push_back({with_pixels(blank, data), i % 2 == 0 ? a : b});
  }

  const StegoArtifact m1 = embed_batch(c, sinks, 1);
  const StegoArtifact autos = embed_auto(c, sinks);
  bool round_trips = true;
  std::string plans;
  for (std::size_t i = 0; i < sinks.size(); ++i) {
    round_trips = round_trips && extract(autos.bytes, sinks[i].key, i) == sinks[i].bytes &&
                  extract(m1.bytes, sinks[i].key, i) == sinks[i].bytes;
    plans += (i ? "," : "") + method_label(autos.entries[i]);
  }
  const double ratio =
      double(autos.report.file_growth_bytes) / double(m1.report.file_growth_bytes);
  const double secs = seconds_since(start);
  return {round_trips && similarity >= 0.40 && ratio <= 0.90 && secs < 10.0,
          "5 sinks, min run-wise similarity " + fixed2(100 * similarity) + "%, auto plans [" +
              plans + "], growth auto=" + std::to_string(autos.report.file_growth_bytes) +
              " vs method 1=" + std::to_string(m1.report.file_growth_bytes) + " (" +
              fixed2(100 * ratio) + "%, limit 90%), auto saved " +
              fixed2(100 * autos.report.saved_fraction) + "% of sink bytes, " + fixed2(secs) +
              " s"};
}

Outcome key_rejection() {
  if (g_corpus.empty()) return {false, "round-trip corpus is empty"};
  Rng rng(7);
  testing::TempDir dir;
  const std::string stego_path = dir.file("stego.bmp");
  const std::string out_path = dir.file("rejected.bmp");
  std::size_t attempts = 0;
  std::size_t library_ok = 0;
  std::size_t cli_ok = 0;
  for (const Case& c : g_corpus) {
    testing::write_bytes(stego_path, c.stego);
    for (std::size_t j = 0; j < c.sinks.size(); ++j) {
      ++attempts;
      const std::string wrong = flip_one_byte(key_text(c.sinks[j].key), rng);
      try {
        extract(c.stego, StegoKey(wrong), j);
      } catch (const KeyMismatch&) {
        ++library_ok;
      } catch (const std::exception&) {
      }

      std::filesystem::remove(out_path);
      std::ostringstream out;
      std::ostringstream err;
      const int code = cli::run({"extract", "--stego", stego_path, "--key", wrong, "--index",
                                 std::to_string(j), "--out", out_path},
                                out, err);
      if (code == cli::kKeyMismatch && !std::filesystem::exists(out_path)) ++cli_ok;
    }
  }
  return {library_ok == attempts && cli_ok == attempts,
          std::to_string(library_ok) + "/" + std::to_string(attempts) +
              " KeyMismatch from the library, " + std::to_string(cli_ok) + "/" +
              std::to_string(attempts) + " CLI exits 2 with no output file"};
}

Outcome tokenizer_oracle() {
  const auto start = Clock::now();
  Rng rng(8);
  constexpr int kPairs = 120;
  int agree = 0;
  std::size_t copies = 0;
  for (int i = 0; i < kPairs; ++i) {
    const auto dict_size = static_cast<std::size_t>(uniform(rng, 0, 4096));
    const auto sink_size = static_cast<std::size_t>(uniform(rng, 0, 4096));
    ByteVec dict;
    ByteVec sink;
    switch (i % 3) {
      case 0: {
        // Tiny alphabets: many repeats and offset ties.
        const int symbols = uniform(rng, 1, 3);
        dict.resize(dict_size);
        sink.resize(sink_size);
        for (Byte& x : dict) x = static_cast<Byte>(uniform(rng, 0, symbols));
        for (Byte& x : sink) x = static_cast<Byte>(uniform(rng, 0, symbols));
        break;
      }
      case 1:
        dict = random_bytes(dict_size, rng);
        sink = similar_data(dict, sink_size, rng, 0.6, 4, 200);
        break;
      default:
        dict = random_bytes(dict_size, rng);
        sink = random_bytes(sink_size, rng);
        break;
    }
    const TokenStream fast = tokenize(sink, dict);
    copies += fast.copy_count();
    if (fast == testing::brute_force_tokenize(sink, dict) && detokenize(fast, dict) == sink) ++agree;
  }
  const double secs = seconds_since(start);
  return {agree == kPairs && secs < 60.0,
          std::to_string(agree) + "/" + std::to_string(kPairs) +
              " pairs match the brute-force oracle and invert (" + std::to_string(copies) +
              " COPY tokens), " + fixed2(secs) + " s"};
}

Outcome wire_round_trips() {
  Rng rng(9);
  std::uniform_int_distribution<std::uint64_t> u64;

  const ByteVec vector = {0x53, 0x47, 0x56, 0x31, 0x01, 0x00, 0x01, 0x00, 0xD2, 0x04, 0x00, 0x00,
                          0x00, 0x00, 0x00, 0x00, 0xE8, 0x03, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00};
  const bool vector_ok = write_footer({1, 1234, 1000}) == vector &&
                         read_footer(vector) == StegoFooter{1, 1234, 1000};

  int footers = 0;
  for (int i = 0; i < 500; ++i) {
    const std::uint64_t x = u64(rng);
    const std::uint64_t y = u64(rng);
    const StegoFooter f{static_cast<std::uint16_t>(x), std::max(x, y), std::min(x, y)};
    footers += read_footer(write_footer(f)) == f;
  }

  int directories = 0;
  for (int i = 0; i < 300; ++i) {
    std::vector<SinkEntry> entries;
    for (std::size_t j = 0; j < static_cast<std::size_t>(uniform(rng, 0, 8)); ++j) {
      entries.push_back(testing::random_entry(rng, j));
    }
    directories += read_directory(write_directory(entries), entries.size()) == entries;
  }

  int streams = 0;
  for (int i = 0; i < 300; ++i) {
    TokenStream t;
    const int count = uniform(rng, 0, 20);
    for (int k = 0; k < count; ++k) {
      if (coin(rng, 0.5)) {
        const auto len = static_cast<std::uint32_t>(uniform(rng, int(kMinRun), 100000));
        t.tokens.emplace_back(CopyToken{static_cast<std::uint32_t>(u64(rng)), len});
        t.total_length += len;
      } else {
        LiteralToken lit{random_bytes(static_cast<std::size_t>(uniform(rng, 1, 50)), rng)};
        t.total_length += lit.bytes.size();
        t.tokens.emplace_back(std::move(lit));
      }
    }
    streams += parse_tokens(serialize_tokens(t)) == t;
  }

  return {vector_ok && footers == 500 && directories == 300 && streams == 300,
          std::string("footer vector ") + (vector_ok ? "matches" : "differs") + ", footers " +
              std::to_string(footers) + "/500, directories " + std::to_string(directories) +
              "/300, token streams " + std::to_string(streams) + "/300"};
}

struct Criterion {
  int id;
  const char* name;
  Outcome (*check)();
};

}  // namespace
}  // namespace stegbmp

int main() {
  using namespace stegbmp;
  const Criterion criteria[] = {
      {1, "slot-address reproduction", slot_addresses},
      {2, "universal round trip", universal_round_trip},
      {3, "visual-invariance bound", visual_invariance},
      {4, "+/-1 no-wrap rule", pm1_rule},
      {5, "dedup savings", dedup_savings},
      {6, "pipeline savings", pipeline_savings},
      {7, "key rejection", key_rejection},
      {8, "tokenizer oracle equivalence", tokenizer_oracle},
      {9, "format round trips", wire_round_trips},
  };

  int passed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("unexpected exception: ") + e.what()};
    }
    passed += o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << c.id << ". " << c.name << ": " << o.detail
              << std::endl;
  }
  const int total = static_cast<int>(std::size(criteria));
  std::cout << passed << "/" << total << " criteria passed" << std::endl;
  return passed == total ? 0 : 1;
}
