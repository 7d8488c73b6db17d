#include "stegbmp/stego_methods.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "stegbmp/bit_embedder.hpp"
#include "stegbmp/dedup_tokenizer.hpp"
#include "stegbmp/errors.hpp"

namespace stegbmp {

namespace {

struct Job {
  ByteVec sink;
  StegoKey key;
  EmbedPlan plan;
};

// Read-only view of a stego file used by both extraction and append mode.
struct StegoView {
  ByteView bytes;
  const std::vector<SinkEntry>* entries;
  std::uint32_t data_offset;
  std::uint64_t container_length;

  ByteView container_data() const {
    return bytes.subspan(data_offset, container_length - data_offset);
  }
};

ByteVec seal(ByteView payload, const StegoKey& key) {
  return xor_keystream(wrap_with_delimiters(payload, key), key);
}

ByteVec open_sealed(ByteView sealed, const StegoKey& key) {
  return unwrap_delimiters(xor_keystream(sealed, key), key);
}

ByteVec decode_blob(const StegoView& view, const Locator& locator, const StegoKey& key) {
  const auto& blob = std::get<BlobLocator>(locator);
  return open_sealed(view.bytes.subspan(blob.offset, blob.length), key);
}

ByteVec decode_lsb(const StegoView& view, const Locator& locator, const StegoKey& key) {
  const auto& lsb = std::get<LsbLocator>(locator);
  const ByteView region = view.container_data().subspan(lsb.base);
  return open_sealed(bits_to_bytes(extract_bits(region, lsb.bit_count, lsb.params)), key);
}

ByteVec decode_structural(const StegoView& view, std::size_t index, const StegoKey& key) {
  const SinkEntry& e = (*view.entries)[index];
  ByteVec structural;
  switch (e.structural_mode) {
    case StructuralMode::Appended: {
      ByteVec whole = decode_blob(view, e.structural_locator, key);
      if (whole.size() < e.structural_length) {
        throw FormatError("sink " + std::to_string(index) + ": stored sink is truncated");
      }
      whole.resize(e.structural_length);
      structural = std::move(whole);
      break;
    }
    case StructuralMode::Lsb:
      structural = decode_lsb(view, e.structural_locator, key);
      break;
    case StructuralMode::Reused: {
      const std::uint32_t source = std::get<ReuseLocator>(e.structural_locator).source;
      if (source == 0) {
        const ByteView s = view.bytes.first(view.data_offset);
        structural.assign(s.begin(), s.end());
      } else {
        if (source > index || (*view.entries)[source - 1].key_tag != e.key_tag) {
          throw FormatError("sink " + std::to_string(index) + ": invalid reuse source");
        }
        structural = decode_structural(view, source - 1, key);
      }
      break;
    }
  }
  if (structural.size() != e.structural_length) {
    throw FormatError("sink " + std::to_string(index) + ": structural part has wrong length");
  }
  return structural;
}

ByteVec decode_sink(const StegoView& view, std::size_t index, const StegoKey& key) {
  const SinkEntry& e = (*view.entries)[index];
  if (e.key_tag != key_tag(key)) {
    throw KeyMismatch("key does not match sink " + std::to_string(index));
  }

  ByteVec sink;
  if (e.method == 1) {
    sink = decode_blob(view, e.structural_locator, key);
  } else {
    sink = decode_structural(view, index, key);
    ByteVec data;
    switch (e.data_mode) {
      case DataMode::Appended:
        data = decode_blob(view, e.data_locator, key);
        break;
      case DataMode::Lsb:
        data = decode_lsb(view, e.data_locator, key);
        break;
      case DataMode::Tokenized:
        data = detokenize(parse_tokens(decode_blob(view, e.data_locator, key)),
                          view.container_data());
        break;
    }
    sink.insert(sink.end(), data.begin(), data.end());
  }
  if (sink.size() != e.sink_total_length) {
    throw FormatError("sink " + std::to_string(index) + ": reconstructed " +
                      std::to_string(sink.size()) + " bytes, directory says " +
                      std::to_string(e.sink_total_length));
  }
  return sink;
}

StegoView view_of(const StegoArtifact& a) {
  return StegoView{a.bytes, &a.entries, a.container_data_offset,
                   a.footer.original_container_length};
}

void check_prior_matches(const BmpImage& container, const StegoArtifact& prior) {
  const ByteView prefix = ByteView(prior.bytes).first(prior.footer.original_container_length);
  const bool same_structure =
      container.structural.size() == prior.container_data_offset &&
      std::equal(container.structural.begin(), container.structural.end(), prefix.begin());
  // LSB writes move each data byte by at most one.
  const ByteView stored =
      prefix.subspan(std::min<std::size_t>(prefix.size(), prior.container_data_offset));
  const bool same_data =
      container.data.size() == stored.size() &&
      std::equal(container.data.begin(), container.data.end(), stored.begin(),
                 [](Byte a, Byte b) { return std::abs(int{a} - int{b}) <= 1; });
  if (!same_structure || !same_data) {
    throw FormatError("container does not match the stego file being extended");
  }
}

// Structural parts visible to a sink under `key`: the container's, then every
// earlier sink stored under the same key.
StructuralRegistry build_registry(const BmpImage& container, const StegoArtifact* prior,
                                  std::span<const Job> batch, const StegoKey& key) {
  StructuralRegistry registry;
  registry.push_back({0, container.structural});
  const KeyTag tag = key_tag(key);
  std::uint32_t source = 1;
  if (prior != nullptr) {
    const StegoView view = view_of(*prior);
    for (std::size_t i = 0; i < prior->entries.size(); ++i, ++source) {
      if (prior->entries[i].key_tag == tag) {
        registry.push_back({source, decode_structural(view, i, key)});
      }
    }
  }
  for (const Job& job : batch) {
    if (job.key == key) {
      registry.push_back({source, parse_bmp(job.sink).structural});
    }
    ++source;
  }
  return registry;
}

std::optional<std::uint32_t> find_in_registry(const StructuralRegistry& registry,
                                              const ByteVec& structural) {
  for (const RegistryEntry& r : registry) {
    if (r.structural == structural) {
      return r.source;
    }
  }
  return std::nullopt;
}

std::uint64_t sealed_size(std::uint64_t payload, const StegoKey& key) {
  return payload + 2 * key.size();
}

EmbedPlan plan_for(std::uint8_t method, std::uint8_t sub, std::optional<std::uint32_t> source) {
  EmbedPlan plan;
  plan.method = method;
  plan.sub_method = sub;
  plan.reuse_source = source;
  switch (method) {
    case 1:
      break;
    case 2:
      plan.structural_mode = StructuralMode::Lsb;
      break;
    case 3:
      plan.structural_mode = StructuralMode::Reused;
      plan.data_mode = DataMode::Lsb;
      break;
    default:
      plan.structural_mode = sub == 3 ? StructuralMode::Reused : StructuralMode::Lsb;
      plan.data_mode = DataMode::Tokenized;
      break;
  }
  if (plan.structural_mode == StructuralMode::Lsb || plan.data_mode == DataMode::Lsb) {
    plan.slot_params = SlotParams(1, 1);
  }
  return plan;
}

struct LsbPayload {
  std::size_t job = 0;
  bool structural = false;
  BitVec bits;
};

// Builds a new artifact from `container` (or `prior`) plus `jobs`. All LSB
// writes happen before any tokenization so COPY tokens see the final data part.
StegoArtifact run_embed(const BmpImage& container, const StegoArtifact* prior,
                        std::vector<Job> jobs, bool interleave_structural) {
  ByteVec prefix;
  ByteVec blobs;
  std::vector<SinkEntry> entries;
  if (prior != nullptr) {
    check_prior_matches(container, *prior);
    const ByteView all = prior->bytes;
    const ByteView p = all.first(prior->footer.original_container_length);
    const ByteView b = all.subspan(p.size(), prior->footer.directory_offset - p.size());
    prefix.assign(p.begin(), p.end());
    blobs.assign(b.begin(), b.end());
    entries = prior->entries;
  } else {
    prefix = serialize_bmp(container);
  }
  const std::uint32_t data_offset = container.pixel_data_offset;
  const std::span<Byte> data(prefix.data() + data_offset, prefix.size() - data_offset);
  const std::size_t first_new = entries.size();
  if (jobs.empty()) {
    throw std::invalid_argument("no sinks to embed");
  }
  if (first_new + jobs.size() > 0xFFFF) {
    throw CapacityExceeded("a stego file holds at most 65535 sinks");
  }

  std::vector<BmpImage> sinks;
  sinks.reserve(jobs.size());
  for (const Job& job : jobs) {
    sinks.push_back(parse_bmp(job.sink));
  }

  // Resolve structural reuse before touching anything.
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    EmbedPlan& plan = jobs[j].plan;
    if (plan.structural_mode != StructuralMode::Reused) {
      continue;
    }
    const StructuralRegistry registry =
        build_registry(container, prior, std::span(jobs).first(j), jobs[j].key);
    if (!plan.reuse_source) {
      plan.reuse_source = find_in_registry(registry, sinks[j].structural);
    }
    const auto listed = std::find_if(registry.begin(), registry.end(), [&](const RegistryEntry& r) {
      return plan.reuse_source && r.source == *plan.reuse_source;
    });
    if (listed == registry.end() || listed->structural != sinks[j].structural) {
      throw StructuralMismatch("sink " + std::to_string(j) +
                               ": no identical structural part is available for reuse");
    }
  }

  // Gather every LSB payload.
  std::vector<LsbPayload> payloads;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const EmbedPlan& plan = jobs[j].plan;
    if (plan.structural_mode == StructuralMode::Lsb) {
      payloads.push_back({j, true, bytes_to_bits(seal(sinks[j].structural, jobs[j].key))});
    }
    if (plan.data_mode == DataMode::Lsb) {
      payloads.push_back({j, false, bytes_to_bits(seal(sinks[j].data, jobs[j].key))});
    }
  }

  std::vector<std::optional<LsbLocator>> structural_lsb(jobs.size());
  std::vector<std::optional<LsbLocator>> data_lsb(jobs.size());
  if (!payloads.empty()) {
    if (lsb_sealed(entries)) {
      throw CapacityExceeded(
          "container data is referenced by tokenized sinks; no LSB slots can be written");
    }
    std::uint64_t high_water = lsb_high_water(entries);
    auto place = [&](const LsbPayload& p, const SlotParams& params, std::uint64_t base) {
      const LsbLocator loc{base, params, p.bits.size()};
      (p.structural ? structural_lsb : data_lsb)[p.job] = loc;
      return loc.end();
    };

    std::vector<const LsbPayload*> sequential;
    if (interleave_structural) {
      std::vector<const LsbPayload*> group;
      for (const LsbPayload& p : payloads) {
        (p.structural ? group : sequential).push_back(&p);
      }
      if (!group.empty()) {
        const auto n = static_cast<std::uint32_t>(group.size());
        std::uint64_t max_bits = 0;
        for (const LsbPayload* p : group) {
          max_bits = std::max<std::uint64_t>(max_bits, p->bits.size());
        }
        const std::uint64_t needed = high_water + slots_required(SlotParams(n, n), max_bits);
        if (needed > data.size()) {
          throw CapacityExceeded("structural parts need " + std::to_string(needed) +
                                 " LSB slots, container data part has " +
                                 std::to_string(data.size()));
        }
        std::uint64_t end = high_water;
        for (std::uint32_t c = 1; c <= n; ++c) {
          end = std::max(end, place(*group[c - 1], SlotParams(n, c), high_water));
        }
        high_water = end;
      }
    } else {
      for (const LsbPayload& p : payloads) {
        sequential.push_back(&p);
      }
    }
    for (const LsbPayload* p : sequential) {
      const std::uint64_t needed = high_water + slots_required(SlotParams(1, 1), p->bits.size());
      if (needed > data.size()) {
        throw CapacityExceeded("sink " + std::to_string(p->job) + " needs " +
                               std::to_string(needed) + " LSB slots, container data part has " +
                               std::to_string(data.size()));
      }
      high_water = place(*p, SlotParams(1, 1), high_water);
    }

    for (const LsbPayload& p : payloads) {
      const LsbLocator& loc = *(p.structural ? structural_lsb : data_lsb)[p.job];
      embed_bits_into(data.subspan(loc.base), p.bits, loc.params);
    }
  }

  std::optional<DictionaryIndex> dictionary;
  auto append_blob = [&](ByteView sealed) {
    const BlobLocator loc{prefix.size() + blobs.size(), sealed.size()};
    blobs.insert(blobs.end(), sealed.begin(), sealed.end());
    return loc;
  };

  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const Job& job = jobs[j];
    const BmpImage& sink = sinks[j];
    SinkEntry e;
    e.method = job.plan.method;
    e.sub_method = job.plan.sub_method;
    e.key_tag = key_tag(job.key);
    e.sink_total_length = job.sink.size();
    e.structural_length = static_cast<std::uint32_t>(sink.structural.size());
    e.structural_mode = job.plan.structural_mode;
    e.data_mode = job.plan.data_mode;

    if (job.plan.method == 1) {
      const BlobLocator whole = append_blob(seal(job.sink, job.key));
      e.structural_locator = whole;
      e.data_locator = whole;
    } else {
      switch (e.structural_mode) {
        case StructuralMode::Lsb:
          e.structural_locator = *structural_lsb[j];
          break;
        case StructuralMode::Reused:
          e.structural_locator = ReuseLocator{*job.plan.reuse_source};
          break;
        case StructuralMode::Appended:
          throw FormatError("appended structural parts are only used by method 1");
      }
      switch (e.data_mode) {
        case DataMode::Appended:
          e.data_locator = append_blob(seal(sink.data, job.key));
          break;
        case DataMode::Lsb:
          e.data_locator = *data_lsb[j];
          break;
        case DataMode::Tokenized:
          if (!dictionary) {
            dictionary.emplace(ByteView(data.data(), data.size()));
          }
          e.data_locator = append_blob(seal(serialize_tokens(tokenize(sink.data, *dictionary)), job.key));
          break;
      }
    }
    validate_entry(e, first_new + j);
    entries.push_back(std::move(e));
  }

  StegoArtifact artifact;
  artifact.footer.sink_count = static_cast<std::uint16_t>(entries.size());
  artifact.footer.original_container_length = prefix.size();
  artifact.footer.directory_offset = prefix.size() + blobs.size();
  artifact.container_data_offset = data_offset;

  const ByteVec directory = write_directory(entries);
  const ByteVec footer = write_footer(artifact.footer);
  artifact.bytes = std::move(prefix);
  artifact.bytes.insert(artifact.bytes.end(), blobs.begin(), blobs.end());
  artifact.bytes.insert(artifact.bytes.end(), directory.begin(), directory.end());
  artifact.bytes.insert(artifact.bytes.end(), footer.begin(), footer.end());
  artifact.entries = std::move(entries);
  artifact.report = savings_report(artifact.entries);
  return artifact;
}

}  // namespace

StegoArtifact open_stego(ByteView stego) {
  auto index = probe_stego(stego);
  if (!index) {
    throw FormatError("not a stego file");
  }
  StegoArtifact artifact;
  artifact.bytes.assign(stego.begin(), stego.end());
  artifact.entries = std::move(index->entries);
  artifact.footer = index->footer;
  artifact.container_data_offset = index->container_data_offset;
  artifact.report = savings_report(artifact.entries);
  return artifact;
}

StegoArtifact embed_batch(const BmpImage& container, std::span<const SinkInput> sinks, int method,
                          int sub_method, const StegoArtifact* prior) {
  if (method < 1 || method > 4) {
    throw std::invalid_argument("method must be 1, 2, 3 or 4");
  }
  if (method == 4 && sub_method != 0 && sub_method != 2 && sub_method != 3) {
    throw std::invalid_argument("method 4 sub-method must be 2 or 3");
  }
  std::vector<Job> jobs;
  for (const SinkInput& s : sinks) {
    std::uint8_t sub = method == 4 ? static_cast<std::uint8_t>(sub_method) : 0;
    if (method == 4 && sub == 0) {
      const StructuralRegistry registry = build_registry(container, prior, jobs, s.key);
      sub = find_in_registry(registry, parse_bmp(s.bytes).structural) ? 3 : 2;
    }
    jobs.push_back({s.bytes, s.key, plan_for(static_cast<std::uint8_t>(method), sub, std::nullopt)});
  }
  return run_embed(container, prior, std::move(jobs), method == 2);
}

StegoArtifact embed_append(const BmpImage& container, ByteView sink, const StegoKey& key,
                           const StegoArtifact* prior) {
  const SinkInput input{ByteVec(sink.begin(), sink.end()), key};
  return embed_batch(container, std::span(&input, 1), 1, 0, prior);
}

StegoArtifact embed_lsb_adjust(const BmpImage& container, std::span<const SinkInput> sinks,
                               const StegoArtifact* prior) {
  return embed_batch(container, sinks, 2, 0, prior);
}

StegoArtifact embed_structural_reuse(const BmpImage& container, ByteView sink,
                                     const StegoKey& key, const StegoArtifact* prior) {
  const SinkInput input{ByteVec(sink.begin(), sink.end()), key};
  return embed_batch(container, std::span(&input, 1), 3, 0, prior);
}

StegoArtifact embed_data_dedup(const BmpImage& container, ByteView sink, const StegoKey& key,
                               int sub_method, const StegoArtifact* prior) {
  if (sub_method != 2 && sub_method != 3) {
    throw std::invalid_argument("method 4 sub-method must be 2 or 3");
  }
  const SinkInput input{ByteVec(sink.begin(), sink.end()), key};
  return embed_batch(container, std::span(&input, 1), 4, sub_method, prior);
}

EmbedPlan select_method(const BmpImage& container, ByteView sink, const StegoKey& key,
                        const StructuralRegistry& registry, std::uint64_t free_slots) {
  (void)container;  // the container's own structural part arrives via the registry
  const BmpImage parsed = parse_bmp(sink);
  const std::uint64_t token_bound = parsed.data.size() + 5;

  if (const auto source = find_in_registry(registry, parsed.structural)) {
    EmbedPlan plan = plan_for(4, 3, source);
    plan.estimated_appended_bytes = sealed_size(token_bound, key);
    return plan;
  }

  const std::uint64_t structural_bits = 8 * sealed_size(parsed.structural.size(), key);
  if (slots_required(SlotParams(1, 1), structural_bits) <= free_slots) {
    EmbedPlan plan = plan_for(4, 2, std::nullopt);
    plan.estimated_appended_bytes = sealed_size(token_bound, key);
    return plan;
  }

  EmbedPlan plan = plan_for(1, 0, std::nullopt);
  plan.estimated_appended_bytes = sealed_size(sink.size(), key);
  return plan;
}

std::uint64_t free_lsb_slots(const StegoArtifact& artifact) {
  if (lsb_sealed(artifact.entries)) {
    return 0;
  }
  const std::uint64_t data_size =
      artifact.footer.original_container_length - artifact.container_data_offset;
  return data_size - std::min(data_size, lsb_high_water(artifact.entries));
}

StegoArtifact embed_auto(const BmpImage& container, std::span<const SinkInput> sinks,
                         const StegoArtifact* prior) {
  if (prior != nullptr) {
    check_prior_matches(container, *prior);
  }
  std::uint64_t free_slots = 0;
  if (prior != nullptr) {
    free_slots = free_lsb_slots(*prior);
  } else {
    free_slots = lsb_capacity_bits(container);
  }

  std::vector<Job> jobs;
  for (const SinkInput& s : sinks) {
    const StructuralRegistry registry = build_registry(container, prior, jobs, s.key);
    EmbedPlan plan = select_method(container, s.bytes, s.key, registry, free_slots);
    if (plan.structural_mode == StructuralMode::Lsb) {
      const std::uint64_t bits = 8 * sealed_size(parse_bmp(s.bytes).structural.size(), s.key);
      free_slots -= slots_required(SlotParams(1, 1), bits);
    }
    jobs.push_back({s.bytes, s.key, std::move(plan)});
  }
  return run_embed(container, prior, std::move(jobs), false);
}

ByteVec extract(ByteView stego, const StegoKey& key, std::size_t index) {
  const auto probed = probe_stego(stego);
  if (!probed) {
    throw FormatError("not a stego file");
  }
  if (index >= probed->entries.size()) {
    throw IndexOutOfRange("sink index " + std::to_string(index) + " out of range (" +
                          std::to_string(probed->entries.size()) + " sinks)");
  }
  const StegoView view{stego, &probed->entries, probed->container_data_offset,
                       probed->footer.original_container_length};
  return decode_sink(view, index, key);
}

std::vector<std::pair<std::size_t, ByteVec>> extract_all(ByteView stego, const StegoKey& key) {
  const auto probed = probe_stego(stego);
  if (!probed) {
    throw FormatError("not a stego file");
  }
  const StegoView view{stego, &probed->entries, probed->container_data_offset,
                       probed->footer.original_container_length};
  const KeyTag tag = key_tag(key);
  std::vector<std::pair<std::size_t, ByteVec>> out;
  for (std::size_t i = 0; i < probed->entries.size(); ++i) {
    if (probed->entries[i].key_tag == tag) {
      out.emplace_back(i, decode_sink(view, i, key));
    }
  }
  if (out.empty()) {
    throw KeyMismatch("no sink is stored under this key");
  }
  return out;
}

SavingsReport savings_report(const std::vector<SinkEntry>& entries) {
  SavingsReport report;
  for (const SinkEntry& e : entries) {
    SinkSavings s;
    s.original_bytes = e.sink_total_length;
    s.directory_bytes = entry_wire_size(e);
    const auto* structural_blob = std::get_if<BlobLocator>(&e.structural_locator);
    const auto* data_blob = std::get_if<BlobLocator>(&e.data_locator);
    if (structural_blob != nullptr) {
      s.appended_bytes += structural_blob->length;
    }
    if (data_blob != nullptr && !(structural_blob != nullptr && *structural_blob == *data_blob)) {
      s.appended_bytes += data_blob->length;
    }
    for (const Locator* l : {&e.structural_locator, &e.data_locator}) {
      if (const auto* lsb = std::get_if<LsbLocator>(l)) {
        s.lsb_bits_used += lsb->bit_count;
      }
    }
    report.total_original_bytes += s.original_bytes;
    report.total_appended_bytes += s.appended_bytes;
    report.total_directory_bytes += s.directory_bytes;
    report.saved_bytes += s.saved_bytes();
    report.sinks.push_back(s);
  }
  report.file_growth_bytes =
      report.total_appended_bytes + report.total_directory_bytes + report.footer_bytes;
  if (report.total_original_bytes > 0) {
    report.saved_fraction =
        static_cast<double>(report.saved_bytes) / static_cast<double>(report.total_original_bytes);
  }
  return report;
}

SavingsReport savings_report(const StegoArtifact& artifact) {
  return savings_report(artifact.entries);
}

DiffReport inspect_stego(ByteView container, ByteView stego) {
  const BmpImage parsed = parse_bmp(container);
  DiffReport d;
  d.compared_bytes = std::min(container.size(), stego.size());
  bool structural_same = stego.size() >= parsed.pixel_data_offset;
  for (std::size_t i = 0; i < d.compared_bytes; ++i) {
    if (container[i] == stego[i]) {
      continue;
    }
    ++d.changed_bytes;
    const int delta = std::abs(int{container[i]} - int{stego[i]});
    d.max_delta = std::max(d.max_delta, static_cast<std::uint32_t>(delta));
    if (i < parsed.pixel_data_offset) {
      structural_same = false;
    }
  }
  // A stego file shorter than its container lost bytes; count them as changed.
  if (stego.size() < container.size()) {
    d.changed_bytes += container.size() - stego.size();
  }
  d.structural_identical = structural_same;
  d.appended_bytes = stego.size() > container.size() ? stego.size() - container.size() : 0;
  d.growth_percent =
      100.0 * static_cast<double>(d.appended_bytes) / static_cast<double>(container.size());
  return d;
}

}  // namespace stegbmp
