#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "stegbmp/bmp_codec.hpp"
#include "stegbmp/errors.hpp"
#include "stegbmp/keystream.hpp"
#include "stegbmp/payload_format.hpp"
#include "stegbmp/stego_methods.hpp"

namespace stegbmp::cli {

namespace {

namespace fs = std::filesystem;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string container;
  std::string stego;
  std::vector<std::string> sinks;
  std::vector<std::string> keys;
  std::string method = "auto";
  std::string sub = "auto";
  std::string out;
  std::size_t index = 0;
  bool all = false;
};

ByteVec read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path);
  }
  ByteVec bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw IoError("cannot read " + path);
  }
  return bytes;
}

void write_file(const fs::path& path, ByteView bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot create " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
}

StegoKey make_key(const std::string& text) {
  try {
    return StegoKey(std::string_view(text));
  } catch (const std::invalid_argument&) {
    throw FormatError("stego key must be 1 to 255 bytes long");
  }
}

// Flag wins over the environment. Key text is never echoed.
std::vector<StegoKey> resolve_keys(const std::vector<std::string>& flags, std::size_t wanted) {
  std::vector<StegoKey> keys;
  if (!flags.empty()) {
    for (const std::string& k : flags) {
      keys.push_back(make_key(k));
    }
    return keys;
  }
  const char* env = std::getenv(kKeyEnvVar);
  if (env == nullptr) {
    throw FormatError(std::string("no key given; pass --key or set ") + kKeyEnvVar);
  }
  for (std::size_t i = 0; i < wanted; ++i) {
    keys.push_back(make_key(env));
  }
  return keys;
}

std::string percent(double fraction) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << 100.0 * fraction;
  return os.str();
}

void print_entry(std::ostream& out, std::size_t i, const SinkEntry& e) {
  out << "sink=" << i << " method=" << int{e.method} << " sub=" << int{e.sub_method}
      << " structural=" << to_string(e.structural_mode) << " data=" << to_string(e.data_mode)
      << '\n';
}

void print_report(std::ostream& out, const SavingsReport& r) {
  for (std::size_t i = 0; i < r.sinks.size(); ++i) {
    const SinkSavings& s = r.sinks[i];
    out << "sink." << i << ".original_bytes=" << s.original_bytes << '\n';
    out << "sink." << i << ".appended_bytes=" << s.appended_bytes << '\n';
    out << "sink." << i << ".directory_bytes=" << s.directory_bytes << '\n';
    out << "sink." << i << ".lsb_bits=" << s.lsb_bits_used << '\n';
    out << "sink." << i << ".saved_bytes=" << s.saved_bytes() << '\n';
  }
  out << "total_original_bytes=" << r.total_original_bytes << '\n';
  out << "total_appended_bytes=" << r.total_appended_bytes << '\n';
  out << "total_directory_bytes=" << r.total_directory_bytes << '\n';
  out << "footer_bytes=" << r.footer_bytes << '\n';
  out << "file_growth_bytes=" << r.file_growth_bytes << '\n';
  out << "saved_bytes=" << r.saved_bytes << '\n';
  out << "saved_percent=" << percent(r.saved_fraction) << '\n';
}

int parse_method(const std::string& text) {
  if (text == "auto") {
    return 0;
  }
  if (text == "1" || text == "2" || text == "3" || text == "4") {
    return text[0] - '0';
  }
  throw FormatError("--method must be auto, 1, 2, 3 or 4");
}

int parse_sub(const std::string& text) {
  if (text == "auto") {
    return 0;
  }
  if (text == "2" || text == "3") {
    return text[0] - '0';
  }
  throw FormatError("--sub must be auto, 2 or 3");
}

// A container that already carries a trailer is extended rather than
// overwritten.
struct LoadedContainer {
  BmpImage image;
  std::optional<StegoArtifact> prior;
};

LoadedContainer load_container(const std::string& path) {
  const ByteVec bytes = read_file(path);
  LoadedContainer loaded;
  if (probe_stego(bytes)) {
    loaded.prior = open_stego(bytes);
    loaded.image = parse_bmp(ByteView(bytes).first(loaded.prior->footer.original_container_length));
  } else {
    loaded.image = parse_bmp(bytes);
  }
  return loaded;
}

int cmd_embed(const Options& o, std::ostream& out) {
  if (!o.keys.empty() && o.keys.size() != o.sinks.size()) {
    throw FormatError("embed needs one --key per --sink");
  }
  const int method = parse_method(o.method);
  const int sub = parse_sub(o.sub);
  if (sub != 0 && method != 4) {
    throw FormatError("--sub only applies to --method 4");
  }

  const LoadedContainer container = load_container(o.container);
  const std::vector<StegoKey> keys = resolve_keys(o.keys, o.sinks.size());
  std::vector<SinkInput> sinks;
  for (std::size_t i = 0; i < o.sinks.size(); ++i) {
    sinks.push_back({read_file(o.sinks[i]), keys[i]});
  }

  const StegoArtifact* prior = container.prior ? &*container.prior : nullptr;
  StegoArtifact artifact;
  try {
    artifact = method == 0 ? embed_auto(container.image, sinks, prior)
                           : embed_batch(container.image, sinks, method, sub, prior);
  } catch (const StructuralMismatch& e) {
    throw StructuralMismatch(std::string(e.what()) +
                             "; use --method auto or --method 2 to store the structural part");
  }

  write_file(o.out, artifact.bytes);
  for (std::size_t i = 0; i < artifact.entries.size(); ++i) {
    print_entry(out, i, artifact.entries[i]);
  }
  print_report(out, artifact.report);
  return kOk;
}

int cmd_extract(const Options& o, std::ostream& out) {
  const ByteVec stego = read_file(o.stego);
  if (!probe_stego(stego)) {
    throw FormatError("not a stego file: " + o.stego);
  }
  if (o.keys.size() > 1) {
    throw FormatError("extract takes a single --key");
  }
  const StegoKey key = resolve_keys(o.keys, 1).front();

  if (!o.all) {
    const ByteVec sink = extract(stego, key, o.index);
    write_file(o.out, sink);
    out << "sink=" << o.index << " bytes=" << sink.size() << " output=" << o.out << '\n';
    return kOk;
  }

  const auto sinks = extract_all(stego, key);
  fs::create_directories(o.out);
  for (const auto& [index, bytes] : sinks) {
    const fs::path path = fs::path(o.out) / ("sink_" + std::to_string(index) + ".bmp");
    write_file(path, bytes);
    out << "sink=" << index << " bytes=" << bytes.size() << " output=" << path.string() << '\n';
  }
  return kOk;
}

int cmd_list(const Options& o, std::ostream& out) {
  const ByteVec stego = read_file(o.stego);
  const auto index = probe_stego(stego);
  if (!index) {
    throw FormatError("not a stego file: " + o.stego);
  }
  const SavingsReport report = savings_report(index->entries);
  out << "sink_count=" << index->footer.sink_count << '\n';
  out << "container_bytes=" << index->footer.original_container_length << '\n';
  for (std::size_t i = 0; i < index->entries.size(); ++i) {
    const SinkEntry& e = index->entries[i];
    const SinkSavings& s = report.sinks[i];
    out << "sink=" << i << " method=" << int{e.method} << " sub=" << int{e.sub_method}
        << " structural=" << to_string(e.structural_mode) << " data=" << to_string(e.data_mode)
        << " original_bytes=" << s.original_bytes << " appended_bytes=" << s.appended_bytes
        << " lsb_bits=" << s.lsb_bits_used << '\n';
  }
  return kOk;
}

int cmd_capacity(const Options& o, std::ostream& out) {
  const LoadedContainer container = load_container(o.container);
  const std::uint64_t slots = lsb_capacity_bits(container.image);
  std::uint64_t free_slots = slots;
  if (container.prior) {
    free_slots = free_lsb_slots(*container.prior);
  }
  out << "lsb_slots=" << slots << '\n';
  out << "used_slots=" << (container.prior ? lsb_high_water(container.prior->entries) : 0) << '\n';
  out << "free_slots=" << free_slots << '\n';
  out << "sealed=" << (container.prior && lsb_sealed(container.prior->entries) ? "true" : "false")
      << '\n';
  return kOk;
}

int cmd_inspect(const Options& o, std::ostream& out) {
  const ByteVec container = read_file(o.container);
  const ByteVec stego = read_file(o.stego);
  const DiffReport d = inspect_stego(container, stego);
  out << "compared_bytes=" << d.compared_bytes << '\n';
  out << "changed_bytes=" << d.changed_bytes << '\n';
  out << "max_delta=" << d.max_delta << '\n';
  out << "structural_identical=" << (d.structural_identical ? "true" : "false") << '\n';
  out << "appended_bytes=" << d.appended_bytes << '\n';
  std::ostringstream growth;
  growth << std::fixed << std::setprecision(2) << d.growth_percent;
  out << "growth_percent=" << growth.str() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hide BMP images inside a BMP container, one stego key per image"};
  app.name("stegbmp");
  app.require_subcommand(1);

  Options o;

  auto* embed = app.add_subcommand("embed", "Hide one or more sink BMPs in a container");
  embed->add_option("--container", o.container, "Container BMP (or an existing stego file)")
      ->required();
  embed->add_option("--sink", o.sinks, "Sink BMP to hide (repeatable)")->required();
  embed->add_option("--key", o.keys, "Stego key, one per --sink (default: $STEGO_KEY)");
  embed->add_option("--method", o.method, "auto, 1, 2, 3 or 4")->capture_default_str();
  embed->add_option("--sub", o.sub, "Method 4 structural handling: auto, 2 or 3")
      ->capture_default_str();
  embed->add_option("--out", o.out, "Output stego file")->required();

  auto* extract_cmd = app.add_subcommand("extract", "Recover hidden sinks with their key");
  extract_cmd->add_option("--stego", o.stego, "Stego file")->required();
  extract_cmd->add_option("--key", o.keys, "Stego key (default: $STEGO_KEY)");
  auto* index_opt = extract_cmd->add_option("--index", o.index, "Sink index")->capture_default_str();
  extract_cmd->add_flag("--all", o.all, "Extract every sink stored under the key")
      ->excludes(index_opt);
  extract_cmd->add_option("--out", o.out, "Output file, or directory with --all")->required();

  auto* list = app.add_subcommand("list", "Show the sink directory (no key needed)");
  list->add_option("--stego", o.stego, "Stego file")->required();

  auto* capacity = app.add_subcommand("capacity", "Show LSB slot capacity");
  capacity->add_option("--container", o.container, "Container BMP or stego file")->required();

  auto* inspect = app.add_subcommand("inspect", "Compare a container with a stego file");
  inspect->add_option("--container", o.container, "Original container BMP")->required();
  inspect->add_option("--stego", o.stego, "Stego file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e, out, err);
    }
    err << "error: " << e.what() << '\n';
    return kFormatError;
  }

  try {
    if (embed->parsed()) {
      return cmd_embed(o, out);
    }
    if (extract_cmd->parsed()) {
      return cmd_extract(o, out);
    }
    if (list->parsed()) {
      return cmd_list(o, out);
    }
    if (capacity->parsed()) {
      return cmd_capacity(o, out);
    }
    return cmd_inspect(o, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const KeyMismatch&) {
    err << "error: key mismatch\n";
    return kKeyMismatch;
  } catch (const CapacityExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kCapacityExceeded;
  } catch (const StegoError& e) {
    err << "error: " << e.what() << '\n';
    return kFormatError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kFormatError;
  }
}

}  // namespace stegbmp::cli
