#include "cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "jtm/jtm.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace jtm::cli {

namespace {

/// Bad flag value discovered after CLI11 parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Shared option plumbing
// ---------------------------------------------------------------------------

struct EncodingFlags {
  std::string level = "satbright";
  std::string plane = "all";
  std::string size = "256x256";
  double margin = 0.05;
  double s_min = 0.0, s_max = 1.0, b_min = 0.0, b_max = 1.0;
  std::optional<double> speed_ref;
};

const std::vector<std::string> kLevelChoices{"plain", "hue", "parts", "sat", "bright", "satbright", "all"};
const std::vector<std::string> kPlaneChoices{"front", "top", "side", "all"};

void add_encoding_flags(CLI::App& cmd, EncodingFlags& f, bool allow_all_levels) {
  auto levels = kLevelChoices;
  if (!allow_all_levels) levels.pop_back();
  cmd.add_option("--level", f.level, "Encoding level")->check(CLI::IsMember(levels))->capture_default_str();
  cmd.add_option("--plane", f.plane, "Projection plane")->check(CLI::IsMember(kPlaneChoices))->capture_default_str();
  cmd.add_option("--size", f.size, "Canvas size WxH")->capture_default_str();
  cmd.add_option("--margin", f.margin, "Canvas margin as a fraction of each side")->capture_default_str();
  cmd.add_option("--smin", f.s_min, "Minimum saturation")->capture_default_str();
  cmd.add_option("--smax", f.s_max, "Maximum saturation")->capture_default_str();
  cmd.add_option("--bmin", f.b_min, "Minimum brightness")->capture_default_str();
  cmd.add_option("--bmax", f.b_max, "Maximum brightness")->capture_default_str();
  cmd.add_option("--speed-ref", f.speed_ref, "Fixed speed normalizer instead of the per-sequence maximum");
}

std::vector<EncodingLevel> selected_levels(const EncodingFlags& f) {
  if (f.level == "all") return {kAllLevels.begin(), kAllLevels.end()};
  return {*level_from_name(f.level)};
}

std::vector<Plane> selected_planes(const EncodingFlags& f) {
  if (f.plane == "all") return {kAllPlanes.begin(), kAllPlanes.end()};
  return {*plane_from_name(f.plane)};
}

EncodingConfig encoding_config(const EncodingFlags& f) {
  EncodingConfig c;
  c.level = f.level == "all" ? EncodingLevel::HuePartsSatBright : *level_from_name(f.level);
  const auto x = f.size.find('x');
  int w = 0, h = 0;
  if (x == std::string::npos) throw UsageError("--size must look like WxH, got '" + f.size + "'");
  try {
    std::size_t used_w = 0, used_h = 0;
    w = std::stoi(f.size.substr(0, x), &used_w);
    h = std::stoi(f.size.substr(x + 1), &used_h);
    if (used_w != x || used_h != f.size.size() - x - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw UsageError("--size must look like WxH, got '" + f.size + "'");
  }
  c.canvas.width = w;
  c.canvas.height = h;
  c.canvas.margin_fraction = f.margin;
  c.range = {f.s_min, f.s_max, f.b_min, f.b_max};
  c.speed_reference = f.speed_ref;
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return c;
}

std::vector<int> parse_subject_list(const std::string& text) {
  std::vector<int> out;
  if (text.empty() || text == "-") return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      const auto dash = item.find('-', 1);
      std::size_t used = 0;
      if (dash == std::string::npos) {
        out.push_back(std::stoi(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } else {
        const int lo = std::stoi(item.substr(0, dash));
        const int hi = std::stoi(item.substr(dash + 1), &used);
        if (used != item.size() - dash - 1 || hi < lo) throw std::invalid_argument(item);
        for (int s = lo; s <= hi; ++s) out.push_back(s);
      }
    } catch (const std::exception&) {
      throw UsageError("bad subject list item '" + item + "'");
    }
  }
  return out;
}

/// "odd-even" or "subjects TRAIN/VALIDATION/TEST" (or TRAIN/TEST), lists like
/// "1-4", "1,3,5,7" or "-".
SplitProtocol parse_protocol(const std::vector<std::string>& tokens) {
  std::string joined;
  for (const auto& t : tokens) joined += (joined.empty() ? "" : " ") + t;
  if (joined == "odd-even") return SplitProtocol::odd_even();
  const std::string prefix = "subjects";
  if (joined.rfind(prefix, 0) == 0) {
    std::string lists = joined.substr(prefix.size());
    lists.erase(0, lists.find_first_not_of(" :="));
    std::vector<std::string> parts;
    std::stringstream ss(lists);
    std::string part;
    while (std::getline(ss, part, '/')) parts.push_back(part);
    if (parts.size() != 2 && parts.size() != 3)
      throw UsageError("--protocol subjects expects TRAIN/TEST or TRAIN/VALIDATION/TEST");
    auto to_set = [](const std::string& s) {
      auto v = parse_subject_list(s);
      return std::set<int>(v.begin(), v.end());
    };
    try {
      if (parts.size() == 2) return SplitProtocol::subject_lists(to_set(parts[0]), {}, to_set(parts[1]));
      return SplitProtocol::subject_lists(to_set(parts[0]), to_set(parts[1]), to_set(parts[2]));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  throw UsageError("unknown protocol '" + joined + "' (use odd-even or subjects A/B/C)");
}

// ---------------------------------------------------------------------------
// Files, hashing, manifests
// ---------------------------------------------------------------------------

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error("read failed: " + path.string());
  return std::move(ss).str();
}

void write_file(const fs::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path.string());
}

std::string bytes_view(const std::vector<std::uint8_t>& b) { return std::string(b.begin(), b.end()); }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

json colormap_json(const Colormap& cm) {
  json anchors = json::array();
  for (const auto& a : cm.anchors()) anchors.push_back({a.position, a.color.r, a.color.g, a.color.b});
  return {{"reversed", cm.is_reversed()}, {"anchors", anchors}};
}

json config_json(const EncodingConfig& c, const std::vector<EncodingLevel>& levels, const std::vector<Plane>& planes) {
  json lv = json::array(), pl = json::array();
  for (auto l : levels) lv.push_back(level_name(l));
  for (auto p : planes) pl.push_back(plane_name(p));
  return {
      {"levels", lv},
      {"planes", pl},
      {"range", {{"s_min", c.range.s_min}, {"s_max", c.range.s_max}, {"b_min", c.range.b_min}, {"b_max", c.range.b_max}}},
      {"canvas",
       {{"width", c.canvas.width},
        {"height", c.canvas.height},
        {"margin_fraction", c.canvas.margin_fraction},
        {"background", {c.canvas.background.r, c.canvas.background.g, c.canvas.background.b}}}},
      {"speed_reference", c.speed_reference ? json(*c.speed_reference) : json(nullptr)},
      {"colormaps",
       {{"left", colormap_json(c.bank.left)},
        {"right", colormap_json(c.bank.right)},
        {"middle", colormap_json(c.bank.middle)}}},
  };
}

json manifest_skeleton(std::string_view command, json config) {
  return {{"tool", "jtm"},       {"version", kVersion},       {"command", command},
          {"created", utc_timestamp()}, {"config", std::move(config)}, {"inputs", json::array()},
          {"outputs", json::array()}};
}

std::string output_relative(const fs::path& p, const fs::path& root) {
  return p.lexically_relative(root).generic_string();
}

/// Canonical `.jtm` files of a dataset directory, sorted by name.
std::vector<fs::path> dataset_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".jtm") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error("no .jtm files in " + dir.string());
  return files;
}

struct LoadedDataset {
  std::vector<Sample> samples;
  std::vector<fs::path> paths;
  std::vector<std::string> hashes;
};

LoadedDataset load_dataset(const fs::path& dir) {
  LoadedDataset ds;
  for (const auto& path : dataset_files(dir)) {
    const std::string text = read_file(path);
    try {
      SkeletonSequence seq = parse_canonical(text);
      if (!seq.label()) throw ValidationError("sample has no class label");
      if (!seq.subject()) throw ValidationError("sample has no subject id");
      ds.samples.push_back({path.stem().string(), std::move(seq)});
    } catch (const Error& e) {
      throw Error(path.string() + ": " + e.what());
    }
    ds.paths.push_back(path);
    ds.hashes.push_back(sha256_hex(text));
  }
  return ds;
}

// ---------------------------------------------------------------------------
// encode
// ---------------------------------------------------------------------------

struct EncodeOptions {
  std::vector<std::string> inputs;
  std::string out_dir = ".";
  std::string format = "auto";
  bool keep_going = false;
  bool ppm = false;
  EncodingFlags enc;
};

int cmd_encode(const EncodeOptions& o, std::ostream& out, std::ostream& err) {
  if (o.inputs.empty()) {
    err << "encode: no input files\n";
    return kUsageError;
  }
  const EncodingConfig base = encoding_config(o.enc);
  const auto levels = selected_levels(o.enc);
  const auto planes = selected_planes(o.enc);
  const fs::path out_dir(o.out_dir);
  fs::create_directories(out_dir);

  struct Parsed {
    std::string path;
    std::string id;
    std::string hash;
    std::string format;
    std::optional<SkeletonSequence> seq;
  };
  std::vector<Parsed> parsed;
  bool failed = false;
  std::set<std::string> ids;
  for (const auto& input : o.inputs) {
    try {
      const std::string text = read_file(input);
      const bool canonical = o.format == "canonical" || (o.format == "auto" && looks_canonical(text));
      Parsed p{input, fs::path(input).stem().string(), sha256_hex(text), canonical ? "canonical" : "msrc12", {}};
      if (!ids.insert(p.id).second) throw Error("duplicate sample id '" + p.id + "' (output names would collide)");
      p.seq = canonical ? parse_canonical(text) : parse_msrc12_stream(text, default_layout_20());
      parsed.push_back(std::move(p));
    } catch (const std::exception& e) {
      err << "error: " << input << ": " << e.what() << "\n";
      failed = true;
      if (!o.keep_going) return kProcessingError;
    }
  }

  // Render and write in parallel; each job owns its output files.
  struct Job {
    std::size_t input;
    Plane plane;
    EncodingLevel level;
    fs::path path;
    std::string hash;
    std::string error;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    for (Plane p : planes) {
      for (EncodingLevel l : levels) jobs.push_back({i, p, l, out_dir / jtm_file_name(parsed[i].id, p, l), {}, {}});
    }
  }
  parallel_for(jobs.size(), default_thread_count(), [&](std::size_t j) {
    Job& job = jobs[j];
    try {
      EncodingConfig cfg = base;
      cfg.level = job.level;
      const JtmImage img = render_jtm(*parsed[job.input].seq, job.plane, cfg);
      const auto png = encode_png(img);
      write_file(job.path, bytes_view(png));
      job.hash = sha256_hex(bytes_view(png));
      if (o.ppm) {
        fs::path ppm = job.path;
        ppm.replace_extension(".ppm");
        write_ppm(ppm, img);
      }
    } catch (const std::exception& e) {
      job.error = e.what();
    }
  });

  json manifest = manifest_skeleton("encode", config_json(base, levels, planes));
  for (const auto& p : parsed) manifest["inputs"].push_back({{"path", p.path}, {"sha256", p.hash}, {"format", p.format}});
  std::size_t written = 0;
  for (const auto& job : jobs) {
    if (!job.error.empty()) {
      err << "error: " << parsed[job.input].path << ": " << job.error << "\n";
      failed = true;
      continue;
    }
    ++written;
    manifest["outputs"].push_back({{"path", output_relative(job.path, out_dir)},
                                   {"sha256", job.hash},
                                   {"input", parsed[job.input].path},
                                   {"plane", plane_name(job.plane)},
                                   {"level", level_name(job.level)}});
  }
  write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  out << "encoded " << parsed.size() << " sequence(s) into " << written << " image(s) in " << out_dir.string() << "\n";
  return failed ? kProcessingError : kOk;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalOptions {
  std::string dataset;
  std::vector<std::string> protocol{"odd-even"};
  std::size_t k = 1;
  int feature_side = 64;
  bool ablation = false;
  std::string out_dir;
  EncodingFlags enc;
};

std::string records_jsonl(const EvalReport& r) {
  std::string out;
  for (const auto& rec : r.records) {
    json line = {{"id", rec.id},
                 {"true", rec.true_label},
                 {"predicted", rec.predicted_label},
                 {"classes", r.classes},
                 {"scores", rec.scores}};
    out += line.dump() + "\n";
  }
  return out;
}

int cmd_eval(const EvalOptions& o, std::ostream& out) {
  const SplitProtocol protocol = parse_protocol(o.protocol);
  EvalConfig cfg;
  cfg.encoding = encoding_config(o.enc);
  cfg.k = o.k;
  cfg.feature_side = o.feature_side;
  cfg.threads = default_thread_count();
  if (o.k < 1) throw UsageError("--k must be at least 1");
  const auto plane = plane_from_name(o.enc.plane);
  cfg.mode = !plane ? PlaneMode::Fused
             : *plane == Plane::Front ? PlaneMode::Front
             : *plane == Plane::Top   ? PlaneMode::Top
                                      : PlaneMode::Side;

  const LoadedDataset ds = load_dataset(o.dataset);
  const fs::path out_dir(o.out_dir);
  if (!o.out_dir.empty()) fs::create_directories(out_dir);

  if (o.ablation) {
    const Plane ab_plane = plane.value_or(Plane::Front);
    const auto rows = run_ablation(ds.samples, protocol, cfg, ab_plane);
    const std::string table = format_ablation_table(rows, ab_plane);
    out << "protocol  " << protocol.describe() << "\n" << table;
    if (!o.out_dir.empty()) write_file(out_dir / "ablation.txt", table);
    return kOk;
  }

  const EvalReport report = evaluate(ds.samples, protocol, cfg);
  const std::string table = "protocol  " + protocol.describe() + "\n" + format_report_table(report);
  out << table;
  if (!o.out_dir.empty()) {
    write_file(out_dir / "report.txt", table);
    write_file(out_dir / "records.jsonl", records_jsonl(report));
    write_file(out_dir / "confusion.csv", format_confusion_csv(report));
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// export
// ---------------------------------------------------------------------------

struct ExportOptions {
  std::string dataset;
  std::string out_dir;
  std::vector<std::string> protocol{"odd-even"};
  bool force = false;
  EncodingFlags enc;
};

int cmd_export(const ExportOptions& o, std::ostream& out, std::ostream& err) {
  const SplitProtocol protocol = parse_protocol(o.protocol);
  const EncodingConfig base = encoding_config(o.enc);
  const auto levels = selected_levels(o.enc);
  const auto planes = selected_planes(o.enc);
  const LoadedDataset ds = load_dataset(o.dataset);
  const Split split = make_split(ds.samples, protocol);
  const fs::path root(o.out_dir);

  struct Job {
    std::size_t sample;
    std::string partition;
    Plane plane;
    EncodingLevel level;
    fs::path path;
    std::string hash;
  };
  std::vector<Job> jobs;
  auto add = [&](const std::vector<std::size_t>& idx, const std::string& partition) {
    for (std::size_t i : idx) {
      const auto& s = ds.samples[i];
      const fs::path dir = root / partition / std::to_string(*s.sequence.label());
      for (Plane p : planes) {
        for (EncodingLevel l : levels) jobs.push_back({i, partition, p, l, dir / jtm_file_name(s.id, p, l), {}});
      }
    }
  };
  add(split.train, "train");
  add(split.validation, "validation");
  add(split.test, "test");

  std::set<fs::path> targets;
  for (const auto& j : jobs) {
    if (!targets.insert(j.path).second) {
      err << "error: two samples map to " << j.path.string() << "\n";
      return kProcessingError;
    }
    if (!o.force && fs::exists(j.path)) {
      err << "error: " << j.path.string() << " already exists (use --force to overwrite)\n";
      return kProcessingError;
    }
  }
  for (const auto& j : jobs) fs::create_directories(j.path.parent_path());

  parallel_for(jobs.size(), default_thread_count(), [&](std::size_t i) {
    Job& job = jobs[i];
    EncodingConfig cfg = base;
    cfg.level = job.level;
    const auto png = encode_png(render_jtm(ds.samples[job.sample].sequence, job.plane, cfg));
    write_file(job.path, bytes_view(png));
    job.hash = sha256_hex(bytes_view(png));
  });

  json cfg_json = config_json(base, levels, planes);
  cfg_json["protocol"] = protocol.describe();
  json manifest = manifest_skeleton("export", std::move(cfg_json));
  for (std::size_t i = 0; i < ds.paths.size(); ++i)
    manifest["inputs"].push_back({{"path", ds.paths[i].generic_string()}, {"sha256", ds.hashes[i]}});
  for (const auto& j : jobs) {
    manifest["outputs"].push_back({{"path", output_relative(j.path, root)},
                                   {"sha256", j.hash},
                                   {"input", ds.paths[j.sample].generic_string()},
                                   {"partition", j.partition},
                                   {"label", *ds.samples[j.sample].sequence.label()},
                                   {"plane", plane_name(j.plane)},
                                   {"level", level_name(j.level)}});
  }
  write_file(root / "manifest.json", manifest.dump(2) + "\n");
  out << "exported " << jobs.size() << " image(s): " << split.train.size() << " train, " << split.validation.size()
      << " validation, " << split.test.size() << " test sample(s)\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

struct SynthCmdOptions {
  std::string generator;
  std::size_t count = 1;
  std::uint64_t seed = 0;
  double noise = SynthOptions{}.noise_sigma;
  std::string out_dir = ".";
};

int cmd_synth(const SynthCmdOptions& o, std::ostream& out) {
  std::vector<Gesture> gestures;
  if (o.generator == "all") {
    gestures.assign(kAllGestures.begin(), kAllGestures.end());
  } else if (auto g = gesture_from_name(o.generator)) {
    gestures.push_back(*g);
  } else {
    throw UsageError("unknown generator '" + o.generator + "'");
  }
  if (o.noise < 0.0) throw UsageError("--noise must be non-negative");
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  std::size_t written = 0;
  for (Gesture g : gestures) {
    for (const auto& s : synthesize_batch(g, o.count, o.seed, SynthOptions{o.noise})) {
      write_file(dir / (s.id + ".jtm"), serialize_canonical(s.sequence));
      ++written;
    }
  }
  out << "wrote " << written << " sequence(s) to " << dir.string() << "\n";
  return kOk;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 failed");
  std::ostringstream ss;
  ss << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) ss << std::setw(2) << static_cast<int>(digest[i]);
  return ss.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Joint trajectory map encoder and evaluation harness", "jtm"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  EncodeOptions enc;
  auto* encode = app.add_subcommand("encode", "Render JTM images for skeleton sequence files");
  encode->add_option("inputs", enc.inputs, "Canonical (.jtm) or MSRC-12 files")->required();
  encode->add_option("-o,--out", enc.out_dir, "Output directory")->capture_default_str();
  encode->add_option("--format", enc.format, "Input format")
      ->check(CLI::IsMember({"auto", "canonical", "msrc12"}))
      ->capture_default_str();
  encode->add_flag("--keep-going", enc.keep_going, "Continue after a file fails");
  encode->add_flag("--ppm", enc.ppm, "Also write binary PPM copies");
  add_encoding_flags(*encode, enc.enc, true);

  EvalOptions ev;
  auto* eval = app.add_subcommand("eval", "Nearest-neighbour evaluation of a labeled dataset directory");
  eval->add_option("dataset", ev.dataset, "Directory of canonical .jtm files")->required();
  eval->add_option("--protocol", ev.protocol, "odd-even | subjects TRAIN/VAL/TEST")->expected(1, 2);
  eval->add_option("--k", ev.k, "Neighbours")->capture_default_str();
  eval->add_option("--feature-side", ev.feature_side, "Downsampled feature side in pixels")->capture_default_str();
  eval->add_flag("--ablation", ev.ablation, "Accuracy of every encoding level on one plane (front by default)");
  eval->add_option("-o,--out", ev.out_dir, "Directory for report.txt, records.jsonl, confusion.csv");
  add_encoding_flags(*eval, ev.enc, false);

  ExportOptions ex;
  auto* exp = app.add_subcommand("export", "Write a class-foldered image tree for external training");
  exp->add_option("dataset", ex.dataset, "Directory of canonical .jtm files")->required();
  exp->add_option("-o,--out", ex.out_dir, "Output root")->required();
  exp->add_option("--protocol", ex.protocol, "odd-even | subjects TRAIN/VAL/TEST")->expected(1, 2);
  exp->add_flag("--force", ex.force, "Overwrite existing images");
  add_encoding_flags(*exp, ex.enc, true);

  SynthCmdOptions sy;
  auto* synth = app.add_subcommand("synth", "Generate synthetic gesture sequences");
  synth->add_option("generator", sy.generator, "circle-cw | circle-ccw | wave | kick | clap | all")->required();
  synth->add_option("--count", sy.count, "Sequences per generator")->capture_default_str();
  synth->add_option("--seed", sy.seed, "Random seed")->capture_default_str();
  synth->add_option("--noise", sy.noise, "Per-coordinate noise sigma (meters)")->capture_default_str();
  synth->add_option("-o,--out", sy.out_dir, "Output directory")->capture_default_str();

  auto* cmaps = app.add_subcommand("colormaps", "Print the colormap anchor table");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (encode->parsed()) return cmd_encode(enc, out, err);
    if (eval->parsed()) return cmd_eval(ev, out);
    if (exp->parsed()) return cmd_export(ex, out, err);
    if (synth->parsed()) return cmd_synth(sy, out);
    if (cmaps->parsed()) {
      out << format_colormap_bank(ColormapBank{});
      return kOk;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kProcessingError;
  }
  return kUsageError;
}

}  // namespace jtm::cli
