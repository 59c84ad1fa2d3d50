#pragma once

// Skeleton data model, the canonical `JTM1` sequence text format and the
// MSRC-12 row-stream reader.

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_set>
#include <utility>
#include <vector>

namespace jtm {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structural problem with an input stream (bad header, missing lines).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A token that should be a number is not one.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Data violates a model invariant. `line()` is 0 when not tied to input text.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what), line_(0) {}
  ValidationError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Fewer than two frames: no trajectory step exists.
class TooShortError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend constexpr bool operator==(Vec3 a, Vec3 b) = default;

  /// Euclidean norm as sqrt of the sum of squares (exact under power-of-two scaling).
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

// ---------------------------------------------------------------------------
// Layout
// ---------------------------------------------------------------------------

enum class BodyPart { Left, Right, Middle };

inline constexpr std::array<BodyPart, 3> kAllBodyParts{BodyPart::Left, BodyPart::Right, BodyPart::Middle};

inline std::string_view to_string(BodyPart part) {
  switch (part) {
    case BodyPart::Left: return "left";
    case BodyPart::Right: return "right";
    case BodyPart::Middle: return "middle";
  }
  return "?";
}

struct JointId {
  std::size_t index = 0;
  std::string name;
};

/// Name-based part assignment used for layouts read from files: a name
/// containing "left" is Left, "right" is Right, anything else is Middle.
inline BodyPart infer_body_part(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower.find("left") != std::string::npos) return BodyPart::Left;
  if (lower.find("right") != std::string::npos) return BodyPart::Right;
  return BodyPart::Middle;
}

class SkeletonLayout {
 public:
  SkeletonLayout(std::vector<std::string> names, std::vector<BodyPart> parts) : parts_(std::move(parts)) {
    if (names.empty()) throw ValidationError("layout must have at least one joint");
    if (names.size() != parts_.size()) throw ValidationError("every joint needs exactly one body part");
    std::unordered_set<std::string> seen;
    joints_.reserve(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i].empty()) throw ValidationError("joint " + std::to_string(i) + " has an empty name");
      for (char c : names[i]) {
        if (std::isspace(static_cast<unsigned char>(c)))
          throw ValidationError("joint name '" + names[i] + "' contains whitespace");
      }
      if (!seen.insert(names[i]).second) throw ValidationError("duplicate joint name '" + names[i] + "'");
      joints_.push_back(JointId{i, std::move(names[i])});
    }
  }

  /// Layout whose parts are inferred from the joint names.
  static SkeletonLayout from_names(std::vector<std::string> names) {
    std::vector<BodyPart> parts;
    parts.reserve(names.size());
    for (const auto& n : names) parts.push_back(infer_body_part(n));
    return SkeletonLayout(std::move(names), std::move(parts));
  }

  std::size_t size() const noexcept { return joints_.size(); }
  const std::vector<JointId>& joints() const noexcept { return joints_; }
  const std::string& name(std::size_t index) const { return joints_.at(index).name; }
  BodyPart part_of(std::size_t index) const { return parts_.at(index); }

  std::optional<std::size_t> find(std::string_view name) const {
    for (const auto& j : joints_) {
      if (j.name == name) return j.index;
    }
    return std::nullopt;
  }

  BodyPart part_of(std::string_view name) const {
    auto idx = find(name);
    if (!idx) throw std::out_of_range("no joint named '" + std::string(name) + "'");
    return parts_[*idx];
  }

  std::size_t count(BodyPart part) const {
    return static_cast<std::size_t>(std::count(parts_.begin(), parts_.end(), part));
  }

  friend bool operator==(const SkeletonLayout& a, const SkeletonLayout& b) {
    if (a.parts_ != b.parts_ || a.joints_.size() != b.joints_.size()) return false;
    for (std::size_t i = 0; i < a.joints_.size(); ++i) {
      if (a.joints_[i].name != b.joints_[i].name) return false;
    }
    return true;
  }

 private:
  std::vector<JointId> joints_;
  std::vector<BodyPart> parts_;
};

/// The 20-joint Kinect v1 skeleton in sensor index order. Left and Right hold
/// eight joints each (shoulder, elbow, wrist, hand, hip, knee, ankle, foot);
/// Middle holds head, neck, torso and hip center.
inline SkeletonLayout default_layout_20() {
  using enum BodyPart;
  return SkeletonLayout(
      {"hip_center", "torso", "neck", "head",                                   //
       "left_shoulder", "left_elbow", "left_wrist", "left_hand",                //
       "right_shoulder", "right_elbow", "right_wrist", "right_hand",            //
       "left_hip", "left_knee", "left_ankle", "left_foot",                      //
       "right_hip", "right_knee", "right_ankle", "right_foot"},
      {Middle, Middle, Middle, Middle,  //
       Left, Left, Left, Left,          //
       Right, Right, Right, Right,      //
       Left, Left, Left, Left,          //
       Right, Right, Right, Right});
}

// ---------------------------------------------------------------------------
// Sequence
// ---------------------------------------------------------------------------

using Frame = std::vector<Vec3>;

class SkeletonSequence {
 public:
  SkeletonSequence(SkeletonLayout layout, std::vector<Frame> frames, std::optional<int> label = std::nullopt,
                   std::optional<int> subject = std::nullopt)
      : layout_(std::move(layout)), frames_(std::move(frames)), label_(label), subject_(subject) {
    if (frames_.size() < 2)
      throw TooShortError("sequence has " + std::to_string(frames_.size()) + " frame(s); at least 2 are required");
    for (std::size_t i = 0; i < frames_.size(); ++i) {
      if (frames_[i].size() != layout_.size())
        throw ValidationError("frame " + std::to_string(i) + " has " + std::to_string(frames_[i].size()) +
                              " joints, layout has " + std::to_string(layout_.size()));
      for (std::size_t j = 0; j < frames_[i].size(); ++j) {
        if (!frames_[i][j].finite())
          throw ValidationError("frame " + std::to_string(i) + " joint " + std::to_string(j) +
                                " has a non-finite coordinate");
      }
    }
  }

  const SkeletonLayout& layout() const noexcept { return layout_; }
  const std::vector<Frame>& frames() const noexcept { return frames_; }
  const Frame& frame(std::size_t i) const { return frames_.at(i); }
  std::size_t frame_count() const noexcept { return frames_.size(); }
  std::size_t joint_count() const noexcept { return layout_.size(); }
  std::optional<int> label() const noexcept { return label_; }
  std::optional<int> subject() const noexcept { return subject_; }

  void set_label(std::optional<int> label) { label_ = label; }
  void set_subject(std::optional<int> subject) { subject_ = subject; }

  /// Returns a copy whose coordinates are `scale * p + offset`.
  SkeletonSequence transformed(double scale, Vec3 offset) const {
    std::vector<Frame> out = frames_;
    for (auto& f : out) {
      for (auto& p : f) p = scale * p + offset;
    }
    return SkeletonSequence(layout_, std::move(out), label_, subject_);
  }

  /// Frames in reverse temporal order.
  SkeletonSequence reversed() const {
    std::vector<Frame> out(frames_.rbegin(), frames_.rend());
    return SkeletonSequence(layout_, std::move(out), label_, subject_);
  }

 private:
  SkeletonLayout layout_;
  std::vector<Frame> frames_;
  std::optional<int> label_;
  std::optional<int> subject_;
};

// ---------------------------------------------------------------------------
// Text helpers
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

inline bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

inline std::optional<double> to_double(std::string_view tok) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) return std::nullopt;
  return v;
}

template <class Int>
std::optional<Int> to_int(std::string_view tok) {
  Int v{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) return std::nullopt;
  return v;
}

/// Shortest representation that parses back to the same double.
inline void append_double(std::string& out, double v) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), ptr);
}

inline std::string read_all(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

/// Splits on '\n' and strips a trailing '\r' from each line.
inline std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  // A terminating newline does not start another line.
  if (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

inline std::optional<int> parse_optional_int_field(std::string_view tok, std::string_view key) {
  std::string prefix = std::string(key) + "=";
  if (tok.substr(0, prefix.size()) != prefix) throw FormatError("header: expected '" + prefix + "...', got '" + std::string(tok) + "'");
  auto value = tok.substr(prefix.size());
  if (value == "-") return std::nullopt;
  auto v = to_int<int>(value);
  if (!v) throw FormatError("header: bad " + std::string(key) + " value '" + std::string(value) + "'");
  return v;
}

inline std::size_t parse_count_field(std::string_view tok, std::string_view key) {
  std::string prefix = std::string(key) + "=";
  if (tok.substr(0, prefix.size()) != prefix) throw FormatError("header: expected '" + prefix + "...', got '" + std::string(tok) + "'");
  auto v = to_int<std::size_t>(tok.substr(prefix.size()));
  if (!v) throw FormatError("header: bad " + std::string(key) + " value '" + std::string(tok) + "'");
  return *v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Canonical format
// ---------------------------------------------------------------------------
//
//   JTM1 m=<joints> n=<frames> label=<int|-> subject=<int|->
//   <joint name> ... (m tokens)
//   x1 y1 z1 x2 y2 z2 ...   (n lines of 3m decimals)
//
// Body parts are inferred from joint names (see infer_body_part).

inline constexpr std::string_view kCanonicalMagic = "JTM1";

inline SkeletonSequence parse_canonical(std::string_view text) {
  auto lines = detail::lines_of(text);
  if (lines.empty()) throw FormatError("empty input");

  auto header = detail::split_ws(lines[0]);
  if (header.size() != 5 || header[0] != kCanonicalMagic)
    throw FormatError("header must be 'JTM1 m=<joints> n=<frames> label=<int|-> subject=<int|->'");
  const std::size_t m = detail::parse_count_field(header[1], "m");
  const std::size_t n = detail::parse_count_field(header[2], "n");
  const auto label = detail::parse_optional_int_field(header[3], "label");
  const auto subject = detail::parse_optional_int_field(header[4], "subject");
  if (m == 0) throw FormatError("header: m must be at least 1");
  if (n < 2) throw TooShortError("header declares n=" + std::to_string(n) + "; at least 2 frames are required");

  if (lines.size() < 2) throw FormatError("missing joint-name line");
  auto name_toks = detail::split_ws(lines[1]);
  if (name_toks.size() != m)
    throw FormatError("line 2: expected " + std::to_string(m) + " joint names, found " + std::to_string(name_toks.size()));
  std::vector<std::string> names(name_toks.begin(), name_toks.end());
  SkeletonLayout layout = SkeletonLayout::from_names(std::move(names));

  std::vector<Frame> frames;
  frames.reserve(n);
  std::size_t line_no = 2;
  for (std::size_t li = 2; li < lines.size(); ++li) {
    line_no = li + 1;
    if (frames.size() == n) {
      if (!detail::is_blank(lines[li]))
        throw FormatError("line " + std::to_string(line_no) + ": more frame lines than n=" + std::to_string(n));
      continue;
    }
    auto toks = detail::split_ws(lines[li]);
    if (toks.size() != 3 * m)
      throw ValidationError(line_no, "expected " + std::to_string(3 * m) + " values (m=" + std::to_string(m) +
                                         " joints), found " + std::to_string(toks.size()));
    Frame f(m);
    for (std::size_t k = 0; k < m; ++k) {
      double c[3];
      for (std::size_t a = 0; a < 3; ++a) {
        auto v = detail::to_double(toks[3 * k + a]);
        if (!v) throw ParseError(line_no, "not a number: '" + std::string(toks[3 * k + a]) + "'");
        if (!std::isfinite(*v)) throw ValidationError(line_no, "non-finite coordinate");
        c[a] = *v;
      }
      f[k] = Vec3{c[0], c[1], c[2]};
    }
    frames.push_back(std::move(f));
  }
  if (frames.size() != n)
    throw FormatError("expected " + std::to_string(n) + " frame lines, found " + std::to_string(frames.size()));
  return SkeletonSequence(std::move(layout), std::move(frames), label, subject);
}

inline SkeletonSequence parse_canonical(std::istream& in) { return parse_canonical(detail::read_all(in)); }

inline std::string serialize_canonical(const SkeletonSequence& seq) {
  std::string out;
  out += kCanonicalMagic;
  out += " m=" + std::to_string(seq.joint_count());
  out += " n=" + std::to_string(seq.frame_count());
  out += " label=" + (seq.label() ? std::to_string(*seq.label()) : std::string("-"));
  out += " subject=" + (seq.subject() ? std::to_string(*seq.subject()) : std::string("-"));
  out += '\n';
  for (std::size_t j = 0; j < seq.joint_count(); ++j) {
    if (j) out += ' ';
    out += seq.layout().name(j);
  }
  out += '\n';
  for (const auto& f : seq.frames()) {
    bool first = true;
    for (const auto& p : f) {
      for (double c : {p.x, p.y, p.z}) {
        if (!first) out += ' ';
        first = false;
        detail::append_double(out, c);
      }
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// MSRC-12 stream
// ---------------------------------------------------------------------------

/// One frame per non-blank row, four values (x y z confidence) per layout
/// joint. The confidence column is read and dropped.
inline SkeletonSequence parse_msrc12_stream(std::string_view text, const SkeletonLayout& layout) {
  const std::size_t m = layout.size();
  const std::size_t expected = 4 * m;
  std::vector<Frame> frames;
  auto lines = detail::lines_of(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::size_t line_no = li + 1;
    if (detail::is_blank(lines[li])) continue;
    auto toks = detail::split_ws(lines[li]);
    std::vector<double> vals;
    vals.reserve(toks.size());
    for (auto t : toks) {
      auto v = detail::to_double(t);
      if (!v) throw ParseError(line_no, "not a number: '" + std::string(t) + "'");
      vals.push_back(*v);
    }
    if (vals.size() != expected)
      throw ValidationError(line_no, "expected " + std::to_string(expected) + " values per row, found " +
                                         std::to_string(vals.size()));
    Frame f(m);
    for (std::size_t k = 0; k < m; ++k) {
      f[k] = Vec3{vals[4 * k], vals[4 * k + 1], vals[4 * k + 2]};
      if (!f[k].finite()) throw ValidationError(line_no, "non-finite coordinate");
    }
    frames.push_back(std::move(f));
  }
  return SkeletonSequence(layout, std::move(frames));
}

inline SkeletonSequence parse_msrc12_stream(std::istream& in, const SkeletonLayout& layout) {
  return parse_msrc12_stream(detail::read_all(in), layout);
}

/// True when the text starts with the canonical magic token.
inline bool looks_canonical(std::string_view text) {
  auto first = text.substr(0, text.find_first_of(" \t\r\n"));
  return first == kCanonicalMagic;
}

}  // namespace jtm
