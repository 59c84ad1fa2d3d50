#pragma once

// Colormaps and the hue / saturation / brightness stroke encodings.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jtm/skeleton.hpp"

namespace jtm {

/// RGB with channels in [0, 255], unquantized.
struct Rgb {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;
  friend constexpr bool operator==(Rgb, Rgb) = default;
};

struct Rgb8 {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend constexpr bool operator==(Rgb8, Rgb8) = default;
};

/// h in [0, 360), s and v in [0, 1].
struct Hsv {
  double h = 0.0;
  double s = 0.0;
  double v = 0.0;
};

inline constexpr Rgb kWhite{255.0, 255.0, 255.0};

/// Round half up, clamped to [0, 255].
inline std::uint8_t quantize_channel(double c) {
  double q = std::floor(c + 0.5);
  return static_cast<std::uint8_t>(std::clamp(q, 0.0, 255.0));
}

inline Rgb8 quantize(Rgb c) { return {quantize_channel(c.r), quantize_channel(c.g), quantize_channel(c.b)}; }

// Hexcone model. Achromatic input (max == min) maps to hue 0.
inline Hsv rgb_to_hsv(Rgb c) {
  const double r = c.r / 255.0, g = c.g / 255.0, b = c.b / 255.0;
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double delta = mx - mn;
  Hsv out;
  out.v = mx;
  out.s = mx > 0.0 ? delta / mx : 0.0;
  if (delta > 0.0) {
    double h;
    if (mx == r) {
      h = 60.0 * std::fmod((g - b) / delta, 6.0);
    } else if (mx == g) {
      h = 60.0 * ((b - r) / delta + 2.0);
    } else {
      h = 60.0 * ((r - g) / delta + 4.0);
    }
    if (h < 0.0) h += 360.0;
    if (h >= 360.0) h -= 360.0;
    out.h = h;
  }
  return out;
}

inline Rgb hsv_to_rgb(Hsv c) {
  const double chroma = c.v * c.s;
  const double hp = c.h / 60.0;
  const double x = chroma * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  const double m = c.v - chroma;
  double r = 0.0, g = 0.0, b = 0.0;
  switch (static_cast<int>(std::floor(hp)) % 6) {
    case 0: r = chroma, g = x; break;
    case 1: r = x, g = chroma; break;
    case 2: g = chroma, b = x; break;
    case 3: g = x, b = chroma; break;
    case 4: r = x, b = chroma; break;
    default: r = chroma, b = x; break;
  }
  return {(r + m) * 255.0, (g + m) * 255.0, (b + m) * 255.0};
}

// ---------------------------------------------------------------------------
// Colormap
// ---------------------------------------------------------------------------

struct ColormapAnchor {
  double position = 0.0;
  Rgb color;
};

/// Piecewise-linear RGB interpolation between anchors on [0, 1]. A reversed
/// map evaluates the same anchors at 1 - x.
class Colormap {
 public:
  explicit Colormap(std::vector<ColormapAnchor> anchors, bool reversed = false)
      : anchors_(std::move(anchors)), reversed_(reversed) {
    if (anchors_.size() < 2) throw std::invalid_argument("colormap needs at least two anchors");
    if (anchors_.front().position != 0.0 || anchors_.back().position != 1.0)
      throw std::invalid_argument("colormap anchors must start at 0 and end at 1");
    for (std::size_t i = 1; i < anchors_.size(); ++i) {
      if (!(anchors_[i].position > anchors_[i - 1].position))
        throw std::invalid_argument("colormap anchor positions must be strictly increasing");
    }
  }

  /// Blue (0,0,128) → blue → cyan → yellow → red → dark red (128,0,0).
  static Colormap jet() {
    return Colormap({{0.0, {0, 0, 128}},
                     {0.125, {0, 0, 255}},
                     {0.375, {0, 255, 255}},
                     {0.625, {255, 255, 0}},
                     {0.875, {255, 0, 0}},
                     {1.0, {128, 0, 0}}});
  }

  /// Light gray (211,211,211) → black.
  static Colormap gray_to_black() { return Colormap({{0.0, {211, 211, 211}}, {1.0, {0, 0, 0}}}); }

  Colormap reversed() const { return Colormap(anchors_, !reversed_); }

  Rgb lookup(double x) const {
    x = std::clamp(x, 0.0, 1.0);
    if (reversed_) x = 1.0 - x;
    return lookup_forward(x);
  }

  const std::vector<ColormapAnchor>& anchors() const noexcept { return anchors_; }
  bool is_reversed() const noexcept { return reversed_; }

 private:
  Rgb lookup_forward(double x) const {
    // Segment whose left anchor is the last one at or before x.
    auto it = std::upper_bound(anchors_.begin(), anchors_.end(), x,
                               [](double v, const ColormapAnchor& a) { return v < a.position; });
    if (it == anchors_.end()) return anchors_.back().color;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double t = (x - lo.position) / (hi.position - lo.position);
    return {lo.color.r + t * (hi.color.r - lo.color.r), lo.color.g + t * (hi.color.g - lo.color.g),
            lo.color.b + t * (hi.color.b - lo.color.b)};
  }

  std::vector<ColormapAnchor> anchors_;
  bool reversed_;
};

/// One colormap per body part: jet for Left, reversed jet for Right,
/// gray-to-black for Middle.
struct ColormapBank {
  Colormap left = Colormap::jet();
  Colormap right = Colormap::jet().reversed();
  Colormap middle = Colormap::gray_to_black();

  const Colormap& for_part(BodyPart part) const {
    switch (part) {
      case BodyPart::Left: return left;
      case BodyPart::Right: return right;
      case BodyPart::Middle: return middle;
    }
    return middle;
  }
};

/// Aligned text dump of a bank's anchors.
inline std::string format_colormap_bank(const ColormapBank& bank) {
  std::ostringstream out;
  out << "part    map                 position     r     g     b\n";
  for (BodyPart part : kAllBodyParts) {
    const Colormap& cm = bank.for_part(part);
    std::string name = part == BodyPart::Middle ? "gray-to-black" : "jet";
    if (cm.is_reversed()) name += " (reversed)";
    for (const auto& a : cm.anchors()) {
      out << std::left << std::setw(8) << to_string(part) << std::setw(20) << name << std::right << std::fixed
          << std::setprecision(3) << std::setw(8) << a.position << std::setprecision(0) << std::setw(6) << a.color.r
          << std::setw(6) << a.color.g << std::setw(6) << a.color.b << '\n';
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Encoding levels
// ---------------------------------------------------------------------------

/// The six encodings, from plain white trajectories to hue + body-part
/// colormaps + speed-driven saturation and brightness.
enum class EncodingLevel { Plain, Hue, HueParts, HuePartsSat, HuePartsBright, HuePartsSatBright };

inline constexpr std::array<EncodingLevel, 6> kAllLevels{
    EncodingLevel::Plain,       EncodingLevel::Hue,           EncodingLevel::HueParts,
    EncodingLevel::HuePartsSat, EncodingLevel::HuePartsBright, EncodingLevel::HuePartsSatBright};

/// Short name used on the command line and in file names.
inline std::string_view level_name(EncodingLevel level) {
  switch (level) {
    case EncodingLevel::Plain: return "plain";
    case EncodingLevel::Hue: return "hue";
    case EncodingLevel::HueParts: return "parts";
    case EncodingLevel::HuePartsSat: return "sat";
    case EncodingLevel::HuePartsBright: return "bright";
    case EncodingLevel::HuePartsSatBright: return "satbright";
  }
  return "?";
}

/// Trajectory notation for report tables.
inline std::string_view level_notation(EncodingLevel level) {
  switch (level) {
    case EncodingLevel::Plain: return "t";
    case EncodingLevel::Hue: return "C_t";
    case EncodingLevel::HueParts: return "MC_t";
    case EncodingLevel::HuePartsSat: return "MC_s_t";
    case EncodingLevel::HuePartsBright: return "MC_b_t";
    case EncodingLevel::HuePartsSatBright: return "MC_sb_t";
  }
  return "?";
}

inline std::optional<EncodingLevel> level_from_name(std::string_view name) {
  for (auto l : kAllLevels) {
    if (level_name(l) == name) return l;
  }
  return std::nullopt;
}

inline bool modulates_saturation(EncodingLevel l) {
  return l == EncodingLevel::HuePartsSat || l == EncodingLevel::HuePartsSatBright;
}
inline bool modulates_brightness(EncodingLevel l) {
  return l == EncodingLevel::HuePartsBright || l == EncodingLevel::HuePartsSatBright;
}

struct MagnitudeRange {
  double s_min = 0.0;
  double s_max = 1.0;
  double b_min = 0.0;
  double b_max = 1.0;

  void validate() const {
    auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in01(s_min) || !in01(s_max) || !in01(b_min) || !in01(b_max))
      throw std::invalid_argument("saturation/brightness bounds must lie in [0, 1]");
    if (s_min > s_max) throw std::invalid_argument("s_min must not exceed s_max");
    if (b_min > b_max) throw std::invalid_argument("b_min must not exceed b_max");
  }
};

// ---------------------------------------------------------------------------
// Encodings
// ---------------------------------------------------------------------------

/// Colormap position of trajectory step q (1..n-1) in an n-frame sequence.
inline double temporal_position(std::size_t q, std::size_t n) {
  if (n < 2 || q < 1 || q > n - 1)
    throw std::invalid_argument("temporal_position: step " + std::to_string(q) + " outside [1, " +
                                std::to_string(n < 1 ? 0 : n - 1) + "]");
  return static_cast<double>(q) / static_cast<double>(n - 1);
}

namespace detail {
inline double magnitude_scale(double v, double v_max, double lo, double hi) {
  const double ratio = v_max > 0.0 ? std::clamp(v / v_max, 0.0, 1.0) : 0.0;
  return std::clamp(ratio * (hi - lo) + lo, lo, hi);
}
}  // namespace detail

inline double saturation_scale(double v, double v_max, const MagnitudeRange& range) {
  return detail::magnitude_scale(v, v_max, range.s_min, range.s_max);
}

inline double brightness_scale(double v, double v_max, const MagnitudeRange& range) {
  return detail::magnitude_scale(v, v_max, range.b_min, range.b_max);
}

inline Rgb base_color(BodyPart part, double fraction, EncodingLevel level, const ColormapBank& bank) {
  switch (level) {
    case EncodingLevel::Plain: return kWhite;
    case EncodingLevel::Hue: return bank.left.lookup(fraction);
    default: return bank.for_part(part).lookup(fraction);
  }
}

/// Base color with its HSV saturation and/or value replaced by the speed
/// encodings, depending on the level.
inline Rgb stroke_color(BodyPart part, double fraction, double v, double v_max, EncodingLevel level,
                        const ColormapBank& bank, const MagnitudeRange& range) {
  const Rgb base = base_color(part, fraction, level, bank);
  const bool sat = modulates_saturation(level);
  const bool bright = modulates_brightness(level);
  if (!sat && !bright) return base;
  Hsv hsv = rgb_to_hsv(base);
  if (sat) hsv.s = saturation_scale(v, v_max, range);
  if (bright) hsv.v = brightness_scale(v, v_max, range);
  return hsv_to_rgb(hsv);
}

}  // namespace jtm
