#pragma once

// Plane projection, Bresenham strokes and JTM accumulation.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "jtm/color.hpp"
#include "jtm/skeleton.hpp"
#include "jtm/trajectory.hpp"

namespace jtm {

/// Front = (x, y), Top = (x, z), Side = (z, y).
enum class Plane { Front, Top, Side };

inline constexpr std::array<Plane, 3> kAllPlanes{Plane::Front, Plane::Top, Plane::Side};

inline std::string_view plane_name(Plane p) {
  switch (p) {
    case Plane::Front: return "front";
    case Plane::Top: return "top";
    case Plane::Side: return "side";
  }
  return "?";
}

inline std::optional<Plane> plane_from_name(std::string_view name) {
  for (auto p : kAllPlanes) {
    if (plane_name(p) == name) return p;
  }
  return std::nullopt;
}

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 project(Vec3 p, Plane plane) {
  switch (plane) {
    case Plane::Front: return {p.x, p.y};
    case Plane::Top: return {p.x, p.z};
    case Plane::Side: return {p.z, p.y};
  }
  return {};
}

struct CanvasConfig {
  int width = 256;
  int height = 256;
  double margin_fraction = 0.05;
  Rgb8 background{0, 0, 0};

  void validate() const {
    if (width < 16 || height < 16) throw std::invalid_argument("canvas must be at least 16x16");
    if (!(margin_fraction >= 0.0 && margin_fraction < 0.5))
      throw std::invalid_argument("margin fraction must lie in [0, 0.5)");
  }
};

/// Uniform-scale world-to-pixel map with the y axis flipped (world up is
/// image up).
struct AffineMap2D {
  double scale = 0.0;
  Point2 world_center;
  Point2 pixel_center;

  Point2 apply(Point2 p) const {
    return {pixel_center.x + scale * (p.x - world_center.x), pixel_center.y - scale * (p.y - world_center.y)};
  }
};

/// Fits the projected bounding box of all frames and joints into the canvas
/// inset by the margin, centered, aspect preserved. A box with no extent
/// maps everything to the canvas center.
inline AffineMap2D fit_transform(const SkeletonSequence& seq, Plane plane, const CanvasConfig& canvas) {
  double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
  double min_y = min_x, max_y = -min_x;
  for (const auto& f : seq.frames()) {
    for (const auto& p : f) {
      Point2 q = project(p, plane);
      min_x = std::min(min_x, q.x);
      max_x = std::max(max_x, q.x);
      min_y = std::min(min_y, q.y);
      max_y = std::max(max_y, q.y);
    }
  }
  AffineMap2D map;
  map.world_center = {(min_x + max_x) / 2.0, (min_y + max_y) / 2.0};
  map.pixel_center = {canvas.width / 2.0, canvas.height / 2.0};
  const double avail_x = canvas.width * (1.0 - 2.0 * canvas.margin_fraction);
  const double avail_y = canvas.height * (1.0 - 2.0 * canvas.margin_fraction);
  const double ext_x = max_x - min_x;
  const double ext_y = max_y - min_y;
  double scale = std::numeric_limits<double>::infinity();
  if (ext_x > 0.0) scale = std::min(scale, avail_x / ext_x);
  if (ext_y > 0.0) scale = std::min(scale, avail_y / ext_y);
  map.scale = std::isfinite(scale) ? scale : 0.0;
  return map;
}

// ---------------------------------------------------------------------------
// Image
// ---------------------------------------------------------------------------

struct ImageMeta {
  std::optional<int> label;
  std::optional<int> subject;
  EncodingLevel level = EncodingLevel::HuePartsSatBright;
};

/// Row-major 8-bit RGB raster.
class JtmImage {
 public:
  JtmImage(Plane plane, int width, int height, Rgb8 fill = {}, ImageMeta meta = {})
      : plane_(plane), width_(width), height_(height), meta_(meta) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("image dimensions must be positive");
    pixels_.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
    for (std::size_t i = 0; i < pixels_.size(); i += 3) {
      pixels_[i] = fill.r;
      pixels_[i + 1] = fill.g;
      pixels_[i + 2] = fill.b;
    }
  }

  Plane plane() const noexcept { return plane_; }
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  const ImageMeta& meta() const noexcept { return meta_; }
  ImageMeta& meta() noexcept { return meta_; }
  const std::vector<std::uint8_t>& pixels() const noexcept { return pixels_; }

  bool contains(std::int64_t x, std::int64_t y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  Rgb8 at(int x, int y) const {
    const std::size_t i = offset(x, y);
    return {pixels_[i], pixels_[i + 1], pixels_[i + 2]};
  }

  void set(int x, int y, Rgb8 c) {
    const std::size_t i = offset(x, y);
    pixels_[i] = c.r;
    pixels_[i + 1] = c.g;
    pixels_[i + 2] = c.b;
  }

 private:
  std::size_t offset(int x, int y) const {
    if (!contains(x, y)) throw std::out_of_range("pixel outside image");
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) * 3;
  }

  Plane plane_;
  int width_;
  int height_;
  ImageMeta meta_;
  std::vector<std::uint8_t> pixels_;
};

struct PixelPoint {
  std::int64_t x = 0;
  std::int64_t y = 0;
  friend constexpr bool operator==(PixelPoint, PixelPoint) = default;
};

/// Round half up on each coordinate.
inline PixelPoint to_pixel(Point2 p) {
  return {static_cast<std::int64_t>(std::floor(p.x + 0.5)), static_cast<std::int64_t>(std::floor(p.y + 0.5))};
}

/// Integer Bresenham line, endpoints inclusive. Along the major axis every
/// step is visited; the minor offset at step t is round-half-up of
/// t * minor / major. Pixels outside the image are skipped.
inline void draw_stroke(JtmImage& img, PixelPoint p0, PixelPoint p1, Rgb8 color) {
  const std::int64_t dx = p1.x - p0.x, dy = p1.y - p0.y;
  const std::int64_t adx = dx < 0 ? -dx : dx, ady = dy < 0 ? -dy : dy;
  const std::int64_t sx = dx < 0 ? -1 : 1, sy = dy < 0 ? -1 : 1;
  const bool x_major = adx >= ady;
  const std::int64_t major = x_major ? adx : ady;
  const std::int64_t minor = x_major ? ady : adx;

  std::int64_t x = p0.x, y = p0.y;
  std::int64_t err = major;  // N + 2 t minor - 2 N offset
  for (std::int64_t t = 0;; ++t) {
    if (img.contains(x, y)) img.set(static_cast<int>(x), static_cast<int>(y), color);
    if (t == major) break;
    err += 2 * minor;
    if (x_major) {
      x += sx;
      if (err >= 2 * major) {
        err -= 2 * major;
        y += sy;
      }
    } else {
      y += sy;
      if (err >= 2 * major) {
        err -= 2 * major;
        x += sx;
      }
    }
  }
}

inline void draw_stroke(JtmImage& img, Point2 p0, Point2 p1, Rgb8 color) {
  draw_stroke(img, to_pixel(p0), to_pixel(p1), color);
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

struct EncodingConfig {
  EncodingLevel level = EncodingLevel::HuePartsSatBright;
  ColormapBank bank;
  MagnitudeRange range;
  CanvasConfig canvas;
  /// Overrides the per-sequence speed maximum (e.g. a dataset-wide value).
  std::optional<double> speed_reference;

  void validate() const {
    range.validate();
    canvas.validate();
    if (speed_reference && !(*speed_reference >= 0.0 && std::isfinite(*speed_reference)))
      throw std::invalid_argument("speed reference must be finite and non-negative");
  }
};

/// One drawn segment, as seen by the accumulator.
struct StrokeRecord {
  std::size_t step = 0;   // 1-based trajectory step
  std::size_t joint = 0;
  BodyPart part = BodyPart::Middle;
  double fraction = 0.0;  // temporal colormap position
  double speed = 0.0;
  Rgb8 color;
  PixelPoint from;
  PixelPoint to;
};

/// Builds one plane's JTM step by step: image_i = image_{i-1} + strokes of
/// step i, later strokes overwriting earlier pixels. The projection and the
/// speed normalizer come from the whole sequence.
///
/// Holds a reference to `seq`; the sequence must outlive the accumulator.
class JtmAccumulator {
 public:
  JtmAccumulator(const SkeletonSequence& seq, Plane plane, const EncodingConfig& config, bool record_strokes = false)
      : seq_(&seq),
        config_(config),
        trajectories_(compute_trajectories(seq)),
        map_(fit_transform(seq, plane, config.canvas)),
        image_(plane, config.canvas.width, config.canvas.height, config.canvas.background,
               ImageMeta{seq.label(), seq.subject(), config.level}),
        record_(record_strokes) {
    config_.validate();
    v_max_ = config_.speed_reference.value_or(trajectories_.v_max);
  }

  std::size_t step_count() const noexcept { return trajectories_.steps.size(); }
  std::size_t steps_drawn() const noexcept { return drawn_; }
  bool done() const noexcept { return drawn_ == step_count(); }
  double v_max() const noexcept { return v_max_; }
  const AffineMap2D& transform() const noexcept { return map_; }

  /// Draws the next step. Throws std::logic_error when all steps are drawn.
  void add_step() {
    if (done()) throw std::logic_error("all trajectory steps already drawn");
    const auto& step = trajectories_.steps[drawn_];
    const std::size_t n = seq_->frame_count();
    const double fraction = temporal_position(step.step_index, n);
    const Plane plane = image_.plane();
    const auto& next = seq_->frame(step.step_index);
    for (std::size_t k = 0; k < step.deltas.size(); ++k) {
      const BodyPart part = seq_->layout().part_of(k);
      const Rgb8 color = quantize(stroke_color(part, fraction, step.speeds[k], v_max_, config_.level, config_.bank,
                                               config_.range));
      const PixelPoint from = to_pixel(map_.apply(project(step.start_points[k], plane)));
      const PixelPoint to = to_pixel(map_.apply(project(next[k], plane)));
      draw_stroke(image_, from, to, color);
      if (record_) strokes_.push_back({step.step_index, k, part, fraction, step.speeds[k], color, from, to});
    }
    ++drawn_;
  }

  void add_steps(std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) add_step();
  }

  void finish() {
    while (!done()) add_step();
  }

  const JtmImage& image() const noexcept { return image_; }
  JtmImage take_image() && { return std::move(image_); }
  const std::vector<StrokeRecord>& strokes() const noexcept { return strokes_; }

 private:
  const SkeletonSequence* seq_;
  EncodingConfig config_;
  TrajectorySet trajectories_;
  AffineMap2D map_;
  JtmImage image_;
  bool record_;
  double v_max_ = 0.0;
  std::size_t drawn_ = 0;
  std::vector<StrokeRecord> strokes_;
};

inline JtmImage render_jtm(const SkeletonSequence& seq, Plane plane, const EncodingConfig& config,
                           std::vector<StrokeRecord>* stroke_log = nullptr) {
  JtmAccumulator acc(seq, plane, config, stroke_log != nullptr);
  acc.finish();
  if (stroke_log) *stroke_log = acc.strokes();
  return std::move(acc).take_image();
}

inline JtmImage render_jtm(const SkeletonSequence& seq, Plane plane, EncodingLevel level, const ColormapBank& bank,
                           const MagnitudeRange& range, const CanvasConfig& canvas) {
  EncodingConfig config;
  config.level = level;
  config.bank = bank;
  config.range = range;
  config.canvas = canvas;
  return render_jtm(seq, plane, config);
}

/// Steps 1..count only, drawn onto a fresh canvas.
inline JtmImage render_prefix(const SkeletonSequence& seq, Plane plane, const EncodingConfig& config,
                              std::size_t count) {
  JtmAccumulator acc(seq, plane, config);
  acc.add_steps(count);
  return std::move(acc).take_image();
}

/// Front, top and side JTMs, each fitted to its own bounding box.
inline std::array<JtmImage, 3> render_all_planes(const SkeletonSequence& seq, const EncodingConfig& config) {
  return {render_jtm(seq, Plane::Front, config), render_jtm(seq, Plane::Top, config),
          render_jtm(seq, Plane::Side, config)};
}

}  // namespace jtm
