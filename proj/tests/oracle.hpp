#pragma once

// Brute-force reference renderer for small canvases. Shares no code with the
// library: its own colormap tables, an alternate HSV formulation, a
// closed-form line membership test evaluated for every canvas pixel, and
// plain arrays for geometry. Only the library's input types are reused.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "jtm/skeleton.hpp"

namespace oracle {

enum class Level { Plain, Hue, HueParts, HuePartsSat, HuePartsBright, HuePartsSatBright };
enum class Part { Left, Right, Middle };
enum class View { Front, Top, Side };

struct Color {
  double r, g, b;
};

inline Color jet(double x) {
  static const double pos[6] = {0.0, 0.125, 0.375, 0.625, 0.875, 1.0};
  static const double rgb[6][3] = {{0, 0, 128}, {0, 0, 255}, {0, 255, 255}, {255, 255, 0}, {255, 0, 0}, {128, 0, 0}};
  if (x <= 0.0) return {rgb[0][0], rgb[0][1], rgb[0][2]};
  if (x >= 1.0) return {rgb[5][0], rgb[5][1], rgb[5][2]};
  int seg = 0;
  while (!(x >= pos[seg] && x < pos[seg + 1])) ++seg;
  const double t = (x - pos[seg]) / (pos[seg + 1] - pos[seg]);
  Color c;
  c.r = rgb[seg][0] + t * (rgb[seg + 1][0] - rgb[seg][0]);
  c.g = rgb[seg][1] + t * (rgb[seg + 1][1] - rgb[seg][1]);
  c.b = rgb[seg][2] + t * (rgb[seg + 1][2] - rgb[seg][2]);
  return c;
}

inline Color gray(double x) {
  x = std::clamp(x, 0.0, 1.0);
  const double v = 211.0 + x * (0.0 - 211.0);
  return {v, v, v};
}

// RGB (0..255) -> h in degrees, s, v in [0,1].
inline void to_hsv(Color c, double& h, double& s, double& v) {
  const double r = c.r / 255.0, g = c.g / 255.0, b = c.b / 255.0;
  const double hi = std::max(r, std::max(g, b));
  const double lo = std::min(r, std::min(g, b));
  const double d = hi - lo;
  v = hi;
  s = hi == 0.0 ? 0.0 : d / hi;
  if (d == 0.0) {
    h = 0.0;
    return;
  }
  double sector;
  if (hi == r) {
    sector = (g - b) / d;
    if (sector < 0.0) sector += 6.0;
  } else if (hi == g) {
    sector = 2.0 + (b - r) / d;
  } else {
    sector = 4.0 + (r - g) / d;
  }
  h = 60.0 * sector;
  if (h >= 360.0) h -= 360.0;
}

// f(n) = V - V S max(0, min(k, 4 - k, 1)), k = (n + H/60) mod 6.
inline Color from_hsv(double h, double s, double v) {
  auto f = [&](double n) {
    const double k = std::fmod(n + h / 60.0, 6.0);
    return v - v * s * std::max(0.0, std::min(std::min(k, 4.0 - k), 1.0));
  };
  return {f(5) * 255.0, f(3) * 255.0, f(1) * 255.0};
}

inline std::uint8_t round_half_up(double c) {
  const double q = std::floor(c + 0.5);
  return static_cast<std::uint8_t>(q < 0 ? 0 : q > 255 ? 255 : q);
}

struct Ranges {
  double s_min = 0, s_max = 1, b_min = 0, b_max = 1;
};

inline Color stroke(Part part, double frac, double speed, double vmax, Level level, const Ranges& rg) {
  Color base;
  if (level == Level::Plain) {
    base = {255, 255, 255};
  } else if (level == Level::Hue || part == Part::Left) {
    base = jet(frac);
  } else if (part == Part::Right) {
    base = jet(1.0 - frac);
  } else {
    base = gray(frac);
  }
  const bool sat = level == Level::HuePartsSat || level == Level::HuePartsSatBright;
  const bool bright = level == Level::HuePartsBright || level == Level::HuePartsSatBright;
  if (!sat && !bright) return base;
  double h, s, v;
  to_hsv(base, h, s, v);
  const double ratio = vmax > 0 ? std::min(1.0, speed / vmax) : 0.0;
  if (sat) s = std::clamp(ratio * (rg.s_max - rg.s_min) + rg.s_min, rg.s_min, rg.s_max);
  if (bright) v = std::clamp(ratio * (rg.b_max - rg.b_min) + rg.b_min, rg.b_min, rg.b_max);
  return from_hsv(h, s, v);
}

/// Is pixel (px, py) on the integer line a -> b? Major axis visits every
/// integer; minor offset at step t is floor((2 t minor + N) / (2 N)).
inline bool on_line(long px, long py, long ax, long ay, long bx, long by) {
  const long dx = bx - ax, dy = by - ay;
  const long adx = std::labs(dx), ady = std::labs(dy);
  const long sx = dx < 0 ? -1 : 1, sy = dy < 0 ? -1 : 1;
  const long n = std::max(adx, ady);
  if (n == 0) return px == ax && py == ay;
  if (adx >= ady) {
    const long t = (px - ax) * sx;
    if (t < 0 || t > n) return false;
    return py == ay + sy * ((2 * t * ady + n) / (2 * n));
  }
  const long t = (py - ay) * sy;
  if (t < 0 || t > n) return false;
  return px == ax + sx * ((2 * t * adx + n) / (2 * n));
}

struct Canvas {
  int w = 32, h = 32;
  double margin = 0.05;
};

/// Renders every step in order, overwriting, on a black background.
/// `parts[k]` gives joint k's body part.
inline std::vector<std::uint8_t> render(const std::vector<std::vector<jtm::Vec3>>& frames,
                                        const std::vector<Part>& parts, View view, Level level, const Canvas& cv,
                                        const Ranges& rg = {}, std::size_t steps = static_cast<std::size_t>(-1)) {
  const std::size_t n = frames.size(), m = parts.size();
  auto proj = [&](const jtm::Vec3& p, double& u, double& w) {
    if (view == View::Front) {
      u = p.x, w = p.y;
    } else if (view == View::Top) {
      u = p.x, w = p.z;
    } else {
      u = p.z, w = p.y;
    }
  };
  double umin = 1e300, umax = -1e300, wmin = 1e300, wmax = -1e300;
  for (const auto& f : frames) {
    for (const auto& p : f) {
      double u, w;
      proj(p, u, w);
      umin = std::min(umin, u), umax = std::max(umax, u);
      wmin = std::min(wmin, w), wmax = std::max(wmax, w);
    }
  }
  const double availx = cv.w * (1.0 - 2.0 * cv.margin), availy = cv.h * (1.0 - 2.0 * cv.margin);
  double scale = 0.0;
  if (umax > umin && wmax > wmin) {
    scale = std::min(availx / (umax - umin), availy / (wmax - wmin));
  } else if (umax > umin) {
    scale = availx / (umax - umin);
  } else if (wmax > wmin) {
    scale = availy / (wmax - wmin);
  }
  const double cu = (umin + umax) / 2.0, cw = (wmin + wmax) / 2.0;
  auto to_px = [&](const jtm::Vec3& p, long& x, long& y) {
    double u, w;
    proj(p, u, w);
    x = static_cast<long>(std::floor(cv.w / 2.0 + scale * (u - cu) + 0.5));
    y = static_cast<long>(std::floor(cv.h / 2.0 - scale * (w - cw) + 0.5));
  };

  double vmax = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      const auto a = frames[i][k], b = frames[i + 1][k];
      const double d = std::sqrt((b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y) + (b.z - a.z) * (b.z - a.z));
      vmax = std::max(vmax, d);
    }
  }

  std::vector<std::uint8_t> img(static_cast<std::size_t>(cv.w) * cv.h * 3, 0);
  const std::size_t last = std::min(steps, n - 1);
  for (std::size_t q = 1; q <= last; ++q) {
    const double frac = static_cast<double>(q) / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < m; ++k) {
      const auto a = frames[q - 1][k], b = frames[q][k];
      const double speed =
          std::sqrt((b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y) + (b.z - a.z) * (b.z - a.z));
      const Color c = stroke(parts[k], frac, speed, vmax, level, rg);
      long ax, ay, bx, by;
      to_px(a, ax, ay);
      to_px(b, bx, by);
      for (long y = 0; y < cv.h; ++y) {
        for (long x = 0; x < cv.w; ++x) {
          if (!on_line(x, y, ax, ay, bx, by)) continue;
          const std::size_t o = (static_cast<std::size_t>(y) * cv.w + x) * 3;
          img[o] = round_half_up(c.r);
          img[o + 1] = round_half_up(c.g);
          img[o + 2] = round_half_up(c.b);
        }
      }
    }
  }
  return img;
}

}  // namespace oracle
