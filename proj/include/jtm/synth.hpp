#pragma once

// Seeded parametric gesture generator used for self-contained tests and the
// desk-scale classification suite.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "jtm/eval.hpp"
#include "jtm/skeleton.hpp"

namespace jtm {

enum class Gesture { CircleCw, CircleCcw, Wave, Kick, Clap };

inline constexpr std::array<Gesture, 5> kAllGestures{Gesture::CircleCw, Gesture::CircleCcw, Gesture::Wave,
                                                     Gesture::Kick, Gesture::Clap};

inline std::string_view gesture_name(Gesture g) {
  switch (g) {
    case Gesture::CircleCw: return "circle-cw";
    case Gesture::CircleCcw: return "circle-ccw";
    case Gesture::Wave: return "wave";
    case Gesture::Kick: return "kick";
    case Gesture::Clap: return "clap";
  }
  return "?";
}

inline std::optional<Gesture> gesture_from_name(std::string_view name) {
  for (auto g : kAllGestures) {
    if (gesture_name(g) == name) return g;
  }
  return std::nullopt;
}

/// Class label written for a gesture: its position in kAllGestures.
inline int gesture_label(Gesture g) { return static_cast<int>(g); }

struct SynthOptions {
  double noise_sigma = 0.005;  // meters, per coordinate per frame
};

/// head, left_hand, right_hand, right_foot.
inline SkeletonLayout synth_layout() {
  return SkeletonLayout({"head", "left_hand", "right_hand", "right_foot"},
                        {BodyPart::Middle, BodyPart::Left, BodyPart::Right, BodyPart::Right});
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// mt19937_64 with hand-rolled uniform and Box-Muller normal draws.
class SynthRng {
 public:
  explicit SynthRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi) { return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1)); }

  double normal() {
    if (spare_) {
      double v = *spare_;
      spare_.reset();
      return v;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace detail

/// One gesture performance. `index` and `seed` select the random per-sample
/// variation (size, placement, phase, tempo, frame count, noise); `subject`
/// sets a per-performer body scale.
inline SkeletonSequence synthesize(Gesture gesture, std::uint64_t seed, std::size_t index, int subject,
                                   const SynthOptions& options = {}) {
  using std::numbers::pi;
  detail::SynthRng rng(detail::splitmix64(seed ^ detail::splitmix64(index * 0x100 + static_cast<std::uint64_t>(gesture))));

  const int n = rng.uniform_int(40, 60);
  const double body_scale = (0.9 + 0.025 * ((subject - 1 + 800) % 8)) * rng.uniform(0.95, 1.05);
  const Vec3 origin{rng.uniform(-0.3, 0.3), 0.0, rng.uniform(2.2, 2.8)};
  const double amp = rng.uniform(0.85, 1.15);
  const double tempo = rng.uniform(0.95, 1.1);
  const double phase = rng.uniform(-0.4, 0.4);

  const Vec3 head{0.0, 1.6, 0.0};
  const Vec3 left_hand{-0.25, 0.85, 0.0};
  const Vec3 right_hand{0.25, 0.85, 0.0};
  const Vec3 right_foot{0.12, 0.05, 0.0};

  std::vector<Frame> frames;
  frames.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double u = static_cast<double>(i) / (n - 1);
    Frame f{head, left_hand, right_hand, right_foot};
    switch (gesture) {
      case Gesture::CircleCw:
      case Gesture::CircleCcw: {
        const double dir = gesture == Gesture::CircleCw ? -1.0 : 1.0;
        const double theta = pi / 2 + phase + dir * 2.0 * pi * tempo * u;
        const double r = 0.2 * amp;
        f[2] = Vec3{0.35 + r * std::cos(theta), 1.25 + r * std::sin(theta), -0.1};
        break;
      }
      case Gesture::Wave: {
        const double a = 2.0 * pi * 2.5 * tempo * u + phase;
        f[2] = Vec3{0.35 + 0.15 * amp * std::sin(a), 1.65 + 0.03 * std::cos(2.0 * a), -0.05};
        break;
      }
      case Gesture::Kick: {
        const double lift = std::sin(pi * std::min(1.0, u * tempo));
        f[3] = Vec3{0.12, 0.05 + 0.45 * amp * lift, -0.5 * amp * lift};
        f[1] = left_hand + Vec3{-0.05 * lift, 0.05 * lift, 0.1 * lift};
        break;
      }
      case Gesture::Clap: {
        const double open = 0.5 * (1.0 + std::cos(2.0 * pi * 3.0 * tempo * u + phase));
        const double x = 0.05 + 0.22 * amp * open;
        f[1] = Vec3{-x, 1.2, -0.25};
        f[2] = Vec3{x, 1.2, -0.25};
        break;
      }
    }
    for (auto& p : f) {
      p = body_scale * p + origin;
      if (options.noise_sigma > 0.0) {
        p.x += options.noise_sigma * rng.normal();
        p.y += options.noise_sigma * rng.normal();
        p.z += options.noise_sigma * rng.normal();
      }
    }
    frames.push_back(std::move(f));
  }
  return SkeletonSequence(synth_layout(), std::move(frames), gesture_label(gesture), subject);
}

/// `count` performances with ids `<gesture>_<index>` and subjects cycling
/// through 1..8.
inline std::vector<Sample> synthesize_batch(Gesture gesture, std::size_t count, std::uint64_t seed,
                                            const SynthOptions& options = {}) {
  std::vector<Sample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::string idx = std::to_string(i);
    if (idx.size() < 4) idx.insert(0, 4 - idx.size(), '0');
    const int subject = static_cast<int>(i % 8) + 1;
    out.push_back({std::string(gesture_name(gesture)) + "_" + idx, synthesize(gesture, seed, i, subject, options)});
  }
  return out;
}

/// Every gesture, `per_class` samples each.
inline std::vector<Sample> synthesize_suite(std::size_t per_class, std::uint64_t seed,
                                            const SynthOptions& options = {}) {
  std::vector<Sample> out;
  for (Gesture g : kAllGestures) {
    auto batch = synthesize_batch(g, per_class, seed, options);
    for (auto& s : batch) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace jtm
