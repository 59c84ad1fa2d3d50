// Acceptance suite: one PASS/FAIL line per criterion, each timed against its
// runtime budget.

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <random>

#include "jtm/eval.hpp"
#include "jtm/raster.hpp"
#include "jtm/synth.hpp"
#include "jtm/trajectory.hpp"
#include "oracle.hpp"

namespace {

using Clock = std::chrono::steady_clock;
using jtm::EncodingLevel;
using jtm::Plane;

struct Criterion {
  int number;
  const char* title;
  double budget_ms;
  double elapsed_ms = 0.0;
};

std::map<std::string, Criterion>& criteria() {
  static std::map<std::string, Criterion> c{
      {"EquationUnits", {1, "encoding equation unit suite", 1000}},
      {"ColormapDuality", {2, "colormap duality and jet hue ordering", 1000}},
      {"OracleEquivalence", {3, "rasterizer matches brute-force oracle", 5000}},
      {"DeterminismAndInvariance", {4, "determinism, translation and scale invariance", 30000}},
      {"PrefixIncrementality", {5, "prefix-incremental rendering", 30000}},
      {"SyntheticAblation", {6, "synthetic 5-class ablation", 120000}},
      {"ProtocolFidelity", {7, "subject split protocols", 1000}},
      {"Throughput", {8, "encoder throughput, 100x20 sequence, 3 planes", 50}},
  };
  return c;
}

/// Times the enclosing test body and fails it when over budget.
class Budget {
 public:
  explicit Budget(const std::string& name) : name_(name), start_(Clock::now()) {}
  ~Budget() { finish(); }
  void finish() {
    if (done_) return;
    done_ = true;
    auto& c = criteria().at(name_);
    c.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    EXPECT_LT(c.elapsed_ms, c.budget_ms) << "over runtime budget";
  }

 private:
  std::string name_;
  Clock::time_point start_;
  bool done_ = false;
};

class CriterionPrinter : public ::testing::EmptyTestEventListener {
  void OnTestPartResult(const ::testing::TestPartResult& r) override {
    if (r.failed()) std::printf("    %s:%d: %s\n", r.file_name() ? r.file_name() : "?", r.line_number(), r.message());
  }
  void OnTestEnd(const ::testing::TestInfo& info) override {
    const auto it = criteria().find(info.name());
    const bool ok = info.result()->Passed();
    if (it == criteria().end()) {
      std::printf("%s  %s\n", ok ? "PASS" : "FAIL", info.name());
    } else {
      const auto& c = it->second;
      std::printf("%s  %d. %-48s %10.1f ms (budget %.0f ms)\n", ok ? "PASS" : "FAIL", c.number, c.title,
                  c.elapsed_ms, c.budget_ms);
    }
    std::fflush(stdout);
  }
  void OnTestProgramEnd(const ::testing::UnitTest& u) override {
    std::printf("%d/%d criteria passed\n", u.successful_test_count(), u.total_test_count());
  }
};

jtm::SkeletonSequence make_seq(std::vector<std::string> names, std::vector<jtm::Frame> frames) {
  return jtm::SkeletonSequence(jtm::SkeletonLayout::from_names(std::move(names)), std::move(frames));
}

/// Joint names cycling through the three body parts.
std::vector<std::string> mixed_names(std::size_t m) {
  static const char* prefix[3] = {"left_j", "right_j", "mid_j"};
  std::vector<std::string> names;
  for (std::size_t k = 0; k < m; ++k) names.push_back(prefix[k % 3] + std::to_string(k));
  return names;
}

/// Coordinates on a 1/1024 grid: translation by integers and power-of-two
/// scaling are exact.
jtm::SkeletonSequence random_dyadic_seq(std::mt19937_64& rng, std::size_t max_m, std::size_t max_n) {
  std::uniform_int_distribution<std::size_t> dm(1, max_m), dn(2, max_n);
  std::uniform_int_distribution<int> dc(-2048, 2048);
  const std::size_t m = dm(rng), n = dn(rng);
  std::vector<jtm::Frame> frames(n, jtm::Frame(m));
  for (auto& f : frames) {
    for (auto& p : f) p = {dc(rng) / 1024.0, dc(rng) / 1024.0, dc(rng) / 1024.0};
  }
  return make_seq(mixed_names(m), std::move(frames));
}

TEST(Acceptance, EquationUnits) {
  Budget budget("EquationUnits");
  const std::vector<jtm::MagnitudeRange> ranges{{0, 1, 0, 1}, {0.2, 0.9, 0.35, 0.8}, {0.5, 0.5, 1, 1}};
  for (const auto& r : ranges) {
    for (double v_max : {1.0, 0.037, 12.5}) {
      EXPECT_NEAR(jtm::saturation_scale(0.0, v_max, r), r.s_min, 1e-12);
      EXPECT_NEAR(jtm::saturation_scale(v_max, v_max, r), r.s_max, 1e-12);
      EXPECT_NEAR(jtm::saturation_scale(v_max / 2, v_max, r), (r.s_min + r.s_max) / 2, 1e-12);
      EXPECT_NEAR(jtm::brightness_scale(0.0, v_max, r), r.b_min, 1e-12);
      EXPECT_NEAR(jtm::brightness_scale(v_max, v_max, r), r.b_max, 1e-12);
      EXPECT_NEAR(jtm::brightness_scale(v_max / 2, v_max, r), (r.b_min + r.b_max) / 2, 1e-12);
    }
    EXPECT_NEAR(jtm::saturation_scale(0.0, 0.0, r), r.s_min, 1e-12);
  }

  // Deltas and speeds on hand-built frames: 3-4-0 and 1-2-2 triangles.
  const auto seq = make_seq({"a", "b"}, {{{0, 0, 0}, {1, 1, 1}}, {{3, 4, 0}, {2, 3, 3}}, {{3, 4, 0}, {0, 3, 3}}});
  const auto t = jtm::compute_trajectories(seq);
  ASSERT_EQ(t.steps.size(), 2u);
  EXPECT_EQ(t.steps[0].deltas[0], (jtm::Vec3{3, 4, 0}));
  EXPECT_EQ(t.steps[0].speeds[0], 5.0);
  EXPECT_EQ(t.steps[0].deltas[1], (jtm::Vec3{1, 2, 2}));
  EXPECT_EQ(t.steps[0].speeds[1], 3.0);
  EXPECT_EQ(t.steps[1].deltas[0], (jtm::Vec3{0, 0, 0}));
  EXPECT_EQ(t.steps[1].speeds[0], 0.0);
  EXPECT_EQ(t.steps[1].deltas[1], (jtm::Vec3{-2, 0, 0}));
  EXPECT_EQ(t.steps[1].speeds[1], 2.0);
  EXPECT_EQ(t.v_max, 5.0);
  EXPECT_EQ(jtm::temporal_position(1, 3), 0.5);
  EXPECT_EQ(jtm::temporal_position(2, 3), 1.0);
}

TEST(Acceptance, ColormapDuality) {
  Budget budget("ColormapDuality");
  const auto jet = jtm::Colormap::jet();
  const auto rev = jet.reversed();
  for (int i = 0; i < 256; ++i) {
    const double x = i / 255.0;
    const auto a = rev.lookup(x), b = jet.lookup(1.0 - x);
    EXPECT_EQ(a.r, b.r);
    EXPECT_EQ(a.g, b.g);
    EXPECT_EQ(a.b, b.b);
  }
  // blue, cyan, yellow, orange, red
  const std::vector<std::pair<double, double>> expected{{0.125, 240}, {0.375, 180}, {0.625, 60}, {0.75, 30}, {0.875, 0}};
  double previous = 361.0;
  for (const auto& [x, hue] : expected) {
    const double h = jtm::rgb_to_hsv(jet.lookup(x)).h;
    EXPECT_NEAR(h, hue, 1e-9) << "x=" << x;
    EXPECT_LT(h, previous);
    previous = h;
  }
}

struct HandBuilt {
  std::vector<std::string> names;
  std::vector<oracle::Part> parts;
  std::vector<jtm::Frame> frames;
  int w = 32, h = 32;
};

std::vector<HandBuilt> hand_built_cases() {
  using P = oracle::Part;
  return {
      {{"left_hand"}, {P::Left}, {{{0, 0, 0}}, {{1, 1, 1}}}},
      {{"left_hand", "right_hand"},
       {P::Left, P::Right},
       {{{0, 0, 0}, {1, 0.5, 0.25}}, {{0.5, 0.25, 0.5}, {0.75, 1, 0}}, {{1, 1, 1}, {0.25, 0.75, 0.5}}}},
      {{"head", "left_elbow", "right_knee"},
       {P::Middle, P::Left, P::Right},
       {{{0, 1.7, 2}, {-0.3, 1.1, 2.1}, {0.2, 0.5, 2}},
        {{0.05, 1.72, 2}, {-0.4, 1.3, 2.0}, {0.25, 0.6, 1.8}},
        {{0.1, 1.7, 2.05}, {-0.45, 1.5, 1.9}, {0.3, 0.7, 1.7}},
        {{0.1, 1.68, 2.1}, {-0.4, 1.6, 1.85}, {0.2, 0.5, 1.9}}}},
      {{"spine", "right_hand"},
       {P::Middle, P::Right},
       {{{0, 0, 0}, {2, 0, 0}}, {{0, 0, 0}, {-2, 0.1, 0.3}}, {{0, 0, 0}, {2, 0.2, -0.3}}},
       24,
       20},
      {{"left_foot", "torso", "right_foot"},
       {P::Left, P::Middle, P::Right},
       {{{0, 0, 0}, {0, 1, 0}, {0.3, 0, 0}},
        {{0, 0.4, -0.3}, {0, 1, 0}, {0.3, 0, 0}},
        {{0, 0.1, -0.1}, {0, 1.02, 0}, {0.3, 0.05, 0.2}},
        {{0, 0, 0}, {0, 1, 0}, {0.3, 0, 0}}},
       31,
       32},
      {{"head", "neck"}, {P::Middle, P::Middle}, {{{0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}}, {{0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}}}},
  };
}

TEST(Acceptance, OracleEquivalence) {
  Budget budget("OracleEquivalence");
  const std::vector<oracle::Ranges> ranges{{0, 1, 0, 1}, {0.2, 0.9, 0.35, 0.8}};
  std::size_t compared = 0;
  for (const auto& c : hand_built_cases()) {
    const auto seq = make_seq(c.names, c.frames);
    for (std::size_t k = 0; k < c.names.size(); ++k)
      ASSERT_EQ(static_cast<int>(seq.layout().part_of(k)), static_cast<int>(c.parts[k]));
    for (const auto& rg : ranges) {
      for (auto level : jtm::kAllLevels) {
        for (Plane p : jtm::kAllPlanes) {
          jtm::EncodingConfig cfg;
          cfg.level = level;
          cfg.canvas = {c.w, c.h, 0.05, {}};
          cfg.range = {rg.s_min, rg.s_max, rg.b_min, rg.b_max};
          const auto got = jtm::render_jtm(seq, p, cfg).pixels();
          const auto want = oracle::render(c.frames, c.parts, static_cast<oracle::View>(p),
                                           static_cast<oracle::Level>(level), {c.w, c.h, 0.05}, rg);
          EXPECT_EQ(got, want) << c.names.size() << " joints, " << jtm::level_name(level) << ", "
                               << jtm::plane_name(p);
          ++compared;
        }
      }
    }
  }
  EXPECT_EQ(compared, 6u * 2 * 6 * 3);
}

TEST(Acceptance, DeterminismAndInvariance) {
  Budget budget("DeterminismAndInvariance");
  std::mt19937_64 rng(2718);
  std::uniform_int_distribution<int> offset(-50, 50), power(-4, 4);
  for (int trial = 0; trial < 100; ++trial) {
    const auto seq = random_dyadic_seq(rng, 20, 30);
    const auto moved = seq.transformed(1.0, {double(offset(rng)), double(offset(rng)), double(offset(rng))});
    const auto scaled = seq.transformed(std::ldexp(1.0, power(rng)), {});
    jtm::EncodingConfig cfg;
    cfg.level = jtm::kAllLevels[trial % 6];
    cfg.canvas = {128, 128, 0.05, {}};
    for (Plane p : jtm::kAllPlanes) {
      const auto a = jtm::render_jtm(seq, p, cfg).pixels();
      ASSERT_EQ(a, jtm::render_jtm(seq, p, cfg).pixels()) << "trial " << trial;
      ASSERT_EQ(a, jtm::render_jtm(moved, p, cfg).pixels()) << "translated, trial " << trial;
      ASSERT_EQ(a, jtm::render_jtm(scaled, p, cfg).pixels()) << "scaled, trial " << trial;
    }
  }
}

TEST(Acceptance, PrefixIncrementality) {
  Budget budget("PrefixIncrementality");
  std::mt19937_64 rng(3141);
  for (int trial = 0; trial < 50; ++trial) {
    const auto seq = random_dyadic_seq(rng, 8, 25);
    std::uniform_int_distribution<std::size_t> dj(1, seq.frame_count() - 1);
    const std::size_t j = dj(rng);
    const Plane plane = jtm::kAllPlanes[trial % 3];
    jtm::EncodingConfig cfg;
    cfg.level = jtm::kAllLevels[trial % 6];
    cfg.canvas = {96, 96, 0.05, {}};
    jtm::JtmAccumulator acc(seq, plane, cfg);
    for (std::size_t i = 0; i < j; ++i) acc.add_step();
    ASSERT_EQ(acc.image().pixels(), jtm::render_prefix(seq, plane, cfg, j).pixels()) << "trial " << trial;
    acc.finish();
    ASSERT_EQ(acc.image().pixels(), jtm::render_jtm(seq, plane, cfg).pixels()) << "trial " << trial;
  }
}

// Regression values produced by this pipeline on the seeded suite.
constexpr std::uint64_t kSuiteSeed = 2024;
constexpr std::size_t kPerClass = 40;
constexpr std::size_t kFrozenTotal = 100;
constexpr std::size_t kFrozenPlainCorrect = 82;
constexpr std::size_t kFrozenSatBrightCorrect = 100;

TEST(Acceptance, SyntheticAblation) {
  Budget budget("SyntheticAblation");
  const auto samples = jtm::synthesize_suite(kPerClass, kSuiteSeed);
  ASSERT_EQ(samples.size(), 5 * kPerClass);
  jtm::EvalConfig cfg;
  cfg.threads = 1;
  cfg.encoding.level = EncodingLevel::Plain;
  const auto plain = jtm::evaluate(samples, jtm::SplitProtocol::odd_even(), cfg);
  cfg.encoding.level = EncodingLevel::HuePartsSatBright;
  const auto full = jtm::evaluate(samples, jtm::SplitProtocol::odd_even(), cfg);
  std::printf("    plain %.4f (%zu/%zu), satbright %.4f (%zu/%zu)\n", plain.overall_accuracy, plain.correct,
              plain.total, full.overall_accuracy, full.correct, full.total);
  EXPECT_GE(full.overall_accuracy, 0.90);
  EXPECT_GE(full.overall_accuracy, plain.overall_accuracy);
  EXPECT_EQ(full.total, kFrozenTotal);
  EXPECT_EQ(plain.correct, kFrozenPlainCorrect);
  EXPECT_EQ(full.correct, kFrozenSatBrightCorrect);
}

TEST(Acceptance, ProtocolFidelity) {
  Budget budget("ProtocolFidelity");
  using Idx = std::vector<std::size_t>;
  std::vector<std::optional<int>> ten;
  for (int s = 1; s <= 10; ++s) ten.push_back(s);

  const auto odd_even = jtm::make_split(ten, jtm::SplitProtocol::odd_even());
  EXPECT_EQ(odd_even.train, (Idx{0, 2, 4, 6, 8}));
  EXPECT_EQ(odd_even.test, (Idx{1, 3, 5, 7, 9}));
  EXPECT_TRUE(odd_even.validation.empty());

  const std::vector<std::optional<int>> eight(ten.begin(), ten.begin() + 8);
  const auto lists = jtm::make_split(eight, jtm::SplitProtocol::subject_lists({1, 3, 5, 7}, {}, {2, 4, 6, 8}));
  EXPECT_EQ(lists.train, (Idx{0, 2, 4, 6}));
  EXPECT_EQ(lists.test, (Idx{1, 3, 5, 7}));
  EXPECT_TRUE(lists.validation.empty());

  const auto three_way =
      jtm::make_split(ten, jtm::SplitProtocol::subject_lists({1, 2, 3, 4}, {5}, {6, 7, 8, 9, 10}));
  EXPECT_EQ(three_way.train, (Idx{0, 1, 2, 3}));
  EXPECT_EQ(three_way.validation, (Idx{4}));
  EXPECT_EQ(three_way.test, (Idx{5, 6, 7, 8, 9}));

  // Shuffled mock sets with repeated subjects.
  const std::vector<std::optional<int>> mixed{7, 2, 2, 10, 5, 1, 6, 5, 4};
  const auto m = jtm::make_split(mixed, jtm::SplitProtocol::subject_lists({1, 2, 3, 4}, {5}, {6, 7, 8, 9, 10}));
  EXPECT_EQ(m.train, (Idx{1, 2, 5, 8}));
  EXPECT_EQ(m.validation, (Idx{4, 7}));
  EXPECT_EQ(m.test, (Idx{0, 3, 6}));
  const auto oe = jtm::make_split(mixed, jtm::SplitProtocol::odd_even());
  EXPECT_EQ(oe.train, (Idx{0, 4, 5, 7}));
  EXPECT_EQ(oe.test, (Idx{1, 2, 3, 6, 8}));
}

TEST(Acceptance, Throughput) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> step(0.0, 0.02);
  std::vector<jtm::Frame> frames(100, jtm::Frame(20));
  const auto layout = jtm::default_layout_20();
  for (std::size_t k = 0; k < 20; ++k) frames[0][k] = {0.1 * (k % 5), 0.1 * k, 2.5};
  for (std::size_t i = 1; i < 100; ++i) {
    for (std::size_t k = 0; k < 20; ++k) frames[i][k] = frames[i - 1][k] + jtm::Vec3{step(rng), step(rng), step(rng)};
  }
  const jtm::SkeletonSequence seq(layout, std::move(frames));
  const jtm::EncodingConfig cfg;
  (void)jtm::render_all_planes(seq, cfg);  // warm caches and the allocator

  std::vector<double> runs;
  std::size_t lit = 0;
  for (int r = 0; r < 5; ++r) {
    const auto t0 = Clock::now();
    const auto planes = jtm::render_all_planes(seq, cfg);
    runs.push_back(std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
    lit = std::count_if(planes[0].pixels().begin(), planes[0].pixels().end(), [](auto v) { return v != 0; });
  }
  std::sort(runs.begin(), runs.end());
  auto& c = criteria().at("Throughput");
  c.elapsed_ms = runs[runs.size() / 2];
  std::printf("    median of 5 runs: %.2f ms (min %.2f, max %.2f)\n", runs[2], runs.front(), runs.back());
  EXPECT_GT(lit, 0u);
  EXPECT_LT(c.elapsed_ms, c.budget_ms);
}

}  // namespace

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  auto& listeners = ::testing::UnitTest::GetInstance()->listeners();
  delete listeners.Release(listeners.default_result_printer());
  listeners.Append(new CriterionPrinter);
  return RUN_ALL_TESTS();
}
