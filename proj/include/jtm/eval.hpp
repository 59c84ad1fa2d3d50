#pragma once

// Cross-subject splits, a nearest-neighbour classifier over downsampled JTM
// pixels, per-plane score fusion and accuracy/confusion reporting.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jtm/parallel.hpp"
#include "jtm/raster.hpp"
#include "jtm/skeleton.hpp"

namespace jtm {

/// A sequence with a stable identifier (file stem, generator index, ...).
struct Sample {
  std::string id;
  SkeletonSequence sequence;
};

// ---------------------------------------------------------------------------
// Splits
// ---------------------------------------------------------------------------

struct SplitProtocol {
  enum class Kind { OddEvenSubjects, SubjectLists };

  Kind kind = Kind::OddEvenSubjects;
  std::set<int> train;
  std::set<int> validation;
  std::set<int> test;

  /// Odd subjects train, even subjects test.
  static SplitProtocol odd_even() { return {}; }

  static SplitProtocol subject_lists(std::set<int> train, std::set<int> validation, std::set<int> test) {
    SplitProtocol p{Kind::SubjectLists, std::move(train), std::move(validation), std::move(test)};
    auto overlaps = [](const std::set<int>& a, const std::set<int>& b) {
      return std::any_of(a.begin(), a.end(), [&](int s) { return b.count(s) > 0; });
    };
    if (overlaps(p.train, p.test) || overlaps(p.train, p.validation) || overlaps(p.validation, p.test))
      throw std::invalid_argument("train, validation and test subject sets must be disjoint");
    return p;
  }

  std::string describe() const {
    if (kind == Kind::OddEvenSubjects) return "odd-even";
    auto list = [](const std::set<int>& s) {
      std::string out;
      for (int v : s) out += (out.empty() ? "" : ",") + std::to_string(v);
      return out.empty() ? std::string("-") : out;
    };
    return "subjects " + list(train) + "/" + list(validation) + "/" + list(test);
  }
};

/// Sample indices per partition, each in ascending order.
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
};

class SplitError : public Error {
 public:
  using Error::Error;
};

/// Partitions by subject id. Under SubjectLists, samples whose subject is in
/// no list are left out of every partition.
inline Split make_split(std::span<const std::optional<int>> subjects, const SplitProtocol& protocol) {
  Split out;
  for (std::size_t i = 0; i < subjects.size(); ++i) {
    if (!subjects[i]) throw SplitError("sample " + std::to_string(i) + " has no subject id");
    const int s = *subjects[i];
    if (protocol.kind == SplitProtocol::Kind::OddEvenSubjects) {
      (s % 2 != 0 ? out.train : out.test).push_back(i);
    } else if (protocol.train.count(s)) {
      out.train.push_back(i);
    } else if (protocol.validation.count(s)) {
      out.validation.push_back(i);
    } else if (protocol.test.count(s)) {
      out.test.push_back(i);
    }
  }
  if (out.train.empty()) throw SplitError("split leaves the training set empty");
  if (out.test.empty()) throw SplitError("split leaves the test set empty");
  return out;
}

inline Split make_split(std::span<const SkeletonSequence> samples, const SplitProtocol& protocol) {
  std::vector<std::optional<int>> subjects;
  subjects.reserve(samples.size());
  for (const auto& s : samples) subjects.push_back(s.subject());
  return make_split(subjects, protocol);
}

inline Split make_split(std::span<const Sample> samples, const SplitProtocol& protocol) {
  std::vector<std::optional<int>> subjects;
  subjects.reserve(samples.size());
  for (const auto& s : samples) {
    if (!s.sequence.subject()) throw SplitError("sample '" + s.id + "' has no subject id");
    subjects.push_back(s.sequence.subject());
  }
  return make_split(subjects, protocol);
}

// ---------------------------------------------------------------------------
// Features and classifier
// ---------------------------------------------------------------------------

struct FeatureVector {
  std::vector<float> values;
  Plane plane = Plane::Front;
};

/// Box-filter downsample to side x side RGB, channels scaled to [0, 1],
/// flattened row-major (r, g, b per pixel).
inline FeatureVector featurize(const JtmImage& img, int side) {
  if (side < 1 || side > img.width() || side > img.height())
    throw std::invalid_argument("feature side must be in [1, image dimension]");
  FeatureVector out;
  out.plane = img.plane();
  out.values.resize(static_cast<std::size_t>(side) * side * 3);
  const auto& px = img.pixels();
  for (int oy = 0; oy < side; ++oy) {
    const int y0 = oy * img.height() / side, y1 = (oy + 1) * img.height() / side;
    for (int ox = 0; ox < side; ++ox) {
      const int x0 = ox * img.width() / side, x1 = (ox + 1) * img.width() / side;
      std::array<std::uint64_t, 3> sum{};
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
          const std::size_t i = (static_cast<std::size_t>(y) * img.width() + x) * 3;
          sum[0] += px[i];
          sum[1] += px[i + 1];
          sum[2] += px[i + 2];
        }
      }
      const double denom = 255.0 * static_cast<double>((y1 - y0) * (x1 - x0));
      const std::size_t o = (static_cast<std::size_t>(oy) * side + ox) * 3;
      for (int c = 0; c < 3; ++c) out.values[o + c] = static_cast<float>(static_cast<double>(sum[c]) / denom);
    }
  }
  return out;
}

inline double squared_distance(const FeatureVector& a, const FeatureVector& b) {
  if (a.values.size() != b.values.size()) throw std::invalid_argument("feature vectors differ in length");
  double d = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double diff = static_cast<double>(a.values[i]) - static_cast<double>(b.values[i]);
    d += diff * diff;
  }
  return d;
}

/// Fraction of the k nearest training vectors (Euclidean, ties to the lower
/// training index) belonging to each class. `train_classes[i]` is the class
/// index of `train[i]`, in [0, num_classes).
inline std::vector<double> knn_scores(const FeatureVector& query, std::span<const FeatureVector> train,
                                      std::span<const std::size_t> train_classes, std::size_t num_classes,
                                      std::size_t k) {
  if (train.empty()) throw std::invalid_argument("knn: training set is empty");
  if (train.size() != train_classes.size()) throw std::invalid_argument("knn: one class per training vector");
  if (k < 1 || k > train.size()) throw std::invalid_argument("knn: k must be in [1, training size]");
  std::vector<std::pair<double, std::size_t>> dist(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) dist[i] = {squared_distance(query, train[i]), i};
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  std::vector<double> scores(num_classes, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t c = train_classes[dist[i].second];
    if (c >= num_classes) throw std::invalid_argument("knn: class index out of range");
    scores[c] += 1.0;
  }
  for (auto& s : scores) s /= static_cast<double>(k);
  return scores;
}

/// Element-wise mean of the three per-plane score vectors.
inline std::vector<double> fuse_scores(std::span<const double> front, std::span<const double> top,
                                       std::span<const double> side) {
  if (front.size() != top.size() || front.size() != side.size())
    throw std::invalid_argument("fuse_scores: score vectors differ in length");
  std::vector<double> out(front.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (front[i] + top[i] + side[i]) / 3.0;
  return out;
}

/// Index of the largest score; ties go to the lowest index.
inline std::size_t argmax(std::span<const double> scores) {
  if (scores.empty()) throw std::invalid_argument("argmax of empty scores");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// Which planes drive the prediction.
enum class PlaneMode { Fused, Front, Top, Side };

inline std::string_view plane_mode_name(PlaneMode m) {
  switch (m) {
    case PlaneMode::Fused: return "fused";
    case PlaneMode::Front: return "front";
    case PlaneMode::Top: return "top";
    case PlaneMode::Side: return "side";
  }
  return "?";
}

struct EvalConfig {
  EncodingConfig encoding;
  int feature_side = 64;
  std::size_t k = 1;
  PlaneMode mode = PlaneMode::Fused;
  std::size_t threads = 1;
};

struct SampleRecord {
  std::string id;
  int true_label = 0;
  int predicted_label = 0;
  std::vector<double> scores;  // fused (or single-plane) per class
};

struct EvalReport {
  std::vector<int> classes;  // class labels, ascending; index = class index
  double overall_accuracy = 0.0;
  std::size_t correct = 0;
  std::size_t total = 0;
  std::size_t train_count = 0;
  std::map<int, double> per_class_accuracy;       // classes with test samples only
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
  std::map<Plane, double> per_plane_accuracy;
  std::vector<SampleRecord> records;
  PlaneMode mode = PlaneMode::Fused;
  EncodingLevel level = EncodingLevel::HuePartsSatBright;
};

inline std::vector<Plane> planes_for(PlaneMode mode) {
  switch (mode) {
    case PlaneMode::Front: return {Plane::Front};
    case PlaneMode::Top: return {Plane::Top};
    case PlaneMode::Side: return {Plane::Side};
    case PlaneMode::Fused: break;
  }
  return {kAllPlanes.begin(), kAllPlanes.end()};
}

inline EvalReport evaluate(std::span<const Sample> samples, const SplitProtocol& protocol, const EvalConfig& config) {
  config.encoding.validate();
  const Split split = make_split(samples, protocol);

  std::vector<std::size_t> used = split.train;
  used.insert(used.end(), split.test.begin(), split.test.end());
  std::set<int> label_set;
  for (std::size_t i : used) {
    const auto& s = samples[i];
    if (!s.sequence.label()) throw ValidationError("sample '" + s.id + "' has no class label");
    label_set.insert(*s.sequence.label());
  }

  EvalReport report;
  report.classes.assign(label_set.begin(), label_set.end());
  report.mode = config.mode;
  report.level = config.encoding.level;
  report.train_count = split.train.size();
  const std::size_t num_classes = report.classes.size();
  auto class_index = [&](int label) {
    return static_cast<std::size_t>(std::lower_bound(report.classes.begin(), report.classes.end(), label) -
                                    report.classes.begin());
  };

  const std::vector<Plane> planes = planes_for(config.mode);
  // features[plane][position in `used`]
  std::vector<std::vector<FeatureVector>> features(planes.size(), std::vector<FeatureVector>(used.size()));
  parallel_for(used.size(), config.threads, [&](std::size_t u) {
    const auto& seq = samples[used[u]].sequence;
    for (std::size_t p = 0; p < planes.size(); ++p)
      features[p][u] = featurize(render_jtm(seq, planes[p], config.encoding), config.feature_side);
  });

  const std::size_t n_train = split.train.size();
  std::vector<std::size_t> train_classes(n_train);
  for (std::size_t t = 0; t < n_train; ++t) train_classes[t] = class_index(*samples[split.train[t]].sequence.label());

  report.confusion.assign(num_classes, std::vector<std::size_t>(num_classes, 0));
  std::vector<std::size_t> plane_correct(planes.size(), 0);
  std::vector<std::size_t> class_total(num_classes, 0), class_correct(num_classes, 0);

  for (std::size_t t = 0; t < split.test.size(); ++t) {
    const std::size_t u = n_train + t;
    const Sample& s = samples[split.test[t]];
    const std::size_t truth = class_index(*s.sequence.label());

    std::vector<std::vector<double>> per_plane;
    for (std::size_t p = 0; p < planes.size(); ++p) {
      std::span<const FeatureVector> train_feats(features[p].data(), n_train);
      per_plane.push_back(knn_scores(features[p][u], train_feats, train_classes, num_classes, config.k));
      if (argmax(per_plane.back()) == truth) ++plane_correct[p];
    }
    std::vector<double> scores =
        per_plane.size() == 3 ? fuse_scores(per_plane[0], per_plane[1], per_plane[2]) : per_plane[0];
    const std::size_t predicted = argmax(scores);

    ++report.confusion[truth][predicted];
    ++class_total[truth];
    if (predicted == truth) {
      ++class_correct[truth];
      ++report.correct;
    }
    report.records.push_back({s.id, report.classes[truth], report.classes[predicted], std::move(scores)});
  }

  report.total = split.test.size();
  report.overall_accuracy = static_cast<double>(report.correct) / static_cast<double>(report.total);
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (class_total[c] > 0)
      report.per_class_accuracy[report.classes[c]] =
          static_cast<double>(class_correct[c]) / static_cast<double>(class_total[c]);
  }
  for (std::size_t p = 0; p < planes.size(); ++p)
    report.per_plane_accuracy[planes[p]] = static_cast<double>(plane_correct[p]) / static_cast<double>(report.total);
  return report;
}

struct AblationRow {
  EncodingLevel level;
  double accuracy = 0.0;
  std::size_t correct = 0;
  std::size_t total = 0;
};

/// One single-plane evaluation per encoding level, in level order.
inline std::vector<AblationRow> run_ablation(std::span<const Sample> samples, const SplitProtocol& protocol,
                                             EvalConfig config, Plane plane = Plane::Front) {
  config.mode = plane == Plane::Front ? PlaneMode::Front : plane == Plane::Top ? PlaneMode::Top : PlaneMode::Side;
  std::vector<AblationRow> rows;
  for (EncodingLevel level : kAllLevels) {
    config.encoding.level = level;
    EvalReport r = evaluate(samples, protocol, config);
    rows.push_back({level, r.overall_accuracy, r.correct, r.total});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Report formatting
// ---------------------------------------------------------------------------

inline std::string format_report_table(const EvalReport& r) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  out << "mode      " << plane_mode_name(r.mode) << "\n";
  out << "level     " << level_name(r.level) << " (" << level_notation(r.level) << ")\n";
  out << "train     " << r.train_count << " samples\n";
  out << "test      " << r.total << " samples\n";
  out << "accuracy  " << r.overall_accuracy << "  (" << r.correct << "/" << r.total << ")\n";
  for (const auto& [plane, acc] : r.per_plane_accuracy)
    out << "  " << std::left << std::setw(8) << plane_name(plane) << std::right << acc << "\n";
  out << "\n" << std::setw(8) << "class" << std::setw(8) << "tested" << std::setw(10) << "accuracy" << "\n";
  for (std::size_t c = 0; c < r.classes.size(); ++c) {
    const std::size_t tested = std::accumulate(r.confusion[c].begin(), r.confusion[c].end(), std::size_t{0});
    out << std::setw(8) << r.classes[c] << std::setw(8) << tested;
    auto it = r.per_class_accuracy.find(r.classes[c]);
    if (it != r.per_class_accuracy.end()) {
      out << std::setw(10) << it->second;
    } else {
      out << std::setw(10) << "-";
    }
    out << "\n";
  }
  out << "\nconfusion (rows: true, columns: predicted)\n" << std::setw(8) << "";
  for (int c : r.classes) out << std::setw(6) << c;
  out << "\n";
  for (std::size_t i = 0; i < r.classes.size(); ++i) {
    out << std::setw(8) << r.classes[i];
    for (std::size_t v : r.confusion[i]) out << std::setw(6) << v;
    out << "\n";
  }
  return out.str();
}

/// Header row of class labels, then one row per true class.
inline std::string format_confusion_csv(const EvalReport& r) {
  std::ostringstream out;
  out << "true\\predicted";
  for (int c : r.classes) out << "," << c;
  out << "\n";
  for (std::size_t i = 0; i < r.classes.size(); ++i) {
    out << r.classes[i];
    for (std::size_t v : r.confusion[i]) out << "," << v;
    out << "\n";
  }
  return out.str();
}

inline std::string format_ablation_table(const std::vector<AblationRow>& rows, Plane plane = Plane::Front) {
  std::ostringstream out;
  out << "encoding ablation, " << plane_name(plane) << " plane\n";
  out << std::left << std::setw(12) << "level" << std::setw(10) << "notation" << std::right << std::setw(10)
      << "accuracy" << std::setw(10) << "correct" << "\n";
  out << std::fixed << std::setprecision(4);
  for (const auto& row : rows) {
    out << std::left << std::setw(12) << level_name(row.level) << std::setw(10) << level_notation(row.level)
        << std::right << std::setw(10) << row.accuracy << std::setw(10)
        << (std::to_string(row.correct) + "/" + std::to_string(row.total)) << "\n";
  }
  return out.str();
}

}  // namespace jtm
