#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "jtm/skeleton.hpp"

namespace jtm {

/// Displacements of every joint between frames `step_index - 1` and
/// `step_index` (0-based frames, steps numbered from 1).
struct TrajectoryStep {
  std::size_t step_index = 0;
  std::vector<Vec3> deltas;
  std::vector<Vec3> start_points;
  std::vector<double> speeds;
};

struct TrajectorySet {
  std::vector<TrajectoryStep> steps;
  double v_max = 0.0;  // over all joints and steps of the sequence
};

inline double joint_speed(Vec3 p_next, Vec3 p) { return (p_next - p).norm(); }

inline TrajectorySet compute_trajectories(const SkeletonSequence& seq) {
  TrajectorySet out;
  const std::size_t m = seq.joint_count();
  const auto& frames = seq.frames();
  out.steps.reserve(frames.size() - 1);
  for (std::size_t i = 1; i < frames.size(); ++i) {
    TrajectoryStep step;
    step.step_index = i;
    step.deltas.resize(m);
    step.start_points.resize(m);
    step.speeds.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
      step.start_points[k] = frames[i - 1][k];
      step.deltas[k] = frames[i][k] - frames[i - 1][k];
      step.speeds[k] = step.deltas[k].norm();
      out.v_max = std::max(out.v_max, step.speeds[k]);
    }
    out.steps.push_back(std::move(step));
  }
  return out;
}

}  // namespace jtm
