#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gugt/skeleton.hpp"
#include "gugt/synthgen.hpp"

namespace testing_helpers {

inline gugt::SkeletonFrame frame_at(std::int64_t t_ms, double z = 3.0) {
  gugt::SkeletonFrame f;
  f.t_ms = t_ms;
  for (std::size_t j = 0; j < gugt::kJointCount; ++j) {
    f.positions[j] = {0.01 * static_cast<double>(j), 0.5 - 0.02 * static_cast<double>(j), z};
  }
  return f;
}

inline gugt::Session constant_session(std::size_t n, double z = 3.0) {
  gugt::Session s;
  s.subject_id = "S01";
  s.trial_id = "T1";
  for (std::size_t k = 0; k < n; ++k) s.frames.push_back(frame_at(static_cast<std::int64_t>(k) * 33, z));
  return s;
}

/// Default profile with stride matched to the step count.
inline gugt::GaitProfile profile(int steps, double step_s, double turn_s, double noise = 0.0) {
  gugt::GaitProfile p;
  p.step_count_oneway = steps;
  p.step_duration_s = step_s;
  p.turn_duration_s = turn_s;
  p.stride_m = p.walk_distance_m / steps;
  p.noise_std_m = noise;
  return p;
}

}  // namespace testing_helpers
