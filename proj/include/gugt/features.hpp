#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "gugt/segmentation.hpp"
#include "gugt/skeleton.hpp"

namespace gugt {

struct StepEvents {
  std::vector<std::size_t> crossing_frames;  // first frame of the new sign
  std::size_t step_count = 0;
};

struct GaitFeatures {
  double num_steps = 0.0;
  double avg_step_duration_s = 0.0;
  double turn_duration_s = 0.0;

  std::array<double, 3> as_array() const { return {num_steps, avg_step_duration_s, turn_duration_s}; }
};

inline constexpr std::size_t kAnatomicalDims = 4;

struct AnatomicalFrameFeatures {
  std::int64_t t_ms = 0;
  double elbow_distance_m = 0.0;
  double leg_angle_rad = 0.0;
  double knee_right_rad = 0.0;
  double knee_left_rad = 0.0;

  std::array<double, kAnatomicalDims> as_array() const {
    return {elbow_distance_m, leg_angle_rad, knee_right_rad, knee_left_rad};
  }
};

/// z_AnkleR - z_AnkleL per frame (signed).
TimeSeries heel_depth_difference(const Session& session);

/// Zero crossings of the heel difference inside walking intervals, with
/// hysteresis: a sign change counts only if the signal last reached
/// +-step_amplitude_m on the old side and next reaches it on the new side
/// before changing sign again. Of several sign changes between two such
/// excursions only the last one is kept. A sample that is exactly zero
/// belongs to the run of the preceding sign.
StepEvents detect_steps(const TimeSeries& heel_diff, std::span<const Interval> walking,
                        const SegmentationParams& params);

/// Step count, mean time between consecutive crossings of the same walking
/// interval, and the timestamp span of the turning interval.
/// Throws NoSteps when no walking interval holds two crossings.
GaitFeatures gait_features(const PhaseSegmentation& seg, const StepEvents& steps, const Session& session);

/// Angle in [0, pi] between two non-zero vectors. Throws ZeroVector.
double angle_between(const Vec3& u, const Vec3& v);

/// Per-frame elbow distance (3-D), angle between the legs at the hip center
/// and both knee angles. Frames missing any of the required joints are
/// skipped.
std::vector<AnatomicalFrameFeatures> anatomical_features(const Session& session);

void write_anatomical_csv(std::span<const AnatomicalFrameFeatures> rows, std::ostream& out);

/// `t_ms,value,crossing` where crossing is 1 on detected step frames.
void write_heel_csv(const TimeSeries& heel_diff, const StepEvents& steps, std::ostream& out);

}  // namespace gugt
