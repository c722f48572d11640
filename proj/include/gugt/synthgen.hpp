#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gugt/segmentation.hpp"
#include "gugt/skeleton.hpp"

namespace gugt {

/// Script of one synthetic trial: seated, stand up, walk toward the sensor,
/// turn, walk back, sit down, seated. A step count of zero scripts a subject
/// who never gets up.
struct GaitProfile {
  double chair_distance_m = 3.5;
  double walk_distance_m = 2.0;
  double seated_lead_s = 2.0;
  double seated_tail_s = 2.0;
  double standup_s = 0.6;          // also used for sitting down
  double standup_depth_m = 0.45;   // forward hip travel when rising
  int step_count_oneway = 8;
  double step_duration_s = 0.6;
  double stride_m = 0.25;
  double turn_duration_s = 1.5;
  double shoulder_width_m = 0.4;
  double sway_amp_m = 0.02;
  double arm_swing_m = 0.05;
  double knee_bend_m = 0.05;       // forward knee offset while walking
  double noise_std_m = 0.0;
  double dropout_prob = 0.0;       // per joint, per frame
  double fps = 30.0;

  void validate() const;
  /// Sum of all scripted segment durations.
  double total_duration_s() const;
  std::size_t frame_count() const;
};

/// Ground truth in frame indices; a frame belongs to the scripted segment
/// its timestamp falls in. Standing up and sitting down count as walking.
struct GroundTruth {
  std::size_t frame_count = 0;
  double fps = 30.0;
  std::vector<Interval> seated;
  std::vector<Interval> walking;
  std::optional<Interval> turning;
  std::size_t num_steps = 0;
  std::vector<std::size_t> crossing_frames;
  std::vector<double> step_durations_s;
  double turn_duration_s = 0.0;
  double avg_step_duration_s = 0.0;
};

nlohmann::json to_json(const GroundTruth& truth);

std::pair<Session, GroundTruth> generate_session(const GaitProfile& profile, std::uint64_t seed);

/// Subject-level ranges a cohort draws from, plus per-trial jitter.
struct ProfileDistribution {
  GaitProfile base;
  int step_count_min = 4;
  int step_count_max = 6;
  double step_duration_min = 0.45;
  double step_duration_max = 0.6;
  double turn_duration_min = 1.0;
  double turn_duration_max = 1.8;
  double knee_bend_min = 0.04;
  double knee_bend_max = 0.07;
  int trial_step_jitter = 1;
  double trial_step_duration_jitter_s = 0.03;
  double trial_turn_jitter_s = 0.15;

  void validate() const;
};

/// Low- and high-risk distributions whose step counts, step durations and
/// turn durations do not overlap.
ProfileDistribution separable_low_risk();
ProfileDistribution separable_high_risk();

struct CohortSpec {
  ProfileDistribution low = separable_low_risk();
  ProfileDistribution high = separable_high_risk();
  std::size_t low_subjects = 5;
  std::size_t high_subjects = 7;
  std::size_t trials_min = 3;
  std::size_t trials_max = 6;
};

struct Cohort {
  LabeledDataset dataset;
  std::vector<GroundTruth> truths;  // parallel to dataset.sessions
  std::vector<GaitProfile> profiles;
};

/// Subjects S01.. (low-risk first), trials T1..; deterministic in `seed`.
Cohort generate_cohort(const CohortSpec& spec, std::uint64_t seed);

/// Deterministic 64-bit mix used to derive child seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace gugt
