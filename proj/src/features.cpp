#include "gugt/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "gugt/error.hpp"

namespace gugt {

TimeSeries heel_depth_difference(const Session& session) {
  static constexpr std::array kJoints{Joint::AnkleR, Joint::AnkleL};
  return joint_signal(session, "heel_difference", kJoints,
                      [](const SkeletonFrame& f) { return f.at(Joint::AnkleR).z - f.at(Joint::AnkleL).z; });
}

StepEvents detect_steps(const TimeSeries& heel_diff, std::span<const Interval> walking,
                        const SegmentationParams& params) {
  const double amp = params.step_amplitude_m;
  const auto& v = heel_diff.values;
  StepEvents ev;
  for (const auto& iv : walking) {
    if (iv.last >= v.size()) throw Error(ErrorCode::DimensionMismatch, "walking interval beyond the signal");
    int sign = 0;        // sign of the current run, 0 before the first non-zero sample
    int level = 0;       // side of the last sample at or beyond +-amp
    std::size_t run_start = iv.first;
    for (auto k = iv.first; k <= iv.last; ++k) {
      const int s = v[k] > 0.0 ? 1 : (v[k] < 0.0 ? -1 : sign);
      if (s != sign) {
        run_start = k;
        sign = s;
      }
      if (std::abs(v[k]) >= amp && s != 0) {
        if (level != 0 && s != level) ev.crossing_frames.push_back(run_start);
        level = s;
      }
    }
  }
  std::sort(ev.crossing_frames.begin(), ev.crossing_frames.end());
  ev.step_count = ev.crossing_frames.size();
  return ev;
}

GaitFeatures gait_features(const PhaseSegmentation& seg, const StepEvents& steps, const Session& session) {
  if (seg.frame_count != session.frames.size()) {
    throw Error(ErrorCode::DimensionMismatch, "segmentation and session frame counts differ");
  }
  const auto t = [&](std::size_t f) { return static_cast<double>(session.frames[f].t_ms); };
  double total_ms = 0.0;
  std::size_t pairs = 0;
  for (const auto& iv : seg.walking) {
    const std::size_t* prev = nullptr;
    for (const auto& c : steps.crossing_frames) {
      if (!iv.contains(c)) continue;
      if (prev) {
        total_ms += t(c) - t(*prev);
        ++pairs;
      }
      prev = &c;
    }
  }
  if (pairs == 0) {
    throw Error(ErrorCode::NoSteps, session.subject_id + "/" + session.trial_id + ": fewer than two crossings in every walking interval");
  }
  GaitFeatures g;
  g.num_steps = static_cast<double>(steps.step_count);
  g.avg_step_duration_s = total_ms / static_cast<double>(pairs) / 1000.0;
  g.turn_duration_s = (t(seg.turning.last) - t(seg.turning.first)) / 1000.0;
  return g;
}

double angle_between(const Vec3& u, const Vec3& v) {
  const double nu = norm(u);
  const double nv = norm(v);
  if (!(nu > 0.0) || !(nv > 0.0)) throw Error(ErrorCode::ZeroVector, "angle with a zero-length vector");
  return std::acos(std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0));
}

std::vector<AnatomicalFrameFeatures> anatomical_features(const Session& session) {
  static constexpr std::array kRequired{Joint::HipCenter, Joint::ElbowR, Joint::ElbowL, Joint::HipR,  Joint::KneeR,
                                        Joint::AnkleR,    Joint::HipL,   Joint::KneeL,  Joint::AnkleL};
  std::vector<AnatomicalFrameFeatures> out;
  out.reserve(session.frames.size());
  for (const auto& f : session.frames) {
    if (f.positions.size() != kJointCount) continue;
    if (!std::all_of(kRequired.begin(), kRequired.end(), [&](Joint j) { return f.is_tracked(j); })) continue;
    const auto& hip = f.at(Joint::HipCenter);
    const auto& knee_r = f.at(Joint::KneeR);
    const auto& knee_l = f.at(Joint::KneeL);
    try {
      out.push_back({f.t_ms, distance(f.at(Joint::ElbowR), f.at(Joint::ElbowL)),
                     angle_between(knee_r - hip, knee_l - hip),
                     angle_between(f.at(Joint::HipR) - knee_r, f.at(Joint::AnkleR) - knee_r),
                     angle_between(f.at(Joint::HipL) - knee_l, f.at(Joint::AnkleL) - knee_l)});
    } catch (const Error&) {
      // Coincident joints leave the angles undefined; treat like untracked.
    }
  }
  return out;
}

void write_anatomical_csv(std::span<const AnatomicalFrameFeatures> rows, std::ostream& out) {
  const auto precision = out.precision(10);
  out << "t_ms,elbow_m,leg_rad,kneeR_rad,kneeL_rad\n";
  for (const auto& r : rows) {
    out << r.t_ms << ',' << r.elbow_distance_m << ',' << r.leg_angle_rad << ',' << r.knee_right_rad << ','
        << r.knee_left_rad << '\n';
  }
  out.precision(precision);
}

void write_heel_csv(const TimeSeries& heel_diff, const StepEvents& steps, std::ostream& out) {
  const auto precision = out.precision(10);
  out << "t_ms,value,crossing\n";
  auto next = steps.crossing_frames.begin();
  for (std::size_t i = 0; i < heel_diff.size(); ++i) {
    const bool hit = next != steps.crossing_frames.end() && *next == i;
    if (hit) ++next;
    out << heel_diff.t_ms[i] << ',' << heel_diff.values[i] << ',' << (hit ? 1 : 0) << '\n';
  }
  out.precision(precision);
}

}  // namespace gugt
