#include "gugt/segmentation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

#include "gugt/error.hpp"

namespace gugt {

void SegmentationParams::validate() const {
  const auto in_unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (!in_unit(seated_band_frac)) throw Error(ErrorCode::InvalidConfig, "seated_band_frac must be in (0,1)");
  if (!in_unit(turn_recovery_frac)) throw Error(ErrorCode::InvalidConfig, "turn_recovery_frac must be in (0,1)");
  if (!(seated_min_duration_s >= 0.0)) throw Error(ErrorCode::InvalidConfig, "seated_min_duration_s must be >= 0");
  if (!(step_amplitude_m > 0.0)) throw Error(ErrorCode::InvalidConfig, "step_amplitude_m must be > 0");
}

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Seated: return "seated";
    case Phase::Walking: return "walking";
    case Phase::Turning: return "turning";
  }
  return "unknown";
}

std::vector<Phase> PhaseSegmentation::labels() const {
  std::vector<Phase> out(frame_count, Phase::Walking);
  for (const auto& iv : seated) std::fill(out.begin() + iv.first, out.begin() + iv.last + 1, Phase::Seated);
  std::fill(out.begin() + turning.first, out.begin() + turning.last + 1, Phase::Turning);
  return out;
}

std::vector<Interval> runs_of(std::span<const Phase> labels, Phase phase) {
  std::vector<Interval> runs;
  for (std::size_t i = 0; i < labels.size();) {
    if (labels[i] != phase) {
      ++i;
      continue;
    }
    auto j = i;
    while (j + 1 < labels.size() && labels[j + 1] == phase) ++j;
    runs.push_back({i, j});
    i = j + 1;
  }
  return runs;
}

TimeSeries joint_signal(const Session& session, std::string name, std::span<const Joint> required,
                        const std::function<double(const SkeletonFrame&)>& value) {
  if (session.frames.empty()) throw Error(ErrorCode::EmptySession, session.subject_id + "/" + session.trial_id);
  const auto n = session.frames.size();
  std::vector<bool> usable(n);
  std::size_t count = 0;
  for (std::size_t f = 0; f < n; ++f) {
    const auto& fr = session.frames[f];
    usable[f] = std::all_of(required.begin(), required.end(), [&](Joint j) { return fr.is_tracked(j); });
    count += usable[f] ? 1 : 0;
  }
  if (static_cast<double>(count) < kMinTrackedFraction * static_cast<double>(n)) {
    throw Error(ErrorCode::InsufficientTracking, name + ": required joints tracked in " + std::to_string(count) +
                                                     " of " + std::to_string(n) + " frames");
  }
  TimeSeries ts{std::move(name), {}, {}};
  ts.t_ms.reserve(n);
  ts.values.reserve(n);
  const auto first_usable = static_cast<std::size_t>(std::find(usable.begin(), usable.end(), true) - usable.begin());
  double held = value(session.frames[first_usable]);
  for (std::size_t f = 0; f < n; ++f) {
    if (usable[f]) held = value(session.frames[f]);
    ts.t_ms.push_back(session.frames[f].t_ms);
    ts.values.push_back(held);
  }
  return ts;
}

TimeSeries hip_depth_signal(const Session& session) {
  static constexpr std::array kJoints{Joint::HipCenter};
  return joint_signal(session, "hip_depth", kJoints, [](const SkeletonFrame& f) { return f.at(Joint::HipCenter).z; });
}

TimeSeries elbow_xdistance_signal(const Session& session) {
  static constexpr std::array kJoints{Joint::ElbowR, Joint::ElbowL};
  return joint_signal(session, "elbow_xdistance", kJoints, [](const SkeletonFrame& f) {
    return std::abs(f.at(Joint::ElbowR).x - f.at(Joint::ElbowL).x);
  });
}

std::size_t find_turn_point(const TimeSeries& z1) {
  if (z1.empty()) throw Error(ErrorCode::EmptySession, "turn point of an empty series");
  // min_element returns the first of equal minima.
  return static_cast<std::size_t>(std::min_element(z1.values.begin(), z1.values.end()) - z1.values.begin());
}

std::vector<Interval> detect_seated_phases(const TimeSeries& z1, const SegmentationParams& params) {
  if (z1.empty()) throw Error(ErrorCode::EmptySession, "seated phases of an empty series");
  const auto [lo, hi] = std::minmax_element(z1.values.begin(), z1.values.end());
  const double range = *hi - *lo;
  if (range < 0.2) {
    throw Error(ErrorCode::DegenerateRange,
                "hip depth varies by " + std::to_string(range) + " m; the subject never left the chair region");
  }
  const double threshold = *hi - params.seated_band_frac * range;
  const auto turn = find_turn_point(z1);
  const auto min_ms = params.seated_min_duration_s * 1000.0;

  std::optional<Interval> before, after;
  const auto n = z1.size();
  for (std::size_t i = 0; i < n;) {
    if (z1.values[i] < threshold) {
      ++i;
      continue;
    }
    auto j = i;
    while (j + 1 < n && z1.values[j + 1] >= threshold) ++j;
    const Interval run{i, j};
    if (static_cast<double>(z1.t_ms[j] - z1.t_ms[i]) >= min_ms) {
      if (j < turn && !before) before = run;
      if (i > turn) after = run;
    }
    i = j + 1;
  }
  std::vector<Interval> out;
  if (before) out.push_back(*before);
  if (after) out.push_back(*after);
  return out;
}

TurnDetection detect_turning_phase(const TimeSeries& elbow, std::size_t turn_point, double walking_baseline,
                                   const SegmentationParams& params, std::optional<Interval> search) {
  if (turn_point >= elbow.size()) throw Error(ErrorCode::DegenerateRange, "turn point outside the elbow series");
  if (!(walking_baseline > 0.0)) throw Error(ErrorCode::DegenerateRange, "walking baseline must be positive");
  const auto bounds = search.value_or(Interval{0, elbow.size() - 1});
  if (!bounds.contains(turn_point) || bounds.last >= elbow.size()) {
    throw Error(ErrorCode::DegenerateRange, "turn search region does not contain the turn point");
  }
  const double threshold = params.turn_recovery_frac * walking_baseline;
  const auto& v = elbow.values;

  TurnDetection out{{turn_point, turn_point}, false, false};
  if (v[turn_point] >= threshold) return out;

  auto start = turn_point;
  while (start > bounds.first && v[start - 1] < threshold) --start;
  out.start_clamped = start == bounds.first;
  auto end = turn_point;
  while (end < bounds.last && v[end + 1] < threshold) ++end;
  out.end_clamped = end == bounds.last;
  out.interval = {start, end};
  return out;
}

namespace {

double median_of(std::vector<double> v) {
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace

PhaseSegmentation segment_phases(const Session& session, const SegmentationParams& params) {
  params.validate();
  const auto z1 = hip_depth_signal(session);
  const auto elbow = elbow_xdistance_signal(session);
  const auto n = z1.size();

  PhaseSegmentation seg;
  seg.frame_count = n;
  seg.turn_point = find_turn_point(z1);
  seg.seated = detect_seated_phases(z1, params);

  // The walking region the turn may occupy lies between the two seated runs.
  Interval region{0, n - 1};
  for (const auto& s : seg.seated) {
    if (s.last < seg.turn_point) region.first = s.last + 1;
    if (s.first > seg.turn_point) region.last = s.first - 1;
  }

  // Baseline from the first half of the approach; the second half may
  // already contain the start of the turn.
  const auto approach = seg.turn_point - region.first;
  if (approach < 2) throw Error(ErrorCode::DegenerateRange, "no walking before the turn point");
  const auto first = elbow.values.begin() + static_cast<std::ptrdiff_t>(region.first);
  seg.walking_baseline = median_of({first, first + static_cast<std::ptrdiff_t>(approach / 2)});
  if (!(seg.walking_baseline > 0.0)) throw Error(ErrorCode::DegenerateRange, "elbow distance is zero while walking");

  const auto turn = detect_turning_phase(elbow, seg.turn_point, seg.walking_baseline, params, region);
  seg.turning = turn.interval;
  seg.turn_start_clamped = turn.start_clamped;
  seg.turn_end_clamped = turn.end_clamped;

  const auto labels = seg.labels();
  seg.walking = runs_of(labels, Phase::Walking);
  return seg;
}

void write_phase_csv(const TimeSeries& signal, const PhaseSegmentation& seg, std::ostream& out) {
  const auto labels = seg.labels();
  const auto precision = out.precision(10);
  out << "t_ms,value,phase\n";
  for (std::size_t i = 0; i < signal.size(); ++i) {
    out << signal.t_ms[i] << ',' << signal.values[i] << ',' << to_string(labels[i]) << '\n';
  }
  out.precision(precision);
}

}  // namespace gugt
