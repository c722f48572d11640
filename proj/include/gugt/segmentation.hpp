#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gugt/skeleton.hpp"

namespace gugt {

struct TimeSeries {
  std::string name;
  std::vector<std::int64_t> t_ms;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }
};

/// Closed frame-index interval [first, last]. A single frame has first == last.
struct Interval {
  std::size_t first = 0;
  std::size_t last = 0;

  std::size_t length() const { return last - first + 1; }
  bool contains(std::size_t i) const { return first <= i && i <= last; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

struct SegmentationParams {
  double seated_band_frac = 0.05;
  double seated_min_duration_s = 0.5;
  double turn_recovery_frac = 0.8;
  double step_amplitude_m = 0.05;

  void validate() const;
};

enum class Phase : std::uint8_t { Seated, Walking, Turning };

std::string_view to_string(Phase p);

struct PhaseSegmentation {
  std::vector<Interval> seated;
  Interval turning;
  std::vector<Interval> walking;
  std::size_t turn_point = 0;
  std::size_t frame_count = 0;
  double walking_baseline = 0.0;
  // Set when the elbow signal never recovered on that side of the turn and
  // the interval was clamped to the walking region.
  bool turn_start_clamped = false;
  bool turn_end_clamped = false;

  /// Per-frame phase labels, size frame_count.
  std::vector<Phase> labels() const;
};

/// Minimum share of frames in which the joints behind a signal must be
/// tracked (after gap filling).
inline constexpr double kMinTrackedFraction = 0.9;

/// Builds a per-frame signal from `value(frame)` after checking that all
/// `required` joints are tracked in at least kMinTrackedFraction of frames.
/// Frames where a required joint is untracked take the value of the nearest
/// preceding usable frame (or the first usable one at the start).
TimeSeries joint_signal(const Session& session, std::string name, std::span<const Joint> required,
                        const std::function<double(const SkeletonFrame&)>& value);

/// z of the hip center per frame.
TimeSeries hip_depth_signal(const Session& session);

/// |x_ElbowR - x_ElbowL| per frame.
TimeSeries elbow_xdistance_signal(const Session& session);

/// Index of the global minimum; the earliest index wins ties.
std::size_t find_turn_point(const TimeSeries& z1);

/// Runs where the hip depth sits in the top seated_band_frac of its range for
/// at least seated_min_duration_s. Keeps the first such run before the turn
/// point and the last one after it.
std::vector<Interval> detect_seated_phases(const TimeSeries& z1, const SegmentationParams& params);

struct TurnDetection {
  Interval interval;
  bool start_clamped = false;
  bool end_clamped = false;
};

/// Grows an interval around turn_point while the elbow signal stays below
/// turn_recovery_frac * walking_baseline. The scan never leaves `search`
/// (defaults to the whole series); hitting its edge sets the clamp flag.
TurnDetection detect_turning_phase(const TimeSeries& elbow, std::size_t turn_point, double walking_baseline,
                                   const SegmentationParams& params, std::optional<Interval> search = std::nullopt);

PhaseSegmentation segment_phases(const Session& session, const SegmentationParams& params);

/// Plot data: `t_ms,value,phase` with one row per frame.
void write_phase_csv(const TimeSeries& signal, const PhaseSegmentation& seg, std::ostream& out);

/// Maximal runs of identical labels equal to `phase`.
std::vector<Interval> runs_of(std::span<const Phase> labels, Phase phase);

}  // namespace gugt
