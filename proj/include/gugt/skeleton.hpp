#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gugt/geometry.hpp"

namespace gugt {

inline constexpr std::size_t kJointCount = 20;

// Joint indices of the 20-joint skeleton. Nine of these are fixed by the
// analysis (hip center, both elbows, both legs); the remaining eleven are
// carried through the pipeline without interpretation, the names given to
// them here are only what the synthetic generator places there.
enum class Joint : std::uint8_t {
  Head = 0,
  HipCenter = 1,
  Spine = 2,
  ShoulderCenter = 3,
  FootL = 4,
  ShoulderR = 5,
  ElbowR = 6,
  WristR = 7,
  HandR = 8,
  ShoulderL = 9,
  ElbowL = 10,
  WristL = 11,
  HandL = 12,
  HipR = 13,
  KneeR = 14,
  AnkleR = 15,
  FootR = 16,
  HipL = 17,
  KneeL = 18,
  AnkleL = 19,
};

constexpr std::size_t index(Joint j) { return static_cast<std::size_t>(j); }
std::string_view joint_name(Joint j);
std::optional<Joint> joint_from_index(std::size_t i);

enum class RiskLabel : std::uint8_t { Unlabeled, LowRisk, HighRisk };

std::string_view to_string(RiskLabel label);

/// One sample of the skeleton stream. Positions are camera coordinates in
/// meters (z is the distance from the sensor). Sizes are validated at the
/// I/O boundary and by validate_session(); in-memory frames can be built
/// with any size so that malformed data can still be described.
struct SkeletonFrame {
  std::int64_t t_ms = 0;
  std::vector<Vec3> positions = std::vector<Vec3>(kJointCount);
  std::vector<bool> tracked = std::vector<bool>(kJointCount, true);

  const Vec3& at(Joint j) const { return positions[index(j)]; }
  Vec3& at(Joint j) { return positions[index(j)]; }
  bool is_tracked(Joint j) const { return tracked[index(j)]; }

  friend bool operator==(const SkeletonFrame&, const SkeletonFrame&) = default;
};

struct Session {
  std::string subject_id;
  std::string trial_id;
  RiskLabel label = RiskLabel::Unlabeled;
  std::vector<SkeletonFrame> frames;

  friend bool operator==(const Session&, const Session&) = default;
};

struct LabeledDataset {
  std::vector<Session> sessions;

  std::set<std::string> subjects() const;
};

enum class ViolationKind : std::uint8_t {
  EmptySession,
  WrongJointCount,
  NonMonotonicTimestamp,
  NegativeTimestamp,
  NonPositiveDepth,
  Unlabeled,
  TooFewSubjects,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  /// Index of the offending session, or nullopt for dataset-level problems.
  std::optional<std::size_t> session;
  ViolationKind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

/// Structural checks for a single session; appends to `out` with the given
/// session index. Returns true when nothing was found.
bool validate_session(const Session& s, std::size_t session_index, std::vector<Violation>& out);

/// Dataset-level checks: every session valid and labeled, and at least two
/// subjects so leave-one-subject-out has something to hold out.
ValidationReport validate_dataset(const std::vector<Session>& sessions);

}  // namespace gugt
