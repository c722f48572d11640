#include "gugt/skeleton.hpp"

#include <array>

namespace gugt {

namespace {

constexpr std::array<std::string_view, kJointCount> kJointNames = {
    "Head",   "HipCenter", "Spine",  "ShoulderCenter", "FootL",  "ShoulderR", "ElbowR",
    "WristR", "HandR",     "ShoulderL", "ElbowL",      "WristL", "HandL",     "HipR",
    "KneeR",  "AnkleR",    "FootR",  "HipL",           "KneeL",  "AnkleL",
};

}  // namespace

std::string_view joint_name(Joint j) { return kJointNames[index(j)]; }

std::optional<Joint> joint_from_index(std::size_t i) {
  if (i >= kJointCount) return std::nullopt;
  return static_cast<Joint>(i);
}

std::string_view to_string(RiskLabel label) {
  switch (label) {
    case RiskLabel::LowRisk: return "low";
    case RiskLabel::HighRisk: return "high";
    case RiskLabel::Unlabeled: break;
  }
  return "unlabeled";
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::EmptySession: return "EmptySession";
    case ViolationKind::WrongJointCount: return "WrongJointCount";
    case ViolationKind::NonMonotonicTimestamp: return "NonMonotonicTimestamp";
    case ViolationKind::NegativeTimestamp: return "NegativeTimestamp";
    case ViolationKind::NonPositiveDepth: return "NonPositiveDepth";
    case ViolationKind::Unlabeled: return "Unlabeled";
    case ViolationKind::TooFewSubjects: return "TooFewSubjects";
  }
  return "Unknown";
}

std::set<std::string> LabeledDataset::subjects() const {
  std::set<std::string> ids;
  for (const auto& s : sessions) ids.insert(s.subject_id);
  return ids;
}

bool validate_session(const Session& s, std::size_t session_index, std::vector<Violation>& out) {
  const auto before = out.size();
  const auto where = [&](std::size_t f) {
    return s.subject_id + "/" + s.trial_id + " frame " + std::to_string(f);
  };

  if (s.frames.empty()) {
    out.push_back({session_index, ViolationKind::EmptySession, s.subject_id + "/" + s.trial_id + " has no frames"});
  }
  for (std::size_t f = 0; f < s.frames.size(); ++f) {
    const auto& fr = s.frames[f];
    if (fr.positions.size() != kJointCount || fr.tracked.size() != kJointCount) {
      out.push_back({session_index, ViolationKind::WrongJointCount,
                     where(f) + " has " + std::to_string(fr.positions.size()) + " joints"});
      continue;
    }
    if (fr.t_ms < 0) {
      out.push_back({session_index, ViolationKind::NegativeTimestamp, where(f) + " has a negative timestamp"});
    }
    if (f > 0 && fr.t_ms <= s.frames[f - 1].t_ms) {
      out.push_back({session_index, ViolationKind::NonMonotonicTimestamp, where(f) + " does not advance in time"});
    }
    for (std::size_t j = 0; j < kJointCount; ++j) {
      if (fr.tracked[j] && !(fr.positions[j].z > 0.0)) {
        out.push_back({session_index, ViolationKind::NonPositiveDepth,
                       where(f) + " joint " + std::to_string(j) + " is tracked with z <= 0"});
        break;
      }
    }
  }
  return out.size() == before;
}

ValidationReport validate_dataset(const std::vector<Session>& sessions) {
  ValidationReport report;
  std::set<std::string> subjects;
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    const auto& s = sessions[i];
    validate_session(s, i, report.violations);
    if (s.label == RiskLabel::Unlabeled) {
      report.violations.push_back({i, ViolationKind::Unlabeled, s.subject_id + "/" + s.trial_id + " carries no risk label"});
    }
    subjects.insert(s.subject_id);
  }
  if (subjects.size() < 2) {
    report.violations.push_back({std::nullopt, ViolationKind::TooFewSubjects, "LOSO requires >=2 subjects"});
  }
  return report;
}

}  // namespace gugt
