#include "gugt/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "gugt/error.hpp"

namespace gugt {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGaitBounce = 0.3;   // relative forward-speed modulation per step
constexpr double kTurnDip = 0.03;     // extra hip travel toward the sensor mid-turn
constexpr double kYawSharpness = 32;  // exponent of the torso yaw profile
constexpr double kHipHalfWidth = 0.1;

enum class Segment { Lead, StandUp, WalkOut, Turn, WalkBack, SitDown, Tail };

struct Timeline {
  double lead_end, stand_end, walk_out_end, turn_end, walk_back_end, sit_end;
  bool seated_only;

  explicit Timeline(const GaitProfile& p) {
    seated_only = p.step_count_oneway == 0;
    const double walk = p.step_count_oneway * p.step_duration_s;
    lead_end = p.seated_lead_s;
    stand_end = lead_end + (seated_only ? 0.0 : p.standup_s);
    walk_out_end = stand_end + walk;
    turn_end = walk_out_end + (seated_only ? 0.0 : p.turn_duration_s);
    walk_back_end = turn_end + walk;
    sit_end = walk_back_end + (seated_only ? 0.0 : p.standup_s);
  }

  Segment at(double t) const {
    if (seated_only) return Segment::Lead;
    if (t < lead_end) return Segment::Lead;
    if (t < stand_end) return Segment::StandUp;
    if (t < walk_out_end) return Segment::WalkOut;
    if (t < turn_end) return Segment::Turn;
    if (t < walk_back_end) return Segment::WalkBack;
    if (t < sit_end) return Segment::SitDown;
    return Segment::Tail;
  }
};

double smoothstep(double e0, double e1, double x) {
  const double u = std::clamp((x - e0) / (e1 - e0), 0.0, 1.0);
  return u * u * (3.0 - 2.0 * u);
}

// Torso yaw over the turn: swings sideways almost at once, holds, and squares
// up at the very end, so the elbow x-distance is low for nearly the whole turn.
double turn_yaw(double u) {
  const double c = 1.0 - 2.0 * u;
  return kPi / 2.0 - kPi / 2.0 * std::copysign(std::pow(std::abs(c), kYawSharpness), c);
}

// Kinematic state of the body at one instant, before noise.
struct BodyState {
  Vec3 hip;             // hip center
  double yaw = 0.0;     // torso yaw, 0 = facing the sensor
  double stand = 0.0;   // 0 seated pose, 1 standing pose
  double heel = 0.0;    // standing-pose z offset between the ankles (right - left)
  double gait_phase = 0.0;
  bool walking = false;
};

BodyState body_at(const GaitProfile& p, const Timeline& tl, double t) {
  const double n = p.step_count_oneway;
  const double sd = p.step_duration_s;
  const double amp = p.stride_m / 2.0;
  const double z_chair = p.chair_distance_m;
  const double z_stand = z_chair - p.standup_depth_m;
  const double z_turn = z_stand - p.walk_distance_m;
  const double speed = n > 0 ? p.walk_distance_m / (n * sd) : 0.0;
  const double last_sign = (p.step_count_oneway % 2 == 0) ? 1.0 : -1.0;
  const auto travel = [&](double tau) {
    return speed * (tau + kGaitBounce * sd / (2.0 * kPi) * std::sin(2.0 * kPi * tau / sd));
  };

  BodyState s;
  double z = z_chair;
  switch (tl.at(t)) {
    case Segment::Lead:
      break;
    case Segment::StandUp: {
      const double u = (t - tl.lead_end) / p.standup_s;
      s.stand = std::sin(kPi / 2.0 * u);
      z = z_chair - p.standup_depth_m * s.stand;
      s.heel = amp;
      break;
    }
    case Segment::WalkOut: {
      const double tau = t - tl.stand_end;
      s.stand = 1.0;
      s.walking = true;
      s.gait_phase = kPi * tau / sd;
      z = z_stand - travel(tau);
      s.heel = amp * std::cos(s.gait_phase);
      break;
    }
    case Segment::Turn: {
      const double u = (t - tl.walk_out_end) / p.turn_duration_s;
      s.stand = 1.0;
      s.yaw = turn_yaw(u);
      z = z_turn - kTurnDip * std::sin(kPi * u);
      s.heel = amp * (last_sign + (1.0 - last_sign) * smoothstep(0.3, 0.7, u));
      break;
    }
    case Segment::WalkBack: {
      const double tau = t - tl.turn_end;
      s.stand = 1.0;
      s.walking = true;
      s.yaw = kPi;
      s.gait_phase = kPi * tau / sd;
      z = z_turn + travel(tau);
      s.heel = amp * std::cos(s.gait_phase);
      break;
    }
    case Segment::SitDown: {
      const double u = (t - tl.walk_back_end) / p.standup_s;
      s.stand = std::sin(kPi / 2.0 * (1.0 - u));
      s.yaw = kPi;
      z = z_chair - p.standup_depth_m * s.stand;
      s.heel = amp * last_sign;
      break;
    }
    case Segment::Tail:
      s.yaw = tl.seated_only ? 0.0 : kPi;
      break;
  }
  const double sway = s.walking ? p.sway_amp_m * std::sin(s.gait_phase) : 0.0;
  const double bob = s.walking ? 0.02 * std::abs(std::sin(s.gait_phase)) : 0.0;
  s.hip = {sway, 0.5 + 0.45 * s.stand + bob, z};
  return s;
}

SkeletonFrame pose(const GaitProfile& p, const BodyState& s) {
  SkeletonFrame f;
  const Vec3 up{0.0, 1.0, 0.0};
  const Vec3 right{-std::cos(s.yaw), 0.0, std::sin(s.yaw)};
  const Vec3 forward{-std::sin(s.yaw), 0.0, -std::cos(s.yaw)};
  const double half = p.shoulder_width_m / 2.0;
  const double swing = s.walking ? p.arm_swing_m * std::sin(s.gait_phase) : 0.0;
  const Vec3& h = s.hip;

  f.at(Joint::HipCenter) = h;
  f.at(Joint::Spine) = h + up * 0.25;
  f.at(Joint::ShoulderCenter) = h + up * 0.5;
  f.at(Joint::Head) = h + up * 0.7;
  f.at(Joint::ShoulderR) = h + up * 0.5 + right * half;
  f.at(Joint::ShoulderL) = h + up * 0.5 - right * half;
  f.at(Joint::ElbowR) = h + up * 0.25 + right * half + forward * swing;
  f.at(Joint::ElbowL) = h + up * 0.25 - right * half - forward * swing;
  f.at(Joint::WristR) = f.at(Joint::ElbowR) + up * -0.25 + forward * (0.5 * swing);
  f.at(Joint::WristL) = f.at(Joint::ElbowL) + up * -0.25 - forward * (0.5 * swing);
  f.at(Joint::HandR) = f.at(Joint::WristR) + up * -0.08;
  f.at(Joint::HandL) = f.at(Joint::WristL) + up * -0.08;

  // The legs stay in the sensor frame: knees bend toward the sensor, and the
  // ankles' depth offset is exactly the scripted heel difference.
  const double bend = p.knee_bend_m * (s.walking ? 0.5 + 0.5 * std::abs(std::sin(s.gait_phase)) : 0.3);
  const auto leg = [&](Joint hip_j, Joint knee_j, Joint ankle_j, Joint foot_j, double side, double heel_half) {
    const Vec3 hip = h + Vec3{side * kHipHalfWidth, -0.05, 0.0};
    const Vec3 seated_knee{0.0, 0.0, -0.45};
    const Vec3 seated_ankle{0.0, -0.42, -0.45};
    const Vec3 standing_ankle{0.0, -0.87, heel_half};
    const Vec3 standing_knee = standing_ankle * 0.5 + Vec3{0.0, 0.0, -bend};
    const double b = s.stand;
    f.at(hip_j) = hip;
    f.at(knee_j) = hip + seated_knee * (1.0 - b) + standing_knee * b;
    f.at(ankle_j) = hip + seated_ankle * (1.0 - b) + standing_ankle * b;
    f.at(foot_j) = f.at(ankle_j) + Vec3{0.0, -0.03, -0.1};
  };
  leg(Joint::HipR, Joint::KneeR, Joint::AnkleR, Joint::FootR, -1.0, s.heel / 2.0);
  leg(Joint::HipL, Joint::KneeL, Joint::AnkleL, Joint::FootL, 1.0, -s.heel / 2.0);
  return f;
}

}  // namespace

void GaitProfile::validate() const {
  const auto fail = [](const std::string& why) { throw Error(ErrorCode::InvalidProfile, why); };
  if (!(fps > 0.0)) fail("fps must be positive");
  if (!(seated_lead_s > 0.0) || !(seated_tail_s > 0.0)) fail("seated durations must be positive");
  if (step_count_oneway < 0) fail("step count must be non-negative");
  if (!(noise_std_m >= 0.0)) fail("noise_std_m must be non-negative");
  if (!(dropout_prob >= 0.0 && dropout_prob < 1.0)) fail("dropout_prob must be in [0, 1)");
  if (step_count_oneway == 0) return;
  if (!(walk_distance_m > 0.0)) fail("walk_distance_m must be positive");
  if (!(standup_s > 0.0) || !(standup_depth_m > 0.0)) fail("stand-up duration and depth must be positive");
  if (!(step_duration_s > 0.0) || !(stride_m > 0.0) || !(turn_duration_s > 0.0)) {
    fail("step duration, stride and turn duration must be positive");
  }
  if (!(shoulder_width_m > 0.0)) fail("shoulder_width_m must be positive");
  if (!(sway_amp_m >= 0.0) || !(arm_swing_m >= 0.0) || !(knee_bend_m >= 0.0)) fail("amplitudes must be >= 0");
  if (std::abs(step_count_oneway * stride_m - walk_distance_m) > 0.1 * walk_distance_m) {
    fail("step_count_oneway * stride_m must be within 10% of walk_distance_m");
  }
  if (chair_distance_m - standup_depth_m - walk_distance_m - kTurnDip < 0.5) {
    fail("the walk would bring the subject closer than 0.5 m to the sensor");
  }
}

double GaitProfile::total_duration_s() const {
  if (step_count_oneway == 0) return seated_lead_s + seated_tail_s;
  return seated_lead_s + 2.0 * standup_s + 2.0 * step_count_oneway * step_duration_s + turn_duration_s +
         seated_tail_s;
}

std::size_t GaitProfile::frame_count() const {
  return static_cast<std::size_t>(std::llround(total_duration_s() * fps));
}

std::pair<Session, GroundTruth> generate_session(const GaitProfile& profile, std::uint64_t seed) {
  profile.validate();
  const Timeline tl(profile);
  const auto n = profile.frame_count();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, profile.noise_std_m > 0.0 ? profile.noise_std_m : 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Session session;
  session.frames.reserve(n);
  GroundTruth truth;
  truth.frame_count = n;
  truth.fps = profile.fps;
  std::vector<Phase> labels(n);
  std::vector<double> clean_heel(n);

  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / profile.fps;
    const auto state = body_at(profile, tl, t);
    auto frame = pose(profile, state);
    frame.t_ms = std::llround(static_cast<double>(k) * 1000.0 / profile.fps);
    if (profile.noise_std_m > 0.0) {
      for (auto& pos : frame.positions) pos += Vec3{noise(rng), noise(rng), noise(rng)};
    }
    if (profile.dropout_prob > 0.0) {
      for (std::size_t j = 0; j < kJointCount; ++j) frame.tracked[j] = unit(rng) >= profile.dropout_prob;
    }
    session.frames.push_back(std::move(frame));
    clean_heel[k] = state.stand * state.heel;

    switch (tl.at(t)) {
      case Segment::Lead:
      case Segment::Tail: labels[k] = Phase::Seated; break;
      case Segment::Turn: labels[k] = Phase::Turning; break;
      default: labels[k] = Phase::Walking; break;
    }
  }

  truth.seated = runs_of(labels, Phase::Seated);
  truth.walking = runs_of(labels, Phase::Walking);
  const auto turns = runs_of(labels, Phase::Turning);
  if (!turns.empty()) truth.turning = turns.front();

  // Crossings of the noise-free heel waveform, first frame of the new sign.
  for (const auto& iv : truth.walking) {
    int sign = 0;
    std::size_t prev = 0;
    bool have_prev = false;
    for (auto k = iv.first; k <= iv.last; ++k) {
      const int s = clean_heel[k] > 0.0 ? 1 : (clean_heel[k] < 0.0 ? -1 : sign);
      if (sign != 0 && s != sign) {
        truth.crossing_frames.push_back(k);
        if (have_prev) truth.step_durations_s.push_back(static_cast<double>(k - prev) / profile.fps);
        prev = k;
        have_prev = true;
      }
      sign = s;
    }
  }
  truth.num_steps = static_cast<std::size_t>(2 * profile.step_count_oneway);
  truth.turn_duration_s = tl.seated_only ? 0.0 : profile.turn_duration_s;
  truth.avg_step_duration_s = tl.seated_only ? 0.0 : profile.step_duration_s;
  return {std::move(session), std::move(truth)};
}

nlohmann::json to_json(const GroundTruth& truth) {
  const auto intervals = [](const std::vector<Interval>& v) {
    auto a = nlohmann::json::array();
    for (const auto& iv : v) a.push_back({iv.first, iv.last});
    return a;
  };
  nlohmann::json j;
  j["frame_count"] = truth.frame_count;
  j["fps"] = truth.fps;
  j["seated"] = intervals(truth.seated);
  j["walking"] = intervals(truth.walking);
  j["turning"] = truth.turning ? nlohmann::json{truth.turning->first, truth.turning->last} : nlohmann::json(nullptr);
  j["num_steps"] = truth.num_steps;
  j["crossing_frames"] = truth.crossing_frames;
  j["step_durations_s"] = truth.step_durations_s;
  j["avg_step_duration_s"] = truth.avg_step_duration_s;
  j["turn_duration_s"] = truth.turn_duration_s;
  return j;
}

void ProfileDistribution::validate() const {
  const auto fail = [](const std::string& why) { throw Error(ErrorCode::InvalidProfile, why); };
  if (step_count_min < 1 || step_count_max < step_count_min) fail("bad step count range");
  if (step_count_min - trial_step_jitter < 1) fail("step jitter can reach zero steps");
  if (!(step_duration_min > trial_step_duration_jitter_s) || step_duration_max < step_duration_min) {
    fail("bad step duration range");
  }
  if (!(turn_duration_min > trial_turn_jitter_s) || turn_duration_max < turn_duration_min) fail("bad turn range");
  if (knee_bend_max < knee_bend_min || knee_bend_min < 0.0) fail("bad knee bend range");
  if (trial_step_jitter < 0 || trial_step_duration_jitter_s < 0.0 || trial_turn_jitter_s < 0.0) {
    fail("jitters must be non-negative");
  }
}

ProfileDistribution separable_low_risk() {
  ProfileDistribution d;
  d.base.noise_std_m = 0.005;
  d.base.sway_amp_m = 0.015;
  d.base.arm_swing_m = 0.06;
  return d;
}

ProfileDistribution separable_high_risk() {
  ProfileDistribution d;
  d.base.noise_std_m = 0.005;
  d.base.sway_amp_m = 0.04;
  d.base.arm_swing_m = 0.02;
  d.step_count_min = 9;
  d.step_count_max = 12;
  d.step_duration_min = 0.75;
  d.step_duration_max = 0.95;
  d.turn_duration_min = 2.6;
  d.turn_duration_max = 4.0;
  d.knee_bend_min = 0.015;
  d.knee_bend_max = 0.035;
  return d;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the pair.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Cohort generate_cohort(const CohortSpec& spec, std::uint64_t seed) {
  spec.low.validate();
  spec.high.validate();
  if (spec.trials_min < 1 || spec.trials_max < spec.trials_min) {
    throw Error(ErrorCode::InvalidProfile, "trials per subject must satisfy 1 <= min <= max");
  }
  if (spec.low_subjects + spec.high_subjects == 0) throw Error(ErrorCode::InvalidProfile, "empty cohort");

  Cohort cohort;
  const auto total = spec.low_subjects + spec.high_subjects;
  for (std::size_t s = 0; s < total; ++s) {
    const bool low = s < spec.low_subjects;
    const auto& dist = low ? spec.low : spec.high;
    const auto subject_seed = derive_seed(seed, s);
    std::mt19937_64 rng(subject_seed);
    const auto uniform = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    const auto uniform_int = [&](auto a, auto b) { return std::uniform_int_distribution<decltype(a)>(a, b)(rng); };

    GaitProfile subject = dist.base;
    const int steps = uniform_int(dist.step_count_min, dist.step_count_max);
    const double step_s = uniform(dist.step_duration_min, dist.step_duration_max);
    const double turn_s = uniform(dist.turn_duration_min, dist.turn_duration_max);
    subject.knee_bend_m = uniform(dist.knee_bend_min, dist.knee_bend_max);
    const auto trials = uniform_int(spec.trials_min, spec.trials_max);

    const auto number = std::to_string(s + 1);
    const auto subject_id = "S" + std::string(number.size() < 2 ? 2 - number.size() : 0, '0') + number;
    for (std::size_t t = 0; t < trials; ++t) {
      GaitProfile p = subject;
      p.step_count_oneway = std::max(1, steps + uniform_int(-dist.trial_step_jitter, dist.trial_step_jitter));
      p.stride_m = p.walk_distance_m / p.step_count_oneway;
      p.step_duration_s = step_s + uniform(-dist.trial_step_duration_jitter_s, dist.trial_step_duration_jitter_s);
      p.turn_duration_s = turn_s + uniform(-dist.trial_turn_jitter_s, dist.trial_turn_jitter_s);
      auto [session, truth] = generate_session(p, derive_seed(subject_seed, 1000 + t));
      session.subject_id = subject_id;
      session.trial_id = "T" + std::to_string(t + 1);
      session.label = low ? RiskLabel::LowRisk : RiskLabel::HighRisk;
      cohort.dataset.sessions.push_back(std::move(session));
      cohort.truths.push_back(std::move(truth));
      cohort.profiles.push_back(p);
    }
  }
  return cohort;
}

}  // namespace gugt
