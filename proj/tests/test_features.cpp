#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "gugt/error.hpp"
#include "gugt/features.hpp"
#include "gugt/pipeline.hpp"
#include "gugt/synthgen.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace gugt;

namespace {

constexpr double kPi = std::numbers::pi;

TimeSeries series(std::vector<double> values, double fps = 30.0) {
  TimeSeries ts;
  for (std::size_t i = 0; i < values.size(); ++i) ts.t_ms.push_back(std::llround(static_cast<double>(i) * 1000.0 / fps));
  ts.values = std::move(values);
  return ts;
}

std::vector<std::pair<std::size_t, std::size_t>> pairs(std::span<const Interval> ivs) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& iv : ivs) out.emplace_back(iv.first, iv.last);
  return out;
}

Session frames_at(const std::vector<std::int64_t>& t_ms) {
  Session s;
  for (auto t : t_ms) s.frames.push_back(testing_helpers::frame_at(t));
  return s;
}

// Pose with straight legs, elbows 0.5 m apart and a 0.2 m stance.
SkeletonFrame upright() {
  SkeletonFrame f;
  f.at(Joint::HipCenter) = {0.0, 0.0, 3.0};
  f.at(Joint::ElbowR) = {0.25, 0.2, 3.0};
  f.at(Joint::ElbowL) = {-0.25, 0.2, 3.0};
  f.at(Joint::HipR) = {0.1, 0.0, 3.0};
  f.at(Joint::KneeR) = {0.1, -0.45, 3.0};
  f.at(Joint::AnkleR) = {0.1, -0.9, 3.0};
  f.at(Joint::HipL) = {-0.1, 0.0, 3.0};
  f.at(Joint::KneeL) = {-0.1, -0.45, 3.0};
  f.at(Joint::AnkleL) = {-0.1, -0.9, 3.0};
  return f;
}

}  // namespace

TEST_CASE("heel difference") {
  auto s = testing_helpers::constant_session(10);
  const auto flat = heel_depth_difference(s);
  for (double v : flat.values) CHECK(v == 0.0);

  const auto [g, truth] = generate_session(testing_helpers::profile(4, 0.6, 1.5), 1);
  auto p = testing_helpers::profile(4, 0.6, 1.5);
  p.stride_m = 0.3;
  p.walk_distance_m = 1.2;
  const auto [w, wt] = generate_session(p, 1);
  const auto h = heel_depth_difference(w);
  const auto [lo, hi] = std::minmax_element(h.values.begin(), h.values.end());
  CHECK(*hi == doctest::Approx(0.15).epsilon(0.01));
  CHECK(*lo == doctest::Approx(-0.15).epsilon(0.01));

  auto swapped = g;
  for (auto& f : swapped.frames) std::swap(f.at(Joint::AnkleR), f.at(Joint::AnkleL));
  const auto a = heel_depth_difference(g);
  const auto b = heel_depth_difference(swapped);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(b.values[i] == -a.values[i]);
}

TEST_CASE("step detection basics") {
  const std::vector<Interval> all{{0, 99}};
  CHECK(detect_steps(series(std::vector<double>(100, 0.0)), all, {}).step_count == 0);

  std::vector<double> flicker(100);
  for (std::size_t i = 0; i < flicker.size(); ++i) flicker[i] = i % 2 ? 0.01 : -0.01;
  CHECK(detect_steps(series(flicker), all, {}).step_count == 0);

  // +0.1 for 10 frames, -0.1 for 10 frames, ... : every sign change counts
  std::vector<double> square(100);
  for (std::size_t i = 0; i < square.size(); ++i) square[i] = (i / 10) % 2 ? -0.1 : 0.1;
  const auto ev = detect_steps(series(square), all, {});
  CHECK(ev.step_count == 9);
  CHECK(ev.crossing_frames.front() == 10);

  // the last of several sign changes between two excursions is kept
  const std::vector<double> chatter{0.1, 0.02, -0.01, 0.01, -0.02, -0.1};
  const auto c = detect_steps(series(chatter), std::vector<Interval>{{0, 5}}, {});
  REQUIRE(c.step_count == 1);
  CHECK(c.crossing_frames[0] == 4);

  // a zero sample belongs to the run before it
  const std::vector<double> zero{0.1, 0.0, -0.1};
  CHECK(detect_steps(series(zero), std::vector<Interval>{{0, 2}}, {}).crossing_frames ==
        std::vector<std::size_t>{2});
}

TEST_CASE("only walking intervals are scanned") {
  std::vector<double> square(100);
  for (std::size_t i = 0; i < square.size(); ++i) square[i] = (i / 10) % 2 ? -0.1 : 0.1;
  const std::vector<Interval> walking{{0, 35}, {60, 99}};
  const auto ev = detect_steps(series(square), walking, {});
  CHECK(ev.crossing_frames == std::vector<std::size_t>{10, 20, 30, 70, 80, 90});
  for (auto c : ev.crossing_frames) {
    CHECK(std::any_of(walking.begin(), walking.end(), [&](const Interval& iv) { return iv.contains(c); }));
  }
}

TEST_CASE("step detection matches the brute-force oracle") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 5 + rng() % 200;
    std::vector<double> v(n);
    // random walk with occasional exact zeros
    std::normal_distribution<double> step(0.0, 0.04);
    double x = 0.0;
    for (auto& s : v) {
      x = std::clamp(x + step(rng), -0.2, 0.2);
      s = rng() % 15 == 0 ? 0.0 : x;
    }
    std::vector<Interval> walking;
    std::size_t a = rng() % 5;
    while (a < n) {
      const std::size_t b = std::min(n - 1, a + rng() % 60);
      walking.push_back({a, b});
      a = b + 2 + rng() % 10;
    }
    SegmentationParams params;
    params.step_amplitude_m = std::uniform_real_distribution<double>(0.01, 0.1)(rng);
    const auto ev = detect_steps(series(v), walking, params);
    CHECK(ev.crossing_frames == oracle::step_crossings(v, pairs(walking), params.step_amplitude_m));
    CHECK(ev.step_count == ev.crossing_frames.size());
  }
}

TEST_CASE("scripted gait") {
  const auto p = testing_helpers::profile(8, 0.6, 1.5);
  const auto [s, truth] = generate_session(p, 1);
  const auto a = analyze_session(s, {});
  CHECK(a.gait.num_steps == 16);
  CHECK(a.steps.crossing_frames.size() == truth.crossing_frames.size());
  CHECK(a.gait.avg_step_duration_s == doctest::Approx(0.6).epsilon(0.01 / 0.6));
  CHECK(a.gait.turn_duration_s == doctest::Approx(1.5).epsilon(0.2 / 1.5));

  const auto q = testing_helpers::profile(6, 0.55, 2.0);
  const auto [s2, t2] = generate_session(q, 1);
  const auto b = analyze_session(s2, {});
  CHECK(b.gait.avg_step_duration_s == doctest::Approx(0.55).epsilon(0.05 / 0.55));
}

TEST_CASE("gait feature arithmetic") {
  SUBCASE("turn of 45 frames at 30 fps") {
    std::vector<std::int64_t> t;
    for (int k = 0; k < 400; ++k) t.push_back(std::llround(k * 1000.0 / 30.0));
    const auto s = frames_at(t);
    PhaseSegmentation seg;
    seg.frame_count = 400;
    seg.turning = {300, 345};
    seg.walking = {{0, 299}, {346, 399}};
    StepEvents steps{{10, 40}, 2};
    const auto g = gait_features(seg, steps, s);
    CHECK(g.turn_duration_s == doctest::Approx(1.5));
    double sum = 0.0;
    for (auto k = seg.turning.first; k < seg.turning.last; ++k) sum += static_cast<double>(t[k + 1] - t[k]);
    CHECK(g.turn_duration_s == doctest::Approx(sum / 1000.0));
  }
  SUBCASE("mean crossing interval") {
    std::vector<std::int64_t> t;
    for (int k = 0; k < 300; ++k) t.push_back(k * 100);
    const auto s = frames_at(t);
    PhaseSegmentation seg;
    seg.frame_count = 300;
    seg.turning = {150, 160};
    seg.walking = {{0, 149}, {161, 299}};
    StepEvents steps{{10, 16, 22}, 3};
    CHECK(gait_features(seg, steps, s).avg_step_duration_s == doctest::Approx(0.6));
    // pairs across the turn do not count
    steps = {{10, 16, 22, 170, 174}, 5};
    const auto g = gait_features(seg, steps, s);
    CHECK(g.avg_step_duration_s == doctest::Approx((0.6 + 0.6 + 0.4) / 3));
    CHECK(g.num_steps == 5);
  }
  SUBCASE("no usable pair") {
    const auto s = frames_at({0, 33, 66, 99});
    PhaseSegmentation seg;
    seg.frame_count = 4;
    seg.turning = {2, 2};
    seg.walking = {{0, 1}, {3, 3}};
    try {
      gait_features(seg, {{1, 3}, 2}, s);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NoSteps);
    }
  }
}

TEST_CASE("angle_between") {
  const Vec3 u{1.0, 2.0, -0.5};
  CHECK(angle_between(u, u) == doctest::Approx(0.0));
  CHECK(angle_between({1, 0, 0}, {0, 3, 0}) == doctest::Approx(kPi / 2));
  CHECK(angle_between(u, -1.0 * u) == doctest::Approx(kPi));
  CHECK_THROWS_AS(angle_between({0, 0, 0}, u), Error);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 a{g(rng), g(rng), g(rng)}, b{g(rng), g(rng), g(rng)};
    const double th = angle_between(a, b);
    CHECK(th >= 0.0);
    CHECK(th <= kPi);
  }
}

TEST_CASE("anatomical features of known poses") {
  Session s;
  s.frames.push_back(upright());
  auto bent = upright();
  bent.at(Joint::AnkleR) = {0.1, -0.45, 2.55};  // shank horizontal
  bent.t_ms = 33;
  s.frames.push_back(bent);
  const auto rows = anatomical_features(s);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].elbow_distance_m == doctest::Approx(0.5));
  CHECK(rows[0].knee_right_rad == doctest::Approx(kPi));
  CHECK(rows[0].knee_left_rad == doctest::Approx(kPi));
  CHECK(rows[0].leg_angle_rad == doctest::Approx(2.0 * std::atan2(0.1, 0.45)));
  CHECK(rows[1].knee_right_rad == doctest::Approx(kPi / 2));
  CHECK(rows[1].t_ms == 33);
}

TEST_CASE("frames missing a required joint are skipped") {
  Session s;
  for (int k = 0; k < 5; ++k) {
    auto f = upright();
    f.t_ms = k;
    s.frames.push_back(f);
  }
  s.frames[1].tracked[index(Joint::KneeL)] = false;
  s.frames[3].tracked[index(Joint::Head)] = false;  // not needed
  const auto rows = anatomical_features(s);
  REQUIRE(rows.size() == 4);
  CHECK(rows[1].t_ms == 2);
  for (auto& f : s.frames) f.tracked.assign(kJointCount, false);
  CHECK(anatomical_features(s).empty());
}

TEST_CASE("anatomical invariance") {
  auto p = testing_helpers::profile(6, 0.6, 1.5, 0.005);
  const auto [s, truth] = generate_session(p, 12);
  const auto base = anatomical_features(s);
  CHECK(base.size() <= s.frames.size());
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 5; ++trial) {
    const Vec3 shift{u(rng), u(rng), u(rng)};
    const double scale = std::exp(u(rng));
    const Vec3 center{u(rng), u(rng), u(rng)};
    auto moved = s;
    auto scaled = s;
    for (std::size_t k = 0; k < s.frames.size(); ++k) {
      for (std::size_t j = 0; j < kJointCount; ++j) {
        moved.frames[k].positions[j] = s.frames[k].positions[j] + shift;
        scaled.frames[k].positions[j] = center + scale * (s.frames[k].positions[j] - center);
      }
    }
    const auto m = anatomical_features(moved);
    const auto c = anatomical_features(scaled);
    REQUIRE(m.size() == base.size());
    REQUIRE(c.size() == base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      CHECK(m[i].elbow_distance_m == doctest::Approx(base[i].elbow_distance_m).epsilon(1e-9));
      CHECK(m[i].leg_angle_rad == doctest::Approx(base[i].leg_angle_rad).epsilon(1e-6));
      CHECK(m[i].knee_right_rad == doctest::Approx(base[i].knee_right_rad).epsilon(1e-6));
      CHECK(m[i].knee_left_rad == doctest::Approx(base[i].knee_left_rad).epsilon(1e-6));
      CHECK(c[i].leg_angle_rad == doctest::Approx(base[i].leg_angle_rad).epsilon(1e-6));
      CHECK(c[i].knee_right_rad == doctest::Approx(base[i].knee_right_rad).epsilon(1e-6));
      CHECK(c[i].knee_left_rad == doctest::Approx(base[i].knee_left_rad).epsilon(1e-6));
    }
  }
}

TEST_CASE("elbow distance of a synthetic walker") {
  auto p = testing_helpers::profile(6, 0.6, 1.5);
  const auto [s, truth] = generate_session(p, 2);
  const auto rows = anatomical_features(s);
  for (const auto& iv : truth.walking) {
    for (auto k = iv.first; k <= iv.last; ++k) {
      CHECK(rows[k].elbow_distance_m >= p.shoulder_width_m - 2 * p.sway_amp_m - 2 * p.arm_swing_m);
      CHECK(rows[k].elbow_distance_m <= p.shoulder_width_m + 2 * p.sway_amp_m + 2 * p.arm_swing_m);
    }
  }
  for (const auto& r : rows) {
    CHECK(r.leg_angle_rad >= 0.0);
    CHECK(r.leg_angle_rad <= kPi);
  }
}

TEST_CASE("feature csv exports") {
  const auto [s, truth] = generate_session(testing_helpers::profile(4, 0.5, 1.0), 1);
  const auto a = analyze_session(s, {});
  std::ostringstream anat, heel;
  write_anatomical_csv(a.anatomy, anat);
  write_heel_csv(a.heel_difference, a.steps, heel);
  CHECK(anat.str().rfind("t_ms,elbow_m,leg_rad,kneeR_rad,kneeL_rad\n", 0) == 0);
  CHECK(heel.str().rfind("t_ms,value,crossing\n", 0) == 0);
  std::istringstream in(heel.str());
  std::string line;
  std::getline(in, line);
  std::size_t marked = 0, rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    if (line.back() == '1') ++marked;
  }
  CHECK(rows == s.frames.size());
  CHECK(marked == a.steps.step_count);
}
