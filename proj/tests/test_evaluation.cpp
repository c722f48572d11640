#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "gugt/error.hpp"
#include "gugt/evaluation.hpp"
#include "gugt/synthgen.hpp"
#include "helpers.hpp"

using namespace gugt;

namespace {

const Cohort& small_cohort() {
  static const Cohort cohort = [] {
    CohortSpec spec;
    spec.low_subjects = 2;
    spec.high_subjects = 2;
    spec.trials_min = 3;
    spec.trials_max = 4;
    return generate_cohort(spec, 5);
  }();
  return cohort;
}

const std::vector<SampleFeatures>& small_samples() {
  static const auto samples = extract_samples(small_cohort().dataset, {});
  return samples;
}

LabeledDataset labeled(const std::vector<std::pair<std::string, RiskLabel>>& subjects_and_labels) {
  LabeledDataset d;
  int trial = 0;
  for (const auto& [subject, label] : subjects_and_labels) {
    Session s = testing_helpers::constant_session(3);
    s.subject_id = subject;
    s.trial_id = "T" + std::to_string(++trial);
    s.label = label;
    d.sessions.push_back(s);
  }
  return d;
}

}  // namespace

TEST_CASE("confusion matrix arithmetic") {
  ConfusionMatrix m;
  m.add(RiskLabel::LowRisk, RiskLabel::LowRisk);
  m.add(RiskLabel::LowRisk, RiskLabel::HighRisk);
  m.add(RiskLabel::HighRisk, RiskLabel::HighRisk);
  m.add(RiskLabel::HighRisk, RiskLabel::HighRisk);
  CHECK(m.counts[0][0] == 1);
  CHECK(m.counts[0][1] == 1);
  CHECK(m.counts[1][1] == 2);
  CHECK(m.total() == 4);
  CHECK(accuracy_from_confusion(m) == 0.75);
  CHECK_THROWS_AS(m.add(RiskLabel::Unlabeled, RiskLabel::LowRisk), Error);
}

TEST_CASE("averaged confusion matrix from the clinical study") {
  ConfusionMatrix m;
  m.counts = {{{16.2, 7.8}, {8.5, 17.5}}};
  CHECK(m.total() == doctest::Approx(50.0));
  const double acc = accuracy_from_confusion(m);
  CHECK(acc == doctest::Approx(0.674).epsilon(1e-12));
  CHECK(std::round(acc * 10000.0) / 100.0 == 67.40);
}

TEST_CASE("loso_split") {
  SUBCASE("one fold per subject in sorted order") {
    std::vector<std::pair<std::string, RiskLabel>> subjects;
    for (int s = 12; s >= 1; --s) {
      for (int t = 0; t < 3 + s % 4; ++t) {
        subjects.emplace_back("S" + std::string(s < 10 ? "0" : "") + std::to_string(s),
                              s % 2 ? RiskLabel::LowRisk : RiskLabel::HighRisk);
      }
    }
    const auto d = labeled(subjects);
    const auto folds = loso_split(d);
    REQUIRE(folds.size() == 12);
    std::vector<int> tested(d.sessions.size(), 0);
    for (std::size_t f = 0; f < folds.size(); ++f) {
      if (f > 0) CHECK(folds[f - 1].held_out_subject < folds[f].held_out_subject);
      for (auto i : folds[f].test) {
        ++tested[i];
        CHECK(d.sessions[i].subject_id == folds[f].held_out_subject);
      }
      for (auto i : folds[f].train) CHECK(d.sessions[i].subject_id != folds[f].held_out_subject);
      CHECK(folds[f].train.size() + folds[f].test.size() == d.sessions.size());
    }
    for (int t : tested) CHECK(t == 1);
  }
  SUBCASE("two subjects with three trials") {
    const auto d = labeled({{"A", RiskLabel::LowRisk},
                            {"A", RiskLabel::LowRisk},
                            {"B", RiskLabel::HighRisk},
                            {"A", RiskLabel::LowRisk},
                            {"B", RiskLabel::HighRisk},
                            {"B", RiskLabel::HighRisk}});
    const auto folds = loso_split(d);
    REQUIRE(folds.size() == 2);
    CHECK(folds[0].test == std::vector<std::size_t>{0, 1, 3});
    CHECK(folds[1].test == std::vector<std::size_t>{2, 4, 5});
  }
  SUBCASE("a single subject is rejected") {
    try {
      loso_split(labeled({{"A", RiskLabel::LowRisk}, {"A", RiskLabel::HighRisk}}));
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::TooFewSubjects);
    }
  }
}

TEST_CASE("loso on a separable cohort") {
  const auto& cohort = small_cohort();
  const auto& samples = small_samples();
  for (const auto& s : samples) REQUIRE(s.usable());
  const auto folds = loso_split(cohort.dataset);
  const auto r = run_loso(samples, folds, {}, 3);
  CHECK(r.accuracy == 1.0);
  CHECK(r.confusion.total() == static_cast<double>(cohort.dataset.sessions.size()));
  CHECK(r.accuracy == accuracy_from_confusion(r.confusion));
  std::vector<int> tested(samples.size(), 0);
  for (const auto& p : r.predictions) {
    ++tested[p.sample];
    CHECK_FALSE(p.failed);
    CHECK(samples[p.sample].subject == folds[p.fold].held_out_subject);
  }
  for (int t : tested) CHECK(t == 1);
  CHECK(audit_violations(r, samples).empty());
  // every fitted object is audited, and never with the held-out subject
  std::map<std::string, int> objects;
  for (const auto& a : r.audit) {
    ++objects[a.object];
    for (auto i : a.samples) CHECK(samples[i].subject != a.held_out_subject);
  }
  CHECK(objects["scaler+codebook"] == static_cast<int>(folds.size()));
  CHECK(objects["svm"] == static_cast<int>(folds.size()));
}

TEST_CASE("the audit catches leakage") {
  const auto& samples = small_samples();
  auto folds = loso_split(small_cohort().dataset);
  folds[0].train.push_back(folds[0].test.front());
  const auto r = run_loso(samples, folds, {}, 1);
  CHECK(audit_violations(r, samples).size() >= 2);
}

TEST_CASE("failed extractions count as errors") {
  auto samples = small_samples();
  samples[0].gait.reset();
  samples[0].failure = "NoSteps: test";
  samples[5].anatomy.clear();
  samples[5].failure = "EmptyStream: test";
  const auto folds = loso_split(small_cohort().dataset);
  const auto r = run_loso(samples, folds, {}, 1);
  CHECK(r.confusion.total() == static_cast<double>(samples.size()));
  std::size_t failed = 0;
  for (const auto& p : r.predictions) {
    if (p.sample == 0 || p.sample == 5) {
      CHECK(p.failed);
      CHECK(p.predicted != p.truth);
      ++failed;
    }
  }
  CHECK(failed == 2);
  CHECK(r.accuracy == doctest::Approx(static_cast<double>(samples.size() - 2) / samples.size()));
  // failed samples never enter training
  for (const auto& a : r.audit) {
    if (a.object == "excluded") continue;
    for (auto i : a.samples) CHECK((i != 0 && i != 5));
  }
}

TEST_CASE("fold errors name the fold") {
  const auto& samples = small_samples();
  const auto folds = loso_split(small_cohort().dataset);
  EvalConfig cfg;
  cfg.k = 1000000;
  try {
    run_loso(samples, folds, cfg, 1);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewPoints);
    CHECK(std::string(e.what()).find("fold " + folds[0].held_out_subject) != std::string::npos);
  }
}

TEST_CASE("repeated evaluation") {
  const auto& samples = small_samples();
  const auto folds = loso_split(small_cohort().dataset);
  EvalConfig cfg;
  cfg.k = 6;
  const auto one = repeat_evaluation(samples, folds, cfg, 1, 11);
  CHECK(one.std_accuracy == 0.0);
  CHECK(one.repetitions.front().seed == 11);

  const auto a = repeat_evaluation(samples, folds, cfg, 3, 20);
  const auto b = repeat_evaluation(samples, folds, cfg, 3, 20);
  CHECK(to_json(a).dump() == to_json(b).dump());
  for (std::size_t r = 0; r < 3; ++r) CHECK(a.repetitions[r].seed == 20 + r);
  CHECK(std::abs(a.mean_accuracy - accuracy_from_confusion(a.mean_confusion)) <= 1e-9);
  CHECK_THROWS_AS(repeat_evaluation(samples, folds, cfg, 0, 1), Error);

  const auto j = to_json(a);
  CHECK(j.at("config").at("k") == 6);
  CHECK(j.at("config").at("seeds") == nlohmann::json{20, 21, 22});
  CHECK(j.at("per_repetition").size() == 3);
  CHECK(j.at("audit_violations").empty());
}

TEST_CASE("aggregate uses the population deviation") {
  EvalReport report;
  for (double acc : {0.5, 1.0}) {
    LosoResult r;
    r.accuracy = acc;
    r.confusion.counts = {{{acc * 2, 2 - acc * 2}, {0, 0}}};
    report.repetitions.push_back(r);
  }
  aggregate(report);
  CHECK(report.mean_accuracy == 0.75);
  CHECK(report.std_accuracy == 0.25);
  CHECK(report.mean_confusion.counts[0][0] == 1.5);
}

TEST_CASE("cluster sweep") {
  const auto& samples = small_samples();
  const auto folds = loso_split(small_cohort().dataset);
  const auto single = sweep_clusters(samples, folds, {}, 5, 5, 1, 1);
  REQUIRE(single.rows.size() == 1);
  CHECK(single.best_k == 5);
  const auto range = sweep_clusters(samples, folds, {}, 4, 7, 1, 1);
  REQUIRE(range.rows.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(range.rows[i].k == 4 + i);
    CHECK(range.rows[i].std_accuracy == 0.0);
  }
  std::ostringstream out;
  write_sweep_csv(range, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "K,mean_acc,std_acc");
  std::getline(in, line);
  CHECK(line.rfind("4,", 0) == 0);
  CHECK_THROWS_AS(sweep_clusters(samples, folds, {}, 5, 4, 1, 1), Error);
}

TEST_CASE("label shuffling") {
  const auto& d = small_cohort().dataset;
  const auto a = shuffle_labels(d, 3);
  const auto b = shuffle_labels(d, 3);
  REQUIRE(a.sessions.size() == d.sessions.size());
  std::multiset<RiskLabel> before, after;
  for (std::size_t i = 0; i < d.sessions.size(); ++i) {
    before.insert(d.sessions[i].label);
    after.insert(a.sessions[i].label);
    CHECK(a.sessions[i].label == b.sessions[i].label);
    CHECK(a.sessions[i].frames == d.sessions[i].frames);
  }
  CHECK(before == after);
}

TEST_CASE("every cluster count separates the full synthetic cohort") {
  const auto cohort = generate_cohort({}, 7);
  const auto samples = extract_samples(cohort.dataset, {});
  const auto folds = loso_split(cohort.dataset);
  const auto sweep = sweep_clusters(samples, folds, {}, 4, 24, 1, 1);
  REQUIRE(sweep.rows.size() == 21);
  for (const auto& row : sweep.rows) CHECK(row.mean_accuracy >= 0.9);
}
