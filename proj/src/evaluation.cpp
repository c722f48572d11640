#include "gugt/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <random>
#include <set>

#include "gugt/error.hpp"
#include "gugt/synthgen.hpp"

namespace gugt {

namespace {

std::size_t slot(RiskLabel label) {
  switch (label) {
    case RiskLabel::LowRisk: return 0;
    case RiskLabel::HighRisk: return 1;
    case RiskLabel::Unlabeled: break;
  }
  throw Error(ErrorCode::InvalidConfig, "confusion matrix needs labeled samples");
}

RiskLabel opposite(RiskLabel label) {
  return label == RiskLabel::LowRisk ? RiskLabel::HighRisk : RiskLabel::LowRisk;
}

}  // namespace

void ConfusionMatrix::add(RiskLabel truth, RiskLabel predicted) { counts[slot(truth)][slot(predicted)] += 1.0; }

double ConfusionMatrix::total() const {
  return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
}

double ConfusionMatrix::trace() const { return counts[0][0] + counts[1][1]; }

double accuracy_from_confusion(const ConfusionMatrix& m) {
  const double total = m.total();
  return total > 0.0 ? m.trace() / total : 0.0;
}

std::vector<LosoFold> loso_split(const LabeledDataset& dataset) {
  std::map<std::string, std::vector<std::size_t>> by_subject;
  for (std::size_t i = 0; i < dataset.sessions.size(); ++i) by_subject[dataset.sessions[i].subject_id].push_back(i);
  if (by_subject.size() < 2) {
    throw Error(ErrorCode::TooFewSubjects, "LOSO requires >=2 subjects, got " + std::to_string(by_subject.size()));
  }
  std::vector<LosoFold> folds;
  for (const auto& [subject, test] : by_subject) {
    LosoFold fold{subject, {}, test};
    for (std::size_t i = 0; i < dataset.sessions.size(); ++i) {
      if (dataset.sessions[i].subject_id != subject) fold.train.push_back(i);
    }
    folds.push_back(std::move(fold));
  }
  return folds;
}

std::vector<SampleFeatures> extract_samples(const LabeledDataset& dataset, const PipelineParams& params) {
  std::vector<SampleFeatures> out;
  out.reserve(dataset.sessions.size());
  for (const auto& s : dataset.sessions) {
    SampleFeatures f;
    f.sample_id = s.subject_id + "/" + s.trial_id;
    f.subject = s.subject_id;
    f.label = s.label;
    try {
      const auto a = analyze_session(s, params);
      f.gait = a.gait;
      f.anatomy = to_points(a.anatomy);
      if (f.anatomy.empty()) f.failure = "EmptyStream: no frame has all anatomical joints tracked";
    } catch (const Error& e) {
      f.failure = std::string(to_string(e.code())) + ": " + e.what();
    }
    out.push_back(std::move(f));
  }
  return out;
}

LosoResult run_loso(const std::vector<SampleFeatures>& samples, const std::vector<LosoFold>& folds,
                    const EvalConfig& config, std::uint64_t seed) {
  LosoResult result;
  result.seed = seed;
  for (std::size_t fi = 0; fi < folds.size(); ++fi) {
    const auto& fold = folds[fi];
    try {
      std::vector<std::size_t> used, excluded;
      for (const auto i : fold.train) (samples[i].usable() ? used : excluded).push_back(i);
      if (!excluded.empty()) result.audit.push_back({fi, fold.held_out_subject, "excluded", excluded});
      if (used.empty()) throw Error(ErrorCode::EmptyTrainingSet, "no usable training samples");

      std::vector<FeaturePoint> frames;
      for (const auto i : used) frames.insert(frames.end(), samples[i].anatomy.begin(), samples[i].anatomy.end());
      const auto codebook = fit_codebook(frames, config.k, derive_seed(seed, fi), config.kmeans);
      result.audit.push_back({fi, fold.held_out_subject, "scaler+codebook", used});

      std::vector<std::vector<double>> X;
      std::vector<int> y;
      std::vector<std::string> groups;
      for (const auto i : used) {
        X.push_back(build_feature_vector(*samples[i].gait, bow_histogram(codebook, samples[i].anatomy)));
        y.push_back(to_svm_label(samples[i].label));
        groups.push_back(samples[i].subject);
      }
      auto params = config.svm;
      if (config.tune_svm) {
        params = select_svm_params(X, y, groups, config.svm);
        result.audit.push_back({fi, fold.held_out_subject, "svm_tuning", used});
      }
      const auto trained = svm_train(X, y, params);
      result.audit.push_back({fi, fold.held_out_subject, "svm", used});
      if (!trained.converged) {
        result.notes.push_back("fold " + fold.held_out_subject + ": SMO hit the iteration cap with " +
                               std::to_string(trained.kkt_violations) + " KKT violations");
      }

      for (const auto i : fold.test) {
        const auto& s = samples[i];
        SamplePrediction p{i, fi, s.label, opposite(s.label), 0.0, true};
        if (s.usable()) {
          const auto pred =
              svm_predict(trained.model, build_feature_vector(*s.gait, bow_histogram(codebook, s.anatomy)));
          p.predicted = pred.label;
          p.decision_value = pred.decision_value;
          p.failed = false;
        }
        result.confusion.add(p.truth, p.predicted);
        result.predictions.push_back(p);
      }
    } catch (const Error& e) {
      throw Error(e.code(), "fold " + fold.held_out_subject + ": " + e.what());
    }
  }
  result.accuracy = accuracy_from_confusion(result.confusion);
  return result;
}

LosoResult run_loso(const LabeledDataset& dataset, const EvalConfig& config, std::uint64_t seed,
                    const PipelineParams& pipeline) {
  const auto folds = loso_split(dataset);
  return run_loso(extract_samples(dataset, pipeline), folds, config, seed);
}

std::vector<std::string> audit_violations(const LosoResult& result, const std::vector<SampleFeatures>& samples) {
  std::vector<std::string> out;
  for (const auto& entry : result.audit) {
    if (entry.object == "excluded") continue;
    for (const auto i : entry.samples) {
      if (samples[i].subject == entry.held_out_subject) {
        out.push_back("seed " + std::to_string(result.seed) + " fold " + entry.held_out_subject + ": " +
                      entry.object + " touched " + samples[i].sample_id);
      }
    }
  }
  return out;
}

void aggregate(EvalReport& report) {
  const auto n = static_cast<double>(report.repetitions.size());
  report.mean_accuracy = 0.0;
  report.std_accuracy = 0.0;
  report.mean_confusion = {};
  if (report.repetitions.empty()) return;
  for (const auto& r : report.repetitions) {
    report.mean_accuracy += r.accuracy;
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t b = 0; b < 2; ++b) report.mean_confusion.counts[a][b] += r.confusion.counts[a][b];
    }
  }
  report.mean_accuracy /= n;
  for (auto& row : report.mean_confusion.counts) {
    for (auto& v : row) v /= n;
  }
  double var = 0.0;
  for (const auto& r : report.repetitions) var += (r.accuracy - report.mean_accuracy) * (r.accuracy - report.mean_accuracy);
  report.std_accuracy = std::sqrt(var / n);
}

EvalReport repeat_evaluation(const std::vector<SampleFeatures>& samples, const std::vector<LosoFold>& folds,
                             const EvalConfig& config, std::size_t n_reps, std::uint64_t base_seed) {
  if (n_reps == 0) throw Error(ErrorCode::InvalidConfig, "n_reps must be >= 1");
  EvalReport report;
  report.config = config;
  report.base_seed = base_seed;
  for (const auto& s : samples) report.sample_ids.push_back(s.sample_id);
  for (std::size_t r = 0; r < n_reps; ++r) {
    report.repetitions.push_back(run_loso(samples, folds, config, base_seed + r));
    const auto v = audit_violations(report.repetitions.back(), samples);
    report.audit_violations.insert(report.audit_violations.end(), v.begin(), v.end());
  }
  aggregate(report);
  return report;
}

EvalReport repeat_evaluation(const LabeledDataset& dataset, const EvalConfig& config, std::size_t n_reps,
                             std::uint64_t base_seed, const PipelineParams& pipeline) {
  const auto folds = loso_split(dataset);
  auto report = repeat_evaluation(extract_samples(dataset, pipeline), folds, config, n_reps, base_seed);
  report.pipeline = pipeline;
  return report;
}

SweepResult sweep_clusters(const std::vector<SampleFeatures>& samples, const std::vector<LosoFold>& folds,
                           const EvalConfig& config, std::size_t k_min, std::size_t k_max, std::size_t n_reps,
                           std::uint64_t seed) {
  if (k_min == 0 || k_max < k_min) throw Error(ErrorCode::InvalidConfig, "cluster range must satisfy 1 <= min <= max");
  SweepResult sweep;
  double best = -1.0;
  for (auto k = k_min; k <= k_max; ++k) {
    auto cfg = config;
    cfg.k = k;
    const auto report = repeat_evaluation(samples, folds, cfg, n_reps, seed);
    sweep.rows.push_back({k, report.mean_accuracy, report.std_accuracy});
    if (report.mean_accuracy > best) {
      best = report.mean_accuracy;
      sweep.best_k = k;
    }
  }
  return sweep;
}

LabeledDataset shuffle_labels(const LabeledDataset& dataset, std::uint64_t seed) {
  LabeledDataset out = dataset;
  std::vector<RiskLabel> labels;
  for (const auto& s : dataset.sessions) labels.push_back(s.label);
  std::mt19937_64 rng(seed);
  std::shuffle(labels.begin(), labels.end(), rng);
  for (std::size_t i = 0; i < labels.size(); ++i) out.sessions[i].label = labels[i];
  return out;
}

nlohmann::json to_json(const ConfusionMatrix& m) {
  return {{m.counts[0][0], m.counts[0][1]}, {m.counts[1][0], m.counts[1][1]}};
}

nlohmann::json to_json(const EvalReport& report) {
  using nlohmann::json;
  const auto& cfg = report.config;
  json config{
      {"k", cfg.k},
      {"svm", {{"C", cfg.svm.C},
               {"gamma", cfg.svm.gamma ? json(*cfg.svm.gamma) : json(nullptr)},
               {"kkt_tol", cfg.svm.kkt_tol},
               {"max_passes", cfg.svm.max_passes},
               {"tune", cfg.tune_svm}}},
      {"kmeans", {{"max_iter", cfg.kmeans.max_iter}, {"tol", cfg.kmeans.tol}}},
      {"filter", {{"window", report.pipeline.filter.window}, {"max_gap_frames", report.pipeline.filter.max_gap_frames}}},
      {"segmentation",
       {{"seated_band_frac", report.pipeline.segmentation.seated_band_frac},
        {"seated_min_duration_s", report.pipeline.segmentation.seated_min_duration_s},
        {"turn_recovery_frac", report.pipeline.segmentation.turn_recovery_frac},
        {"step_amplitude_m", report.pipeline.segmentation.step_amplitude_m}}},
      {"n_reps", report.repetitions.size()},
      {"base_seed", report.base_seed},
  };
  auto seeds = json::array();
  auto reps = json::array();
  for (const auto& r : report.repetitions) {
    seeds.push_back(r.seed);
    auto preds = json::array();
    for (const auto& p : r.predictions) {
      preds.push_back({{"sample", report.sample_ids.at(p.sample)},
                       {"fold", p.fold},
                       {"truth", to_string(p.truth)},
                       {"predicted", to_string(p.predicted)},
                       {"decision_value", p.decision_value},
                       {"failed", p.failed}});
    }
    auto audit = json::array();
    for (const auto& a : r.audit) {
      auto ids = json::array();
      for (const auto i : a.samples) ids.push_back(report.sample_ids.at(i));
      audit.push_back({{"fold", a.fold}, {"held_out", a.held_out_subject}, {"object", a.object}, {"samples", ids}});
    }
    reps.push_back({{"seed", r.seed},
                    {"accuracy", r.accuracy},
                    {"confusion", to_json(r.confusion)},
                    {"predictions", preds},
                    {"audit", audit},
                    {"notes", r.notes}});
  }
  config["seeds"] = seeds;
  return {{"config", config},
          {"mean_accuracy", report.mean_accuracy},
          {"std_accuracy", report.std_accuracy},
          {"mean_confusion", to_json(report.mean_confusion)},
          {"confusion_order", {"low", "high"}},
          {"per_repetition", reps},
          {"audit_violations", report.audit_violations}};
}

void write_sweep_csv(const SweepResult& sweep, std::ostream& out) {
  const auto precision = out.precision(10);
  out << "K,mean_acc,std_acc\n";
  for (const auto& row : sweep.rows) out << row.k << ',' << row.mean_accuracy << ',' << row.std_accuracy << '\n';
  out.precision(precision);
}

}  // namespace gugt
