#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gugt/classifier.hpp"
#include "gugt/encoding.hpp"
#include "gugt/pipeline.hpp"
#include "gugt/skeleton.hpp"

namespace gugt {

/// Rows are the true label, columns the prediction, both ordered
/// [LowRisk, HighRisk]. Entries are doubles so averaged matrices fit too.
struct ConfusionMatrix {
  std::array<std::array<double, 2>, 2> counts{};

  void add(RiskLabel truth, RiskLabel predicted);
  double total() const;
  double trace() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// trace / total; the statistic reported as classification accuracy.
double accuracy_from_confusion(const ConfusionMatrix& m);

struct LosoFold {
  std::string held_out_subject;
  std::vector<std::size_t> train;  // session indices
  std::vector<std::size_t> test;
};

/// One fold per subject, in sorted subject order. Throws TooFewSubjects.
std::vector<LosoFold> loso_split(const LabeledDataset& dataset);

/// Per-session pipeline output that the folds reuse. A session whose
/// extraction failed keeps the error in `failure`.
struct SampleFeatures {
  std::string sample_id;  // subject/trial
  std::string subject;
  RiskLabel label = RiskLabel::Unlabeled;
  std::optional<GaitFeatures> gait;
  std::vector<FeaturePoint> anatomy;
  std::string failure;

  bool usable() const { return gait.has_value() && !anatomy.empty(); }
};

std::vector<SampleFeatures> extract_samples(const LabeledDataset& dataset, const PipelineParams& params);

struct EvalConfig {
  std::size_t k = 10;
  SvmParams svm;
  bool tune_svm = false;
  KMeansOptions kmeans;
};

struct SamplePrediction {
  std::size_t sample = 0;
  std::size_t fold = 0;
  RiskLabel truth = RiskLabel::Unlabeled;
  RiskLabel predicted = RiskLabel::Unlabeled;
  double decision_value = 0.0;
  // Extraction failed; the sample is scored as misclassified.
  bool failed = false;
};

/// Which samples went into each fitted object of a fold.
struct AuditEntry {
  std::size_t fold = 0;
  std::string held_out_subject;
  std::string object;  // "scaler+codebook", "svm", "svm_tuning", "excluded"
  std::vector<std::size_t> samples;
};

struct LosoResult {
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  ConfusionMatrix confusion;
  std::vector<SamplePrediction> predictions;
  std::vector<AuditEntry> audit;
  std::vector<std::string> notes;  // non-convergence and similar
};

/// Per fold: codebook on training frames, BOW + gait vectors, SVM, predict
/// the held-out subject. Fold errors are rethrown with the subject attached.
LosoResult run_loso(const std::vector<SampleFeatures>& samples, const std::vector<LosoFold>& folds,
                    const EvalConfig& config, std::uint64_t seed);
LosoResult run_loso(const LabeledDataset& dataset, const EvalConfig& config, std::uint64_t seed,
                    const PipelineParams& pipeline = {});

/// Audit entries whose samples include the held-out subject.
std::vector<std::string> audit_violations(const LosoResult& result, const std::vector<SampleFeatures>& samples);

struct EvalReport {
  EvalConfig config;
  PipelineParams pipeline;
  std::uint64_t base_seed = 0;
  std::vector<LosoResult> repetitions;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;  // population
  ConfusionMatrix mean_confusion;
  std::vector<std::string> sample_ids;
  std::vector<std::string> audit_violations;
};

/// Mean, population std and entrywise mean confusion over repetitions.
void aggregate(EvalReport& report);

/// run_loso with seeds base_seed .. base_seed + n_reps - 1.
EvalReport repeat_evaluation(const std::vector<SampleFeatures>& samples, const std::vector<LosoFold>& folds,
                             const EvalConfig& config, std::size_t n_reps, std::uint64_t base_seed);
EvalReport repeat_evaluation(const LabeledDataset& dataset, const EvalConfig& config, std::size_t n_reps,
                             std::uint64_t base_seed, const PipelineParams& pipeline = {});

struct SweepRow {
  std::size_t k = 0;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::size_t best_k = 0;  // first K with the highest mean accuracy
};

SweepResult sweep_clusters(const std::vector<SampleFeatures>& samples, const std::vector<LosoFold>& folds,
                           const EvalConfig& config, std::size_t k_min, std::size_t k_max, std::size_t n_reps,
                           std::uint64_t seed);

/// Same sessions with the labels permuted.
LabeledDataset shuffle_labels(const LabeledDataset& dataset, std::uint64_t seed);

nlohmann::json to_json(const ConfusionMatrix& m);
nlohmann::json to_json(const EvalReport& report);
void write_sweep_csv(const SweepResult& sweep, std::ostream& out);

}  // namespace gugt
