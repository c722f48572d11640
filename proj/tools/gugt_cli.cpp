#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gugt/classifier.hpp"
#include "gugt/encoding.hpp"
#include "gugt/error.hpp"
#include "gugt/evaluation.hpp"
#include "gugt/pipeline.hpp"
#include "gugt/skeleton_io.hpp"
#include "gugt/synthgen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gugt;

namespace {

constexpr int kExitData = 1;
constexpr int kExitConfig = 2;

// Everything a command may need. Values come from the defaults below, then
// the --config file, then explicit flags.
struct RunConfig {
  std::vector<std::string> inputs;
  std::string output;
  std::string format = "jsonl";
  PipelineParams pipeline;
  EvalConfig eval;
  std::size_t n_reps = 10;
  std::optional<std::uint64_t> seed;
};

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); }

template <typename T>
void read_field(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

void check_keys(const json& obj, std::initializer_list<const char*> known, const std::string& where) {
  if (!obj.is_object()) config_error(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      config_error("unknown key '" + key + "' in " + where);
    }
  }
}

void apply_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file " + path);
  try {
    const auto j = json::parse(in);
    check_keys(j, {"inputs", "output", "format", "k", "n_reps", "seed", "segmentation", "filter", "svm", "kmeans"},
               "config");
    read_field(j, "inputs", cfg.inputs);
    read_field(j, "output", cfg.output);
    read_field(j, "format", cfg.format);
    read_field(j, "k", cfg.eval.k);
    read_field(j, "n_reps", cfg.n_reps);
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("segmentation")) {
      const auto& s = j.at("segmentation");
      check_keys(s, {"seated_band_frac", "seated_min_duration_s", "turn_recovery_frac", "step_amplitude_m"},
                 "segmentation");
      auto& p = cfg.pipeline.segmentation;
      read_field(s, "seated_band_frac", p.seated_band_frac);
      read_field(s, "seated_min_duration_s", p.seated_min_duration_s);
      read_field(s, "turn_recovery_frac", p.turn_recovery_frac);
      read_field(s, "step_amplitude_m", p.step_amplitude_m);
    }
    if (j.contains("filter")) {
      const auto& f = j.at("filter");
      check_keys(f, {"window", "max_gap_frames"}, "filter");
      read_field(f, "window", cfg.pipeline.filter.window);
      read_field(f, "max_gap_frames", cfg.pipeline.filter.max_gap_frames);
    }
    if (j.contains("svm")) {
      const auto& s = j.at("svm");
      check_keys(s, {"C", "gamma", "kkt_tol", "max_passes", "tune"}, "svm");
      read_field(s, "C", cfg.eval.svm.C);
      if (s.contains("gamma") && !s.at("gamma").is_null()) cfg.eval.svm.gamma = s.at("gamma").get<double>();
      read_field(s, "kkt_tol", cfg.eval.svm.kkt_tol);
      read_field(s, "max_passes", cfg.eval.svm.max_passes);
      read_field(s, "tune", cfg.eval.tune_svm);
    }
    if (j.contains("kmeans")) {
      const auto& k = j.at("kmeans");
      check_keys(k, {"max_iter", "tol"}, "kmeans");
      read_field(k, "max_iter", cfg.eval.kmeans.max_iter);
      read_field(k, "tol", cfg.eval.kmeans.tol);
    }
  } catch (const json::exception& e) {
    config_error("config file " + path + ": " + e.what());
  }
}

std::uint64_t resolve_seed(const RunConfig& cfg) {
  if (cfg.seed) return *cfg.seed;
  if (const char* env = std::getenv("GUGT_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    config_error(std::string("GUGT_SEED is not an unsigned integer: ") + env);
  }
  return 1;
}

void validate_config(const RunConfig& cfg) {
  cfg.pipeline.validate();
  cfg.eval.svm.validate();
  if (cfg.eval.k == 0) config_error("k must be >= 1");
  if (cfg.n_reps == 0) config_error("n_reps must be >= 1");
  if (cfg.eval.kmeans.max_iter == 0) config_error("kmeans max_iter must be >= 1");
  if (!(cfg.eval.kmeans.tol >= 0.0)) config_error("kmeans tol must be >= 0");
  if (cfg.format != "jsonl" && cfg.format != "csv") config_error("format must be jsonl or csv");
}

bool is_session_file(const fs::path& p) {
  const auto name = p.filename().string();
  if (name.ends_with(".truth.json")) return false;
  return p.extension() == ".jsonl" || p.extension() == ".csv";
}

std::vector<fs::path> session_files(const std::vector<std::string>& inputs) {
  if (inputs.empty()) config_error("no input files or directories given");
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::recursive_directory_iterator(p)) {
        if (e.is_regular_file() && is_session_file(e.path())) found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::exists(p)) {
      files.push_back(p);
    } else {
      throw Error(ErrorCode::Io, "no such file or directory: " + in);
    }
  }
  return files;
}

LabeledDataset load_dataset(const std::vector<std::string>& inputs) {
  LabeledDataset d;
  for (const auto& f : session_files(inputs)) {
    d.sessions.push_back(load_session(f));
  }
  return d;
}

// Dataset that must be fit for training or evaluation.
LabeledDataset load_labeled(const std::vector<std::string>& inputs) {
  auto d = load_dataset(inputs);
  const auto report = validate_dataset(d.sessions);
  if (!report.ok()) {
    for (const auto& v : report.violations) std::cerr << "violation: " << to_string(v.kind) << ": " << v.message << '\n';
    throw Error(ErrorCode::MalformedRecord, std::to_string(report.violations.size()) + " dataset violation(s)");
  }
  return d;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    write_text(path, text);
  }
}

void cmd_simulate(const RunConfig& cfg, std::size_t low, std::size_t high, std::size_t trials_min,
                  std::size_t trials_max, std::optional<double> noise) {
  if (cfg.output.empty()) config_error("simulate needs --out");
  CohortSpec spec;
  spec.low_subjects = low;
  spec.high_subjects = high;
  spec.trials_min = trials_min;
  spec.trials_max = trials_max;
  if (noise) {
    spec.low.base.noise_std_m = *noise;
    spec.high.base.noise_std_m = *noise;
  }
  Cohort cohort;
  try {
    cohort = generate_cohort(spec, resolve_seed(cfg));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidProfile) throw Error(ErrorCode::InvalidConfig, e.what());
    throw;
  }
  const fs::path root(cfg.output);
  const auto ext = cfg.format == "csv" ? ".csv" : ".jsonl";
  for (std::size_t i = 0; i < cohort.dataset.sessions.size(); ++i) {
    const auto& s = cohort.dataset.sessions[i];
    const auto dir = root / s.subject_id;
    fs::create_directories(dir);
    save_session(s, dir / (s.trial_id + ext));
    write_text(dir / (s.trial_id + ".truth.json"), to_json(cohort.truths[i]).dump(2) + "\n");
  }
  std::cout << "wrote " << cohort.dataset.sessions.size() << " sessions for " << cohort.dataset.subjects().size()
            << " subjects to " << root.string() << '\n';
}

int cmd_validate(const RunConfig& cfg) {
  const auto d = load_dataset(cfg.inputs);
  const auto report = validate_dataset(d.sessions);
  for (const auto& v : report.violations) {
    std::cout << to_string(v.kind) << ": " << v.message << '\n';
  }
  std::cout << d.sessions.size() << " sessions, " << d.subjects().size() << " subjects, "
            << report.violations.size() << " violations\n";
  return report.ok() ? 0 : kExitData;
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

void cmd_segment(const RunConfig& cfg) {
  if (cfg.inputs.size() != 1) config_error("segment takes exactly one session file");
  const auto session = load_session(cfg.inputs[0]);
  const auto a = analyze_session(session, cfg.pipeline);
  const fs::path dir = cfg.output.empty() ? fs::path(".") : fs::path(cfg.output);
  const auto stem = stem_of(cfg.inputs[0]);
  const std::pair<const TimeSeries*, const char*> signals[] = {
      {&a.hip_depth, "_hip_depth.csv"}, {&a.elbow_xdistance, "_elbow_xdistance.csv"},
      {&a.heel_difference, "_heel_difference.csv"}};
  for (const auto& [signal, suffix] : signals) {
    auto out = open_out(dir / (stem + suffix));
    write_phase_csv(*signal, a.segmentation, out);
  }
  const auto& seg = a.segmentation;
  std::cout << "turn point: frame " << seg.turn_point << '\n';
  for (const auto& iv : seg.seated) std::cout << "seated: " << iv.first << '-' << iv.last << '\n';
  std::cout << "turning: " << seg.turning.first << '-' << seg.turning.last << '\n';
  for (const auto& iv : seg.walking) std::cout << "walking: " << iv.first << '-' << iv.last << '\n';
  if (seg.turn_start_clamped || seg.turn_end_clamped) {
    std::cerr << "warning: elbow distance did not recover on one side of the turn; interval clamped\n";
  }
}

void cmd_extract(const RunConfig& cfg) {
  if (cfg.inputs.size() != 1) config_error("extract takes exactly one session file");
  const auto session = load_session(cfg.inputs[0]);
  const auto a = analyze_session(session, cfg.pipeline);
  const fs::path dir = cfg.output.empty() ? fs::path(".") : fs::path(cfg.output);
  const auto stem = stem_of(cfg.inputs[0]);
  {
    auto out = open_out(dir / (stem + "_anatomical.csv"));
    write_anatomical_csv(a.anatomy, out);
  }
  {
    auto out = open_out(dir / (stem + "_heel.csv"));
    write_heel_csv(a.heel_difference, a.steps, out);
  }
  constexpr double kDeg = 180.0 / std::numbers::pi;
  double elbow = 0, leg = 0, knee_r = 0, knee_l = 0;
  for (const auto& r : a.anatomy) {
    elbow += r.elbow_distance_m;
    leg += r.leg_angle_rad;
    knee_r += r.knee_right_rad;
    knee_l += r.knee_left_rad;
  }
  const auto n = static_cast<double>(std::max<std::size_t>(a.anatomy.size(), 1));
  std::cout << std::fixed << std::setprecision(3);
  std::cout << "steps: " << a.gait.num_steps << '\n'
            << "avg_step_duration_s: " << a.gait.avg_step_duration_s << '\n'
            << "turn_duration_s: " << a.gait.turn_duration_s << '\n'
            << "anatomical_frames: " << a.anatomy.size() << '\n'
            << "mean_elbow_distance_m: " << elbow / n << '\n'
            << "mean_leg_angle_deg: " << leg / n * kDeg << '\n'
            << "mean_knee_right_deg: " << knee_r / n * kDeg << '\n'
            << "mean_knee_left_deg: " << knee_l / n * kDeg << '\n';
}

std::vector<SampleFeatures> usable_samples(const LabeledDataset& d, const PipelineParams& params) {
  auto samples = extract_samples(d, params);
  std::vector<SampleFeatures> ok;
  for (auto& s : samples) {
    if (s.usable()) {
      ok.push_back(std::move(s));
    } else {
      std::cerr << "skipping " << s.sample_id << ": " << s.failure << '\n';
    }
  }
  if (ok.empty()) throw Error(ErrorCode::EmptyTrainingSet, "no session could be analyzed");
  return ok;
}

Codebook fit_all(const std::vector<SampleFeatures>& samples, const RunConfig& cfg) {
  std::vector<FeaturePoint> frames;
  for (const auto& s : samples) frames.insert(frames.end(), s.anatomy.begin(), s.anatomy.end());
  return fit_codebook(frames, cfg.eval.k, resolve_seed(cfg), cfg.eval.kmeans);
}

void cmd_encode(const RunConfig& cfg) {
  const auto samples = usable_samples(load_dataset(cfg.inputs), cfg.pipeline);
  const auto codebook = fit_all(samples, cfg);
  emit(cfg.output, to_json(codebook).dump(2) + "\n");
}

void cmd_train(const RunConfig& cfg, const std::string& codebook_out) {
  if (cfg.output.empty()) config_error("train needs --out for the model");
  const auto samples = usable_samples(load_labeled(cfg.inputs), cfg.pipeline);
  const auto codebook = fit_all(samples, cfg);
  std::vector<std::vector<double>> X;
  std::vector<int> y;
  std::vector<std::string> groups;
  for (const auto& s : samples) {
    X.push_back(build_feature_vector(*s.gait, bow_histogram(codebook, s.anatomy)));
    y.push_back(to_svm_label(s.label));
    groups.push_back(s.subject);
  }
  const auto params = cfg.eval.tune_svm ? select_svm_params(X, y, groups, cfg.eval.svm) : cfg.eval.svm;
  const auto trained = svm_train(X, y, params);
  if (!trained.converged) {
    std::cerr << "warning: SMO stopped at the iteration cap with " << trained.kkt_violations << " KKT violations\n";
  }
  const auto codebook_path = codebook_out.empty() ? fs::path(cfg.output).replace_extension(".codebook.json")
                                                  : fs::path(codebook_out);
  write_text(cfg.output, to_json(trained.model).dump(2) + "\n");
  write_text(codebook_path, to_json(codebook).dump(2) + "\n");
  std::cout << "trained on " << samples.size() << " sessions, " << trained.model.support_vectors.size()
            << " support vectors; codebook in " << codebook_path.string() << '\n';
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedRecord, path + ": " + e.what());
  }
}

void cmd_predict(const RunConfig& cfg, const std::string& model_path, const std::string& codebook_path) {
  const auto model = svm_model_from_json(read_json(model_path));
  const auto codebook = codebook_from_json(read_json(codebook_path));
  for (const auto& f : session_files(cfg.inputs)) {
    const auto session = load_session(f);
    const auto a = analyze_session(session, cfg.pipeline);
    const auto x = build_feature_vector(a.gait, bow_histogram(codebook, to_points(a.anatomy)));
    if (x.size() != model.dim()) {
      throw Error(ErrorCode::DimensionMismatch, "model expects " + std::to_string(model.dim()) +
                                                    " features, codebook gives " + std::to_string(x.size()));
    }
    const auto p = svm_predict(model, x);
    std::cout << f.string() << ',' << to_string(p.label) << ',' << std::setprecision(17) << p.decision_value << '\n';
  }
}

void cmd_evaluate(const RunConfig& cfg) {
  const auto d = load_labeled(cfg.inputs);
  const auto report = repeat_evaluation(d, cfg.eval, cfg.n_reps, resolve_seed(cfg), cfg.pipeline);
  emit(cfg.output, to_json(report).dump(2) + "\n");
  std::cerr << std::fixed << std::setprecision(4) << "mean accuracy " << report.mean_accuracy << " (std "
            << report.std_accuracy << ") over " << report.repetitions.size() << " repetitions\n";
  for (const auto& v : report.audit_violations) std::cerr << "audit: " << v << '\n';
  if (!report.audit_violations.empty()) throw Error(ErrorCode::MalformedRecord, "subject leakage detected");
}

void cmd_sweep(const RunConfig& cfg, std::size_t k_min, std::size_t k_max) {
  if (k_min == 0 || k_max < k_min) config_error("cluster range must satisfy 1 <= k-min <= k-max");
  const auto d = load_labeled(cfg.inputs);
  const auto samples = extract_samples(d, cfg.pipeline);
  const auto sweep = sweep_clusters(samples, loso_split(d), cfg.eval, k_min, k_max, cfg.n_reps, resolve_seed(cfg));
  std::ostringstream out;
  write_sweep_csv(sweep, out);
  emit(cfg.output, out.str());
  std::cerr << "best K " << sweep.best_k << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Get-Up-and-Go gait analysis: segmentation, features, bag-of-words encoding and SVM evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "gugt 1.0");

  RunConfig cfg;
  std::string config_path;
  // Flags are captured separately and applied on top of the config file.
  std::optional<std::size_t> k, reps;
  std::optional<std::uint64_t> seed;
  std::optional<double> C, gamma, band, min_seated, recovery, amplitude;
  std::optional<std::size_t> window, max_gap;
  bool tune = false;
  std::vector<std::string> inputs;
  std::string output, format;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    cmd->add_option("--seed", seed, "Random seed (default: config, then GUGT_SEED, then 1)");
  };
  const auto add_pipeline = [&](CLI::App* cmd) {
    cmd->add_option("--window", window, "Median filter window (odd)");
    cmd->add_option("--max-gap", max_gap, "Longest untracked run to interpolate, frames");
    cmd->add_option("--seated-band", band, "Seated band as a fraction of the hip depth range");
    cmd->add_option("--seated-min", min_seated, "Minimum seated duration, seconds");
    cmd->add_option("--turn-recovery", recovery, "Turn boundary as a fraction of the walking elbow distance");
    cmd->add_option("--step-amplitude", amplitude, "Step hysteresis amplitude, meters");
  };
  const auto add_model = [&](CLI::App* cmd) {
    cmd->add_option("--k", k, "Number of clusters");
    cmd->add_option("--C", C, "SVM soft-margin constant");
    cmd->add_option("--gamma", gamma, "RBF gamma (default: 1 / (dim * mean variance))");
    cmd->add_flag("--tune", tune, "Grid-search C and gamma on the training data");
  };

  std::size_t low = 5, high = 7, trials_min = 3, trials_max = 6;
  std::optional<double> noise;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic cohort with ground truth");
  add_common(simulate);
  simulate->add_option("--subjects-low", low, "Low-risk subjects");
  simulate->add_option("--subjects-high", high, "High-risk subjects");
  simulate->add_option("--trials-min", trials_min, "Fewest trials per subject");
  simulate->add_option("--trials-max", trials_max, "Most trials per subject");
  simulate->add_option("--noise", noise, "Position noise standard deviation, meters");
  simulate->add_option("--out", output, "Output directory");
  simulate->add_option("--format", format, "jsonl or csv");

  auto* validate = app.add_subcommand("validate", "Check session files and dataset structure");
  validate->add_option("inputs", inputs, "Session files or directories");

  auto* segment = app.add_subcommand("segment", "Export hip depth, elbow distance and heel difference with phases");
  add_common(segment);
  add_pipeline(segment);
  segment->add_option("input", inputs, "Session file")->expected(1);
  segment->add_option("--out-dir", output, "Directory for the CSV files (default .)");

  auto* extract = app.add_subcommand("extract", "Export per-frame anatomical features and step crossings");
  add_common(extract);
  add_pipeline(extract);
  extract->add_option("input", inputs, "Session file")->expected(1);
  extract->add_option("--out-dir", output, "Directory for the CSV files (default .)");

  auto* encode = app.add_subcommand("encode", "Fit a codebook on all frames of a dataset");
  add_common(encode);
  add_pipeline(encode);
  add_model(encode);
  encode->add_option("inputs", inputs, "Session files or directories");
  encode->add_option("--out", output, "Codebook JSON (default stdout)");

  std::string codebook_path, model_path;
  auto* train = app.add_subcommand("train", "Fit codebook and SVM on a labeled dataset");
  add_common(train);
  add_pipeline(train);
  add_model(train);
  train->add_option("inputs", inputs, "Session files or directories");
  train->add_option("--out", output, "Model JSON");
  train->add_option("--codebook-out", codebook_path, "Codebook JSON (default next to the model)");

  auto* predict = app.add_subcommand("predict", "Classify sessions with a trained model");
  add_common(predict);
  add_pipeline(predict);
  predict->add_option("inputs", inputs, "Session files or directories");
  predict->add_option("--model", model_path, "Model JSON")->required();
  predict->add_option("--codebook", codebook_path, "Codebook JSON")->required();

  auto* evaluate = app.add_subcommand("evaluate", "Repeated leave-one-subject-out evaluation");
  add_common(evaluate);
  add_pipeline(evaluate);
  add_model(evaluate);
  evaluate->add_option("inputs", inputs, "Session files or directories");
  evaluate->add_option("--reps", reps, "Repetitions");
  evaluate->add_option("--out", output, "Report JSON (default stdout)");

  std::size_t k_min = 4, k_max = 24;
  auto* sweep = app.add_subcommand("sweep", "Evaluate a range of cluster counts");
  add_common(sweep);
  add_pipeline(sweep);
  add_model(sweep);
  sweep->add_option("inputs", inputs, "Session files or directories");
  sweep->add_option("--k-min", k_min, "Smallest K");
  sweep->add_option("--k-max", k_max, "Largest K");
  sweep->add_option("--reps", reps, "Repetitions per K");
  sweep->add_option("--out", output, "Sweep CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (!config_path.empty()) apply_config_file(config_path, cfg);
    if (!inputs.empty()) cfg.inputs = inputs;
    if (!output.empty()) cfg.output = output;
    if (!format.empty()) cfg.format = format;
    if (seed) cfg.seed = seed;
    if (k) cfg.eval.k = *k;
    if (reps) cfg.n_reps = *reps;
    if (C) cfg.eval.svm.C = *C;
    if (gamma) cfg.eval.svm.gamma = *gamma;
    if (tune) cfg.eval.tune_svm = true;
    if (window) cfg.pipeline.filter.window = *window;
    if (max_gap) cfg.pipeline.filter.max_gap_frames = *max_gap;
    if (band) cfg.pipeline.segmentation.seated_band_frac = *band;
    if (min_seated) cfg.pipeline.segmentation.seated_min_duration_s = *min_seated;
    if (recovery) cfg.pipeline.segmentation.turn_recovery_frac = *recovery;
    if (amplitude) cfg.pipeline.segmentation.step_amplitude_m = *amplitude;
    validate_config(cfg);

    if (*simulate) {
      if (noise && !(*noise >= 0.0 && *noise <= 0.1)) config_error("noise must be within [0, 0.1] m");
      cmd_simulate(cfg, low, high, trials_min, trials_max, noise);
    } else if (*validate) {
      return cmd_validate(cfg);
    } else if (*segment) {
      cmd_segment(cfg);
    } else if (*extract) {
      cmd_extract(cfg);
    } else if (*encode) {
      cmd_encode(cfg);
    } else if (*train) {
      cmd_train(cfg, codebook_path);
    } else if (*predict) {
      cmd_predict(cfg, model_path, codebook_path);
    } else if (*evaluate) {
      cmd_evaluate(cfg);
    } else if (*sweep) {
      cmd_sweep(cfg, k_min, k_max);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return e.code() == ErrorCode::InvalidConfig || e.code() == ErrorCode::InvalidProfile ? kExitConfig : kExitData;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: Io: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
