#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "gugt/skeleton.hpp"
#include "gugt/standardize.hpp"

namespace gugt {

/// +1 is HighRisk, -1 is LowRisk.
int to_svm_label(RiskLabel label);
RiskLabel from_svm_label(int y);

struct SvmParams {
  double C = 1.0;
  // Unset means 1 / (dim * mean column variance) of the standardized
  // training matrix.
  std::optional<double> gamma;
  double kkt_tol = 1e-3;
  std::size_t max_passes = 1000;

  void validate() const;
};

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma);

/// Solution of the C-SVM dual for a fixed kernel matrix (row-major n x n).
struct DualSolution {
  std::vector<double> alpha;
  double bias = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
  double final_gap = 0.0;  // max KKT violation of the selected pair at exit
};

/// Sequential minimal optimization with maximal-violating-pair selection.
/// Each step updates two multipliers analytically and clips them to the
/// box, so 0 <= alpha <= C and sum(alpha * y) = 0 hold after every step.
/// Stops when the violation gap drops below `tol` or after max_iter steps.
DualSolution smo_solve(std::span<const double> kernel, std::span<const int> y, double C, double tol,
                       std::size_t max_iter);

/// sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij
double dual_objective(std::span<const double> kernel, std::span<const int> y, std::span<const double> alpha);

struct SvmModel {
  std::vector<std::vector<double>> support_vectors;  // standardized
  std::vector<double> alpha_y;                        // alpha_i * y_i
  double bias = 0.0;
  double C = 1.0;
  double gamma = 1.0;
  Scaler scaler;

  std::size_t dim() const { return scaler.dim(); }
};

struct SvmTrainResult {
  SvmModel model;
  std::vector<double> alpha;  // one per training row
  bool converged = false;
  std::size_t kkt_violations = 0;  // training points outside kkt_tol
  std::size_t iterations = 0;
  double dual_objective = 0.0;
};

/// Standardizes X, resolves gamma and solves the dual. A run that hits the
/// iteration cap is reported through `converged`/`kkt_violations` and still
/// returns a usable model. Throws SingleClassTraining.
SvmTrainResult svm_train(std::span<const std::vector<double>> X, std::span<const int> y, const SvmParams& params);

/// Per-point KKT residuals of a solution against a kernel matrix.
std::vector<double> kkt_residuals(std::span<const double> kernel, std::span<const int> y,
                                  std::span<const double> alpha, double bias, double C);

struct SvmPrediction {
  RiskLabel label;
  double decision_value;
};

/// Zero decision values map to HighRisk.
SvmPrediction svm_predict(const SvmModel& model, std::span<const double> x);

/// Picks C from {0.1, 1, 10, 100} and gamma from {0.01, 0.1, 1, 10} x the
/// default gamma by leave-one-group-out accuracy over the given rows.
/// Ties keep the earlier grid entry. With a single group the defaults are
/// returned unchanged.
SvmParams select_svm_params(std::span<const std::vector<double>> X, std::span<const int> y,
                            std::span<const std::string> groups, const SvmParams& base);

/// Gamma that svm_train would use for these (raw) rows.
double default_gamma(std::span<const std::vector<double>> X);

nlohmann::json to_json(const SvmModel& model);
SvmModel svm_model_from_json(const nlohmann::json& j);

}  // namespace gugt
