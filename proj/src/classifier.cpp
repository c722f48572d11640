#include "gugt/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "gugt/error.hpp"

namespace gugt {

int to_svm_label(RiskLabel label) {
  switch (label) {
    case RiskLabel::HighRisk: return 1;
    case RiskLabel::LowRisk: return -1;
    case RiskLabel::Unlabeled: break;
  }
  throw Error(ErrorCode::InvalidConfig, "unlabeled sample has no SVM label");
}

RiskLabel from_svm_label(int y) { return y >= 0 ? RiskLabel::HighRisk : RiskLabel::LowRisk; }

void SvmParams::validate() const {
  if (!(C > 0.0)) throw Error(ErrorCode::InvalidConfig, "SVM C must be > 0");
  if (gamma && !(*gamma > 0.0)) throw Error(ErrorCode::InvalidConfig, "SVM gamma must be > 0");
  if (!(kkt_tol > 0.0)) throw Error(ErrorCode::InvalidConfig, "SVM kkt_tol must be > 0");
  if (max_passes == 0) throw Error(ErrorCode::InvalidConfig, "SVM max_passes must be >= 1");
}

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "kernel on " + std::to_string(a.size()) + "- and " + std::to_string(b.size()) + "-d vectors");
  }
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    d2 += diff * diff;
  }
  return std::exp(-gamma * d2);
}

DualSolution smo_solve(std::span<const double> kernel, std::span<const int> y, double C, double tol,
                       std::size_t max_iter) {
  const auto n = y.size();
  if (kernel.size() != n * n) throw Error(ErrorCode::DimensionMismatch, "kernel matrix is not n x n");
  const auto K = [&](std::size_t i, std::size_t j) { return kernel[i * n + j]; };
  const auto Q = [&](std::size_t i, std::size_t j) { return static_cast<double>(y[i] * y[j]) * K(i, j); };
  constexpr double kTau = 1e-12;

  DualSolution sol;
  sol.alpha.assign(n, 0.0);
  auto& alpha = sol.alpha;
  // Gradient of 1/2 a'Qa - e'a.
  std::vector<double> grad(n, -1.0);

  const auto in_up = [&](std::size_t t) { return (y[t] > 0 && alpha[t] < C) || (y[t] < 0 && alpha[t] > 0.0); };
  const auto in_low = [&](std::size_t t) { return (y[t] < 0 && alpha[t] < C) || (y[t] > 0 && alpha[t] > 0.0); };

  for (;;) {
    double gmax = -std::numeric_limits<double>::infinity();
    double gmin = std::numeric_limits<double>::infinity();
    std::size_t i = n, j = n;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -static_cast<double>(y[t]) * grad[t];
      if (in_up(t) && v > gmax) {
        gmax = v;
        i = t;
      }
      if (in_low(t) && v < gmin) {
        gmin = v;
        j = t;
      }
    }
    sol.final_gap = (i == n || j == n) ? 0.0 : gmax - gmin;
    if (i == n || j == n || sol.final_gap < tol) {
      sol.converged = true;
      break;
    }
    if (sol.iterations >= max_iter) break;
    ++sol.iterations;

    const double old_i = alpha[i];
    const double old_j = alpha[j];
    if (y[i] != y[j]) {
      double quad = Q(i, i) + Q(j, j) + 2.0 * Q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = C - diff;
        }
      } else if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      double quad = Q(i, i) + Q(j, j) - 2.0 * Q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = sum - C;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > C) {
        if (alpha[j] > C) {
          alpha[j] = C;
          alpha[i] = sum - C;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }
    const double di = alpha[i] - old_i;
    const double dj = alpha[j] - old_j;
    for (std::size_t t = 0; t < n; ++t) grad[t] += Q(i, t) * di + Q(j, t) * dj;
  }

  // Threshold from the free multipliers, or the middle of the feasible
  // range when every multiplier sits at a bound.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = static_cast<double>(y[t]) * grad[t];
    if (alpha[t] >= C) {
      if (y[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0.0) {
      if (y[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      sum_free += yg;
      ++n_free;
    }
  }
  const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : 0.5 * (ub + lb);
  sol.bias = -rho;
  return sol;
}

double dual_objective(std::span<const double> kernel, std::span<const int> y, std::span<const double> alpha) {
  const auto n = y.size();
  double linear = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    linear += alpha[i];
    for (std::size_t j = 0; j < n; ++j) {
      quad += alpha[i] * alpha[j] * static_cast<double>(y[i] * y[j]) * kernel[i * n + j];
    }
  }
  return linear - 0.5 * quad;
}

std::vector<double> kkt_residuals(std::span<const double> kernel, std::span<const int> y,
                                  std::span<const double> alpha, double bias, double C) {
  const auto n = y.size();
  std::vector<double> res(n);
  for (std::size_t i = 0; i < n; ++i) {
    double f = bias;
    for (std::size_t j = 0; j < n; ++j) f += alpha[j] * static_cast<double>(y[j]) * kernel[i * n + j];
    const double margin = static_cast<double>(y[i]) * f;
    if (alpha[i] <= 0.0) {
      res[i] = std::max(0.0, 1.0 - margin);
    } else if (alpha[i] >= C) {
      res[i] = std::max(0.0, margin - 1.0);
    } else {
      res[i] = std::abs(margin - 1.0);
    }
  }
  return res;
}

namespace {

std::vector<std::vector<double>> standardize_rows(const Scaler& s, std::span<const std::vector<double>> X) {
  std::vector<std::vector<double>> out;
  out.reserve(X.size());
  for (const auto& x : X) out.push_back(standardize_apply(s, x));
  return out;
}

double gamma_for(std::span<const std::vector<double>> Z) {
  const auto dim = Z.front().size();
  if (dim == 0) return 1.0;
  double total_var = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    double mean = 0.0;
    for (const auto& z : Z) mean += z[d];
    mean /= static_cast<double>(Z.size());
    double var = 0.0;
    for (const auto& z : Z) var += (z[d] - mean) * (z[d] - mean);
    total_var += var / static_cast<double>(Z.size());
  }
  const double mean_var = total_var / static_cast<double>(dim);
  return mean_var > 0.0 ? 1.0 / (static_cast<double>(dim) * mean_var) : 1.0 / static_cast<double>(dim);
}

}  // namespace

double default_gamma(std::span<const std::vector<double>> X) {
  if (X.empty()) throw Error(ErrorCode::EmptyTrainingSet, "no training rows");
  const auto scaler = standardize_fit(X);
  return gamma_for(standardize_rows(scaler, X));
}

SvmTrainResult svm_train(std::span<const std::vector<double>> X, std::span<const int> y, const SvmParams& params) {
  params.validate();
  if (X.empty()) throw Error(ErrorCode::EmptyTrainingSet, "no training rows");
  if (X.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "rows and labels differ in count");
  const bool has_pos = std::find(y.begin(), y.end(), 1) != y.end();
  const bool has_neg = std::find(y.begin(), y.end(), -1) != y.end();
  if (!has_pos || !has_neg) throw Error(ErrorCode::SingleClassTraining, "training data holds a single class");

  SvmTrainResult result;
  auto& model = result.model;
  model.scaler = standardize_fit(X);
  const auto Z = standardize_rows(model.scaler, X);
  model.gamma = params.gamma.value_or(gamma_for(Z));
  model.C = params.C;

  const auto n = Z.size();
  std::vector<double> kernel(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      kernel[i * n + j] = kernel[j * n + i] = rbf_kernel(Z[i], Z[j], model.gamma);
    }
  }
  const auto sol = smo_solve(kernel, y, params.C, params.kkt_tol, params.max_passes * std::max<std::size_t>(n, 1));
  result.alpha = sol.alpha;
  result.converged = sol.converged;
  result.iterations = sol.iterations;
  result.dual_objective = dual_objective(kernel, y, sol.alpha);
  const auto residuals = kkt_residuals(kernel, y, sol.alpha, sol.bias, params.C);
  result.kkt_violations = static_cast<std::size_t>(
      std::count_if(residuals.begin(), residuals.end(), [&](double r) { return r > params.kkt_tol; }));

  model.bias = sol.bias;
  for (std::size_t i = 0; i < n; ++i) {
    if (sol.alpha[i] > 0.0) {
      model.support_vectors.push_back(Z[i]);
      model.alpha_y.push_back(sol.alpha[i] * static_cast<double>(y[i]));
    }
  }
  return result;
}

SvmPrediction svm_predict(const SvmModel& model, std::span<const double> x) {
  const auto z = standardize_apply(model.scaler, x);
  double f = model.bias;
  for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
    f += model.alpha_y[i] * rbf_kernel(model.support_vectors[i], z, model.gamma);
  }
  return {f < 0.0 ? RiskLabel::LowRisk : RiskLabel::HighRisk, f};
}

SvmParams select_svm_params(std::span<const std::vector<double>> X, std::span<const int> y,
                            std::span<const std::string> groups, const SvmParams& base) {
  if (X.size() != y.size() || X.size() != groups.size()) {
    throw Error(ErrorCode::DimensionMismatch, "rows, labels and groups differ in count");
  }
  const std::set<std::string> distinct(groups.begin(), groups.end());
  if (distinct.size() < 2) return base;
  const double g0 = base.gamma.value_or(default_gamma(X));

  SvmParams best = base;
  double best_acc = -1.0;
  for (const double C : {0.1, 1.0, 10.0, 100.0}) {
    for (const double gm : {0.01, 0.1, 1.0, 10.0}) {
      SvmParams p = base;
      p.C = C;
      p.gamma = gm * g0;
      std::size_t correct = 0, total = 0;
      for (const auto& held : distinct) {
        std::vector<std::vector<double>> tx;
        std::vector<int> ty;
        for (std::size_t i = 0; i < X.size(); ++i) {
          if (groups[i] != held) {
            tx.push_back(X[i]);
            ty.push_back(y[i]);
          }
        }
        const bool both = std::find(ty.begin(), ty.end(), 1) != ty.end() &&
                          std::find(ty.begin(), ty.end(), -1) != ty.end();
        if (!both) continue;
        const auto model = svm_train(tx, ty, p).model;
        for (std::size_t i = 0; i < X.size(); ++i) {
          if (groups[i] != held) continue;
          correct += to_svm_label(svm_predict(model, X[i]).label) == y[i] ? 1 : 0;
          ++total;
        }
      }
      const double acc = total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
      if (acc > best_acc) {
        best_acc = acc;
        best = p;
      }
    }
  }
  return best;
}

nlohmann::json to_json(const SvmModel& model) {
  return {{"C", model.C},
          {"gamma", model.gamma},
          {"bias", model.bias},
          {"scaler", to_json(model.scaler)},
          {"sv", model.support_vectors},
          {"alpha_y", model.alpha_y}};
}

SvmModel svm_model_from_json(const nlohmann::json& j) {
  try {
    SvmModel m;
    m.C = j.at("C").get<double>();
    m.gamma = j.at("gamma").get<double>();
    m.bias = j.at("bias").get<double>();
    m.scaler = scaler_from_json(j.at("scaler"));
    m.support_vectors = j.at("sv").get<std::vector<std::vector<double>>>();
    m.alpha_y = j.at("alpha_y").get<std::vector<double>>();
    if (m.support_vectors.size() != m.alpha_y.size()) {
      throw Error(ErrorCode::MalformedRecord, "model sv and alpha_y differ in count");
    }
    for (const auto& sv : m.support_vectors) {
      if (sv.size() != m.scaler.dim()) throw Error(ErrorCode::MalformedRecord, "support vector dimension mismatch");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedRecord, std::string("svm model: ") + e.what());
  }
}

}  // namespace gugt
