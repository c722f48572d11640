#pragma once

#include <span>
#include <vector>

#include <json.hpp>

namespace gugt {

/// Per-dimension z-score parameters. Dimensions without variance keep std 1.
struct Scaler {
  std::vector<double> mean;
  std::vector<double> std;

  std::size_t dim() const { return mean.size(); }
  static Scaler identity(std::size_t dim);

  friend bool operator==(const Scaler&, const Scaler&) = default;
};

/// Population mean/std per column. Throws EmptyTrainingSet on no rows and
/// DimensionMismatch on ragged rows.
Scaler standardize_fit(std::span<const std::vector<double>> rows);
std::vector<double> standardize_apply(const Scaler& scaler, std::span<const double> x);

nlohmann::json to_json(const Scaler& scaler);
Scaler scaler_from_json(const nlohmann::json& j);

}  // namespace gugt
