#include "gugt/standardize.hpp"

#include <cmath>
#include <string>

#include "gugt/error.hpp"

namespace gugt {

Scaler Scaler::identity(std::size_t dim) { return {std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)}; }

Scaler standardize_fit(std::span<const std::vector<double>> rows) {
  if (rows.empty()) throw Error(ErrorCode::EmptyTrainingSet, "cannot standardize an empty set");
  const auto dim = rows.front().size();
  Scaler s{std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0)};
  for (const auto& r : rows) {
    if (r.size() != dim) throw Error(ErrorCode::DimensionMismatch, "ragged training rows");
    for (std::size_t d = 0; d < dim; ++d) s.mean[d] += r[d];
  }
  const auto n = static_cast<double>(rows.size());
  for (auto& m : s.mean) m /= n;
  for (const auto& r : rows) {
    for (std::size_t d = 0; d < dim; ++d) {
      const double dev = r[d] - s.mean[d];
      s.std[d] += dev * dev;
    }
  }
  for (auto& v : s.std) {
    v = std::sqrt(v / n);
    // Constant columns (up to rounding) are only centred.
    if (!(v > 1e-12)) v = 1.0;
  }
  return s;
}

std::vector<double> standardize_apply(const Scaler& scaler, std::span<const double> x) {
  if (x.size() != scaler.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "expected " + std::to_string(scaler.dim()) + " dimensions, got " + std::to_string(x.size()));
  }
  std::vector<double> out(x.size());
  for (std::size_t d = 0; d < x.size(); ++d) out[d] = (x[d] - scaler.mean[d]) / scaler.std[d];
  return out;
}

nlohmann::json to_json(const Scaler& scaler) { return {{"mean", scaler.mean}, {"std", scaler.std}}; }

Scaler scaler_from_json(const nlohmann::json& j) {
  try {
    Scaler s{j.at("mean").get<std::vector<double>>(), j.at("std").get<std::vector<double>>()};
    if (s.mean.size() != s.std.size()) throw Error(ErrorCode::MalformedRecord, "scaler mean/std sizes differ");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedRecord, std::string("scaler: ") + e.what());
  }
}

}  // namespace gugt
