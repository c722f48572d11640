#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "gugt/features.hpp"
#include "gugt/standardize.hpp"

namespace gugt {

using FeaturePoint = std::array<double, kAnatomicalDims>;

struct KMeansOptions {
  std::size_t max_iter = 100;
  double tol = 1e-6;
};

/// M centroids in the (standardized) anatomical feature space. Points are
/// mapped through `scaler` before any distance is taken; codebooks fitted
/// directly by kmeans_fit carry the identity scaler.
struct Codebook {
  std::vector<FeaturePoint> centroids;
  std::uint64_t seed = 0;
  double inertia = 0.0;
  Scaler scaler = Scaler::identity(kAnatomicalDims);
  // Inertia after every assignment step, final assignment included.
  std::vector<double> inertia_history;

  std::size_t size() const { return centroids.size(); }
};

/// Lloyd's algorithm. Initial centroids are K distinct points drawn without
/// replacement; an empty cluster is moved onto the point farthest from its
/// centroid. Stops once no centroid moves by tol or more.
Codebook kmeans_fit(std::span<const FeaturePoint> points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options = {});

/// Standardizes the points (statistics from these points), then kmeans_fit.
Codebook fit_codebook(std::span<const FeaturePoint> points, std::size_t k, std::uint64_t seed,
                      const KMeansOptions& options = {});

/// Nearest centroid after scaling; the lowest index wins ties.
std::size_t assign(const Codebook& codebook, const FeaturePoint& point);

/// Nearest centroid for a point already in codebook space.
std::size_t nearest_centroid(std::span<const FeaturePoint> centroids, const FeaturePoint& point);

double squared_distance(const FeaturePoint& a, const FeaturePoint& b);

/// Fraction of the stream assigned to each centroid. Throws EmptyStream.
std::vector<double> bow_histogram(const Codebook& codebook, std::span<const FeaturePoint> stream);

/// [num_steps, avg_step_duration_s, turn_duration_s, w_1 .. w_M]
std::vector<double> build_feature_vector(const GaitFeatures& gait, std::span<const double> histogram);

std::vector<FeaturePoint> to_points(std::span<const AnatomicalFrameFeatures> rows);

nlohmann::json to_json(const Codebook& codebook);
Codebook codebook_from_json(const nlohmann::json& j);

}  // namespace gugt
