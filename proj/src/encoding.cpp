#include "gugt/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "gugt/error.hpp"

namespace gugt {

double squared_distance(const FeaturePoint& a, const FeaturePoint& b) {
  double s = 0.0;
  for (std::size_t d = 0; d < kAnatomicalDims; ++d) {
    const double diff = a[d] - b[d];
    s += diff * diff;
  }
  return s;
}

std::size_t nearest_centroid(std::span<const FeaturePoint> centroids, const FeaturePoint& point) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = squared_distance(point, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

namespace {

std::size_t count_distinct(std::span<const FeaturePoint> points) {
  std::vector<FeaturePoint> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());
  return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

// Assignment step; returns the inertia.
double assign_all(std::span<const FeaturePoint> points, std::span<const FeaturePoint> centroids,
                  std::vector<std::size_t>& labels, std::vector<double>& dist) {
  double inertia = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    labels[i] = nearest_centroid(centroids, points[i]);
    dist[i] = squared_distance(points[i], centroids[labels[i]]);
    inertia += dist[i];
  }
  return inertia;
}

}  // namespace

Codebook kmeans_fit(std::span<const FeaturePoint> points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options) {
  if (k == 0) throw Error(ErrorCode::InvalidConfig, "k-means needs K >= 1");
  if (points.size() < k) {
    throw Error(ErrorCode::TooFewPoints, std::to_string(points.size()) + " points for K=" + std::to_string(k));
  }
  if (count_distinct(points) < k) {
    throw Error(ErrorCode::TooFewDistinctPoints, "fewer than K=" + std::to_string(k) + " distinct points");
  }

  Codebook cb;
  cb.seed = seed;
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (const auto i : order) {
    if (std::find(cb.centroids.begin(), cb.centroids.end(), points[i]) == cb.centroids.end()) {
      cb.centroids.push_back(points[i]);
      if (cb.centroids.size() == k) break;
    }
  }

  const auto n = points.size();
  std::vector<std::size_t> labels(n);
  std::vector<double> dist(n);
  std::vector<FeaturePoint> sums(k), anchors(k);
  std::vector<std::size_t> counts(k);

  for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
    cb.inertia_history.push_back(assign_all(points, cb.centroids, labels, dist));

    // Sums are taken relative to each cluster's first member, so a cluster
    // of identical points gets that point back exactly.
    std::fill(sums.begin(), sums.end(), FeaturePoint{});
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = labels[i];
      if (counts[c]++ == 0) anchors[c] = points[i];
      for (std::size_t d = 0; d < kAnatomicalDims; ++d) sums[c][d] += points[i][d] - anchors[c][d];
    }
    double moved = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      FeaturePoint mean;
      for (std::size_t d = 0; d < kAnatomicalDims; ++d) {
        mean[d] = anchors[c][d] + sums[c][d] / static_cast<double>(counts[c]);
      }
      moved = std::max(moved, std::sqrt(squared_distance(mean, cb.centroids[c])));
      cb.centroids[c] = mean;
    }
    // Distances to the updated centroids decide which point an empty cluster takes.
    for (std::size_t i = 0; i < n; ++i) dist[i] = squared_distance(points[i], cb.centroids[labels[i]]);
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      const auto far = static_cast<std::size_t>(std::max_element(dist.begin(), dist.end()) - dist.begin());
      moved = std::max(moved, std::sqrt(squared_distance(points[far], cb.centroids[c])));
      cb.centroids[c] = points[far];
      labels[far] = c;
      dist[far] = 0.0;
    }
    if (moved < options.tol) break;
  }
  cb.inertia = assign_all(points, cb.centroids, labels, dist);
  cb.inertia_history.push_back(cb.inertia);
  return cb;
}

Codebook fit_codebook(std::span<const FeaturePoint> points, std::size_t k, std::uint64_t seed,
                      const KMeansOptions& options) {
  std::vector<std::vector<double>> rows;
  rows.reserve(points.size());
  for (const auto& p : points) rows.emplace_back(p.begin(), p.end());
  const auto scaler = standardize_fit(rows);
  std::vector<FeaturePoint> scaled(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t d = 0; d < kAnatomicalDims; ++d) {
      scaled[i][d] = (points[i][d] - scaler.mean[d]) / scaler.std[d];
    }
  }
  auto cb = kmeans_fit(scaled, k, seed, options);
  cb.scaler = scaler;
  return cb;
}

std::size_t assign(const Codebook& codebook, const FeaturePoint& point) {
  FeaturePoint scaled;
  for (std::size_t d = 0; d < kAnatomicalDims; ++d) {
    scaled[d] = (point[d] - codebook.scaler.mean[d]) / codebook.scaler.std[d];
  }
  return nearest_centroid(codebook.centroids, scaled);
}

std::vector<double> bow_histogram(const Codebook& codebook, std::span<const FeaturePoint> stream) {
  if (stream.empty()) throw Error(ErrorCode::EmptyStream, "no anatomical frames to encode");
  std::vector<std::size_t> counts(codebook.size(), 0);
  for (const auto& p : stream) ++counts[assign(codebook, p)];
  std::vector<double> hist(codebook.size());
  const auto n = static_cast<double>(stream.size());
  for (std::size_t c = 0; c < hist.size(); ++c) hist[c] = static_cast<double>(counts[c]) / n;
  return hist;
}

std::vector<double> build_feature_vector(const GaitFeatures& gait, std::span<const double> histogram) {
  std::vector<double> v{gait.num_steps, gait.avg_step_duration_s, gait.turn_duration_s};
  v.insert(v.end(), histogram.begin(), histogram.end());
  return v;
}

std::vector<FeaturePoint> to_points(std::span<const AnatomicalFrameFeatures> rows) {
  std::vector<FeaturePoint> pts;
  pts.reserve(rows.size());
  for (const auto& r : rows) pts.push_back(r.as_array());
  return pts;
}

nlohmann::json to_json(const Codebook& codebook) {
  return {{"M", codebook.size()},
          {"seed", codebook.seed},
          {"centroids", codebook.centroids},
          {"scaler", to_json(codebook.scaler)},
          {"inertia", codebook.inertia}};
}

Codebook codebook_from_json(const nlohmann::json& j) {
  try {
    Codebook cb;
    cb.seed = j.at("seed").get<std::uint64_t>();
    cb.centroids = j.at("centroids").get<std::vector<FeaturePoint>>();
    cb.scaler = scaler_from_json(j.at("scaler"));
    cb.inertia = j.value("inertia", 0.0);
    if (j.at("M").get<std::size_t>() != cb.centroids.size()) {
      throw Error(ErrorCode::MalformedRecord, "codebook M does not match the centroid count");
    }
    if (cb.scaler.dim() != kAnatomicalDims) throw Error(ErrorCode::MalformedRecord, "codebook scaler must be 4-d");
    return cb;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedRecord, std::string("codebook: ") + e.what());
  }
}

}  // namespace gugt
