#include <doctest.h>

#include <random>

#include "gugt/encoding.hpp"
#include "gugt/error.hpp"
#include "oracles.hpp"

using namespace gugt;

namespace {

std::vector<FeaturePoint> random_points(std::mt19937_64& rng, std::size_t n, double spread = 1.0) {
  std::normal_distribution<double> g(0.0, spread);
  std::vector<FeaturePoint> pts(n);
  for (auto& p : pts)
    for (auto& x : p) x = g(rng);
  return pts;
}

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("K=1 gives the mean") {
  std::mt19937_64 rng(1);
  const auto pts = random_points(rng, 50);
  const auto cb = kmeans_fit(pts, 1, 3);
  REQUIRE(cb.size() == 1);
  FeaturePoint mean{};
  for (const auto& p : pts)
    for (std::size_t d = 0; d < 4; ++d) mean[d] += p[d] / 50.0;
  double ss = 0.0;
  for (const auto& p : pts)
    for (std::size_t d = 0; d < 4; ++d) ss += (p[d] - mean[d]) * (p[d] - mean[d]);
  for (std::size_t d = 0; d < 4; ++d) CHECK(cb.centroids[0][d] == doctest::Approx(mean[d]));
  CHECK(cb.inertia == doctest::Approx(ss));
}

TEST_CASE("two blobs") {
  std::mt19937_64 rng(2);
  std::vector<FeaturePoint> pts;
  for (auto p : random_points(rng, 40, 0.1)) pts.push_back(p);
  for (auto p : random_points(rng, 40, 0.1)) {
    for (auto& x : p) x += 5.0;
    pts.push_back(p);
  }
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto cb = kmeans_fit(pts, 2, seed);
    const auto in_box = [&](const FeaturePoint& c, std::size_t from, std::size_t to) {
      for (std::size_t d = 0; d < 4; ++d) {
        double lo = 1e9, hi = -1e9;
        for (auto i = from; i < to; ++i) {
          lo = std::min(lo, pts[i][d]);
          hi = std::max(hi, pts[i][d]);
        }
        if (c[d] < lo || c[d] > hi) return false;
      }
      return true;
    };
    const bool a = in_box(cb.centroids[0], 0, 40) && in_box(cb.centroids[1], 40, 80);
    const bool b = in_box(cb.centroids[1], 0, 40) && in_box(cb.centroids[0], 40, 80);
    CHECK((a || b));
  }
}

TEST_CASE("ten clusters and distinct centroids") {
  std::mt19937_64 rng(3);
  const auto pts = random_points(rng, 200);
  const auto cb = kmeans_fit(pts, 10, 4);
  REQUIRE(cb.size() == 10);
  for (std::size_t a = 0; a < 10; ++a)
    for (std::size_t b = a + 1; b < 10; ++b) CHECK(cb.centroids[a] != cb.centroids[b]);
}

TEST_CASE("inertia never increases") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = 10 + rng() % 200;
    const auto k = 1 + rng() % 10;
    const auto cb = kmeans_fit(random_points(rng, n), k, rng());
    REQUIRE(cb.inertia_history.size() >= 2);
    for (std::size_t i = 1; i < cb.inertia_history.size(); ++i) {
      CHECK(cb.inertia_history[i] <= cb.inertia_history[i - 1] * (1 + 1e-12));
    }
    CHECK(cb.inertia == cb.inertia_history.back());
  }
}

TEST_CASE("K equal to the distinct count gives zero inertia") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto distinct = random_points(rng, 1 + rng() % 12);
    std::vector<FeaturePoint> pts;
    for (const auto& p : distinct)
      for (std::size_t r = 0; r < 1 + rng() % 4; ++r) pts.push_back(p);
    std::shuffle(pts.begin(), pts.end(), rng);
    const auto cb = kmeans_fit(pts, distinct.size(), rng());
    CHECK(cb.inertia == 0.0);
  }
}

TEST_CASE("fitting is deterministic") {
  std::mt19937_64 rng(6);
  const auto pts = random_points(rng, 150);
  const auto a = kmeans_fit(pts, 7, 42);
  const auto b = kmeans_fit(pts, 7, 42);
  CHECK(a.centroids == b.centroids);
  CHECK(a.inertia_history == b.inertia_history);
  const auto c = fit_codebook(pts, 7, 42);
  const auto d = fit_codebook(pts, 7, 42);
  CHECK(c.centroids == d.centroids);
  CHECK(c.scaler == d.scaler);
}

TEST_CASE("k-means preconditions") {
  std::mt19937_64 rng(7);
  const auto pts = random_points(rng, 3);
  CHECK(code_of([&] { kmeans_fit(pts, 4, 1); }) == ErrorCode::TooFewPoints);
  const std::vector<FeaturePoint> same(10, FeaturePoint{1, 2, 3, 4});
  CHECK(code_of([&] { kmeans_fit(same, 2, 1); }) == ErrorCode::TooFewDistinctPoints);
  CHECK(kmeans_fit(same, 1, 1).inertia == 0.0);
}

TEST_CASE("assignment") {
  Codebook cb;
  cb.centroids = {{0, 0, 0, 0}, {2, 0, 0, 0}, {0, 5, 0, 0}, {1, 1, 1, 1}};
  CHECK(assign(cb, {1, 1, 1, 1}) == 3);
  CHECK(assign(cb, {1, 0, 0, 0}) == 0);  // equidistant from 0 and 1
  std::mt19937_64 rng(8);
  const auto pts = random_points(rng, 300);
  const auto fitted = fit_codebook(pts, 8, 9);
  for (const auto& p : pts) {
    FeaturePoint z;
    for (std::size_t d = 0; d < 4; ++d) z[d] = (p[d] - fitted.scaler.mean[d]) / fitted.scaler.std[d];
    CHECK(assign(fitted, p) == oracle::nearest(fitted.centroids, z));
  }
}

TEST_CASE("bag of words histogram") {
  Codebook cb;
  cb.centroids = {{0, 0, 0, 0}, {2, 0, 0, 0}, {0, 5, 0, 0}};
  const std::vector<FeaturePoint> twos(7, cb.centroids[2]);
  CHECK(bow_histogram(cb, twos) == std::vector<double>{0.0, 0.0, 1.0});
  CHECK(code_of([&] { bow_histogram(cb, std::vector<FeaturePoint>{}); }) == ErrorCode::EmptyStream);

  std::mt19937_64 rng(9);
  const auto stream = random_points(rng, 333, 2.0);
  const auto h = bow_histogram(cb, stream);
  double sum = 0.0;
  for (double w : h) {
    CHECK(w >= 0.0);
    sum += w;
  }
  CHECK(std::abs(sum - 1.0) < 1e-12);
  auto doubled = stream;
  doubled.insert(doubled.end(), stream.begin(), stream.end());
  CHECK(bow_histogram(cb, doubled) == h);

  // relabeling centroids permutes the weights the same way
  Codebook perm = cb;
  perm.centroids = {cb.centroids[2], cb.centroids[0], cb.centroids[1]};
  const auto hp = bow_histogram(perm, stream);
  CHECK(hp[0] == h[2]);
  CHECK(hp[1] == h[0]);
  CHECK(hp[2] == h[1]);
}

TEST_CASE("feature vector layout") {
  const GaitFeatures g{16, 0.6, 1.5};
  for (std::size_t m : {4u, 10u}) {
    const std::vector<double> hist(m, 1.0 / static_cast<double>(m));
    const auto v = build_feature_vector(g, hist);
    CHECK(v.size() == 3 + m);
    CHECK(v[0] == 16);
    CHECK(v[1] == 0.6);
    CHECK(v[2] == 1.5);
    CHECK(v[3] == hist[0]);
  }
}

TEST_CASE("codebook json round trip") {
  std::mt19937_64 rng(10);
  const auto pts = random_points(rng, 120);
  const auto cb = fit_codebook(pts, 6, 77);
  const auto j = to_json(cb);
  CHECK(j.at("M") == 6);
  CHECK(j.at("seed") == 77);
  CHECK(j.at("scaler").at("mean").size() == 4);
  const auto back = codebook_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.centroids == cb.centroids);
  CHECK(back.scaler == cb.scaler);
  CHECK(back.seed == cb.seed);
  const auto stream = random_points(rng, 50);
  CHECK(bow_histogram(back, stream) == bow_histogram(cb, stream));

  auto bad = j;
  bad["M"] = 5;
  CHECK(code_of([&] { codebook_from_json(bad); }) == ErrorCode::MalformedRecord);
  CHECK(code_of([&] { codebook_from_json(nlohmann::json::object()); }) == ErrorCode::MalformedRecord);
}
