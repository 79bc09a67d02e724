#include "chaincluster/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "chaincluster/errors.hpp"
#include "chaincluster/rng.hpp"

namespace chaincluster {

namespace {

double squared_distance(const Matrix& points, Eigen::Index i,
                        const Matrix& centroids, int c) {
  return (points.row(i) - centroids.row(c)).squaredNorm();
}

// k-means++: first centroid uniform, the rest D^2-sampled against the
// nearest already-chosen centroid.
Matrix seed_centroids(const Matrix& points, int k, std::mt19937_64& rng) {
  const Eigen::Index n = points.rows();
  Matrix centroids(k, points.cols());
  std::vector<char> chosen(n, 0);

  Eigen::Index first = static_cast<Eigen::Index>(
      uniform_below(rng, static_cast<std::uint64_t>(n)));
  centroids.row(0) = points.row(first);
  chosen[first] = 1;

  Vector dist2(n);
  for (Eigen::Index i = 0; i < n; ++i)
    dist2[i] = squared_distance(points, i, centroids, 0);

  for (int c = 1; c < k; ++c) {
    const double total = dist2.sum();
    Eigen::Index pick = -1;
    if (total > 0.0) {
      const double target = uniform_double(rng) * total;
      double cumulative = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        cumulative += dist2[i];
        if (cumulative > target) {
          pick = i;
          break;
        }
      }
      if (pick < 0) pick = n - 1;  // fp slack at the right edge
    } else {
      // all remaining points coincide with a centroid: take the lowest
      // index not used yet so k distinct slots still get filled
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!chosen[i]) {
          pick = i;
          break;
        }
      }
      if (pick < 0) pick = 0;
    }
    centroids.row(c) = points.row(pick);
    chosen[pick] = 1;
    for (Eigen::Index i = 0; i < n; ++i)
      dist2[i] = std::min(dist2[i], squared_distance(points, i, centroids, c));
  }
  return centroids;
}

struct RestartResult {
  std::vector<int> labels;
  double distortion = 0.0;
};

RestartResult run_restart(const Matrix& points, int k, std::uint64_t seed,
                          std::vector<double>* distortion_trace) {
  const Eigen::Index n = points.rows();
  auto rng = make_stream(seed, StreamPurpose::kKmeans);
  Matrix centroids = seed_centroids(points, k, rng);

  std::vector<int> labels(n, -1);
  std::vector<int> previous;
  std::vector<Eigen::Index> sizes(k, 0);
  double previous_distortion = std::numeric_limits<double>::infinity();

  for (int iteration = 0; iteration < kKmeansMaxIterations; ++iteration) {
    // assign, ties to the lowest centroid index
    std::fill(sizes.begin(), sizes.end(), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = squared_distance(points, i, centroids, 0);
      for (int c = 1; c < k; ++c) {
        const double d = squared_distance(points, i, centroids, c);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      labels[i] = best;
      ++sizes[best];
    }

    // repair empty clusters: move the point farthest from the stale
    // centroid, taken from a cluster that keeps at least one member
    for (int c = 0; c < k; ++c) {
      if (sizes[c] > 0) continue;
      Eigen::Index farthest = -1;
      double far_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (sizes[labels[i]] < 2) continue;
        const double d = squared_distance(points, i, centroids, c);
        if (d > far_d) {
          far_d = d;
          farthest = i;
        }
      }
      if (farthest < 0)
        throw NumericalError("kmeans: unable to repair empty cluster");
      --sizes[labels[farthest]];
      labels[farthest] = c;
      ++sizes[c];
    }

    // update step
    centroids.setZero();
    for (Eigen::Index i = 0; i < n; ++i) centroids.row(labels[i]) += points.row(i);
    for (int c = 0; c < k; ++c) centroids.row(c) /= static_cast<double>(sizes[c]);

    double distortion = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      distortion += squared_distance(points, i, centroids, labels[i]);

    if (distortion > previous_distortion * (1.0 + 1e-12) + 1e-12)
      throw NumericalError("kmeans: distortion increased across an iteration");
    previous_distortion = distortion;
    if (distortion_trace) distortion_trace->push_back(distortion);

    if (labels == previous) break;
    previous = labels;
  }

  return RestartResult{std::move(labels), previous_distortion};
}

}  // namespace

KmeansResult kmeans(const Matrix& points, int k, std::uint64_t seed,
                    KmeansTrace* trace) {
  const Eigen::Index n = points.rows();
  if (k <= 0) throw ValidationError("kmeans: k must be positive");
  if (static_cast<Eigen::Index>(k) > n)
    throw ValidationError("kmeans: k = " + std::to_string(k) +
                          " exceeds point count " + std::to_string(n));

  if (trace) trace->restart_distortions.assign(kKmeansRestarts, {});

  KmeansResult best;
  bool have_best = false;
  for (int restart = 0; restart < kKmeansRestarts; ++restart) {
    std::vector<double>* restart_trace =
        trace ? &trace->restart_distortions[restart] : nullptr;
    RestartResult r = run_restart(points, k, seed + restart, restart_trace);
    if (!have_best || r.distortion < best.distortion) {
      best.labels = std::move(r.labels);
      best.distortion = r.distortion;
      have_best = true;
    }
  }
  best.k = k;
  return best;
}

}  // namespace chaincluster
