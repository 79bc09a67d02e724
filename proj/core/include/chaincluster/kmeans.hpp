#pragma once

#include <cstdint>
#include <vector>

#include "chaincluster/linalg.hpp"

namespace chaincluster {

inline constexpr int kKmeansRestarts = 10;
inline constexpr int kKmeansMaxIterations = 300;

struct KmeansResult {
  std::vector<int> labels;  // point index -> cluster id in [0, k)
  int k = 0;
  double distortion = 0.0;  // sum of squared distances to assigned centroids
};

// Per-restart distortion after each Lloyd iteration, for monotonicity checks.
struct KmeansTrace {
  std::vector<std::vector<double>> restart_distortions;
};

// Lloyd iterations from k-means++ initialization. Runs kKmeansRestarts
// restarts seeded seed..seed+9 and keeps the lowest distortion (ties go to
// the lowest restart index). A restart stops when the assignment is stable
// or after kKmeansMaxIterations. Empty clusters are repaired by reseeding
// the cluster's centroid at the point farthest from it. All ties anywhere
// break toward the lowest index, so results depend only on (points, k, seed).
KmeansResult kmeans(const Matrix& points, int k, std::uint64_t seed,
                    KmeansTrace* trace = nullptr);

}  // namespace chaincluster
