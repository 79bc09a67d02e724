#include "chaincluster/clustering.hpp"

#include <functional>
#include <limits>
#include <utility>

#include "chaincluster/eig.hpp"
#include "chaincluster/errors.hpp"
#include "chaincluster/kmeans.hpp"
#include "chaincluster/user_graph.hpp"

namespace chaincluster {

std::string to_string(ClusterMode mode) {
  switch (mode) {
    case ClusterMode::kSmallestEig:
      return "smallest-eig";
    case ClusterMode::kPaperLiteral:
      return "paper-literal";
    case ClusterMode::kLowRank:
      return "lowrank";
  }
  return "unknown";
}

ClusterMode cluster_mode_from_string(const std::string& name) {
  if (name == "smallest-eig") return ClusterMode::kSmallestEig;
  if (name == "paper-literal") return ClusterMode::kPaperLiteral;
  if (name == "lowrank") return ClusterMode::kLowRank;
  throw ValidationError("unknown cluster mode '" + name + "'");
}

ClusterResult spectral_cluster(const Matrix& weights, int k,
                               std::uint64_t seed, ClusterMode mode) {
  const Eigen::Index n = weights.rows();
  if (k < 2) throw ValidationError("spectral_cluster: needs k >= 2");
  if (static_cast<Eigen::Index>(k) > n)
    throw ValidationError("spectral_cluster: k exceeds node count");
  if (mode == ClusterMode::kLowRank)
    throw ValidationError("spectral_cluster: mode must pick an eigenvector side");

  const LaplacianBundle bundle = laplacians(weights, /*pseudo_degree=*/true);
  const EigenResult eig = sym_eig(bundle.normalized);

  // embedding columns: either the k largest eigenvectors verbatim, or the
  // k smallest ordered by ascending eigenvalue so the smoothest comes first
  Matrix embedding(n, k);
  for (int j = 0; j < k; ++j) {
    const Eigen::Index column = mode == ClusterMode::kPaperLiteral
                                    ? static_cast<Eigen::Index>(j)
                                    : n - 1 - static_cast<Eigen::Index>(j);
    embedding.col(j) = eig.vectors.col(column);
  }

  ClusterResult result;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double norm = embedding.row(i).norm();
    if (norm > 1e-12) {
      embedding.row(i) /= norm;
    } else {
      embedding.row(i).setZero();
      result.degenerate_rows = true;
    }
  }

  KmeansResult km = kmeans(embedding, k, seed);
  result.assignment =
      ClusterAssignment{std::move(km.labels), k, km.distortion, seed, mode};
  result.embedding = std::move(embedding);
  return result;
}

ClusterResult lowrank_cluster(const Matrix& signals, int k,
                              std::uint64_t seed, bool center) {
  const Eigen::Index n = signals.rows();
  if (k < 1) throw ValidationError("lowrank_cluster: needs k >= 1");
  if (static_cast<Eigen::Index>(k) > n)
    throw ValidationError("lowrank_cluster: k exceeds node count");

  const Matrix covariance = sample_covariance(signals, center);
  const EigenResult eig = sym_eig(covariance);

  ClusterResult result;
  result.embedding = eig.vectors.leftCols(k);
  KmeansResult km = kmeans(result.embedding, k, seed);
  result.assignment = ClusterAssignment{std::move(km.labels), k, km.distortion,
                                        seed, ClusterMode::kLowRank};
  return result;
}

ClusterResult token_cluster(const AttentionMatrix& matrix, int k,
                            std::uint64_t seed, bool center) {
  // users become instances: signal t lives on token nodes
  return lowrank_cluster(matrix.values.transpose(), k, seed, center);
}

ElbowResult elbow_from_curve(const std::vector<ElbowPoint>& curve) {
  if (curve.size() < 3)
    throw ValidationError("elbow: need at least 3 curve points");

  ElbowResult result;
  result.curve = curve;

  double best = -std::numeric_limits<double>::infinity();
  int best_k = curve[1].k;
  bool any_curvature = false;
  for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
    const double curvature = curve[i - 1].distortion -
                             2.0 * curve[i].distortion +
                             curve[i + 1].distortion;
    if (curvature > 1e-12) any_curvature = true;
    if (curvature > best) {
      best = curvature;
      best_k = curve[i].k;
    }
  }

  if (!any_curvature) {
    result.degenerate = true;
    result.k_star = curve[1].k;
  } else {
    result.k_star = best_k;
  }
  return result;
}

namespace {

ElbowResult elbow_over(const std::function<double(int)>& distortion_at,
                       int k_lo, int k_hi, Eigen::Index n) {
  if (k_lo < 2 || k_hi > static_cast<int>(n) - 1)
    throw ValidationError("elbow: k range must lie within [2, n-1]");
  if (k_hi - k_lo + 1 < 3)
    throw ValidationError("elbow: k range must span at least 3 values");

  std::vector<ElbowPoint> curve;
  for (int k = k_lo; k <= k_hi; ++k)
    curve.push_back(ElbowPoint{k, distortion_at(k)});
  return elbow_from_curve(curve);
}

}  // namespace

ElbowResult elbow_select_spectral(const Matrix& weights, int k_lo, int k_hi,
                                  std::uint64_t seed, ClusterMode mode) {
  return elbow_over(
      [&](int k) {
        return spectral_cluster(weights, k, seed, mode).assignment.distortion;
      },
      k_lo, k_hi, weights.rows());
}

ElbowResult elbow_select_lowrank(const Matrix& signals, int k_lo, int k_hi,
                                 std::uint64_t seed, bool center) {
  return elbow_over(
      [&](int k) {
        return lowrank_cluster(signals, k, seed, center).assignment.distortion;
      },
      k_lo, k_hi, signals.rows());
}

}  // namespace chaincluster
