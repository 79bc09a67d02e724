#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chaincluster/eth_ingest.hpp"
#include "chaincluster/linalg.hpp"

namespace chaincluster {

// Which eigenvectors of the normalized Laplacian feed the spectral
// embedding. kSmallestEig is the standard normalized-cut choice and the
// default; kPaperLiteral takes the largest instead. kLowRank marks results
// of the covariance-based method.
enum class ClusterMode {
  kSmallestEig,
  kPaperLiteral,
  kLowRank,
};

std::string to_string(ClusterMode mode);
ClusterMode cluster_mode_from_string(const std::string& name);

struct ClusterAssignment {
  std::vector<int> labels;  // node index -> community id in [0, k)
  int k = 0;
  double distortion = 0.0;
  std::uint64_t seed = 0;
  ClusterMode mode = ClusterMode::kLowRank;
};

struct ClusterResult {
  ClusterAssignment assignment;
  Matrix embedding;  // the n x k points handed to k-means
  // spectral rows orthogonal to the chosen eigenspace stay zero vectors
  bool degenerate_rows = false;
};

// Spectral clustering of a weighted user graph: build the normalized
// Laplacian, embed each node with k of its eigenvectors, renormalize rows
// to unit length and k-means the rows. Requires k >= 2.
ClusterResult spectral_cluster(const Matrix& weights, int k,
                               std::uint64_t seed,
                               ClusterMode mode = ClusterMode::kSmallestEig);

// Community detection from low-rank excitation: eigenvectors of the K
// largest eigenvalues of the raw signal covariance feed k-means directly,
// without row renormalization. `signals` holds one length-N column per
// instance.
ClusterResult lowrank_cluster(const Matrix& signals, int k,
                              std::uint64_t seed, bool center = false);

// Token clustering by exchanging the sides of the bipartite graph: users
// become the observation instances, labels index tokens.
ClusterResult token_cluster(const AttentionMatrix& matrix, int k,
                            std::uint64_t seed, bool center = false);

struct ElbowPoint {
  int k = 0;
  double distortion = 0.0;
};

struct ElbowResult {
  int k_star = 0;
  std::vector<ElbowPoint> curve;
  bool degenerate = false;  // flat curve, k_star fell back to the first knee candidate
};

// Knee of a distortion curve: the interior k maximizing the discrete second
// difference curve(k-1) - 2*curve(k) + curve(k+1), ties to the smallest k.
// A flat curve (all second differences <= 1e-12) is flagged and yields the
// first interior k.
ElbowResult elbow_from_curve(const std::vector<ElbowPoint>& curve);

// Elbow selection driving one of the two clustering routes over an
// inclusive k range, which must lie within [2, n-1] and span >= 3 values.
ElbowResult elbow_select_spectral(const Matrix& weights, int k_lo, int k_hi,
                                  std::uint64_t seed, ClusterMode mode);
ElbowResult elbow_select_lowrank(const Matrix& signals, int k_lo, int k_hi,
                                 std::uint64_t seed, bool center = false);

}  // namespace chaincluster
