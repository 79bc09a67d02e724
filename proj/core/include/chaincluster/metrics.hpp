#pragma once

#include <optional>
#include <vector>

#include "chaincluster/linalg.hpp"

namespace chaincluster {

// The three evaluation measures used across commands. `recovery` is only
// present when ground truth exists.
struct MetricReport {
  std::optional<double> silhouette;
  std::optional<double> modularity;
  std::optional<double> recovery;
};

// Mean silhouette (b - a) / max(a, b) over all points, Euclidean distance in
// the supplied embedding. Singleton clusters score 0, as does the a = b = 0
// degenerate tie. Requires k >= 2 and every cluster id in [0, k) non-empty.
double silhouette(const Matrix& points, const std::vector<int>& labels, int k);

// Weighted Newman-Girvan modularity
//   Q = sum_c [ in_c / (2m) - (tot_c / (2m))^2 ]
// over a symmetric non-negative weight matrix with zero diagonal.
double modularity(const Matrix& weights, const std::vector<int>& labels,
                  int k);

// Fraction of nodes carrying the true label under the best one-to-one
// relabeling of predicted communities, computed exactly by optimal
// assignment on the confusion matrix.
double recovery_rate(const std::vector<int>& predicted, int predicted_k,
                     const std::vector<int>& truth, int truth_k);

// Maximum-total-score assignment on a square score matrix (Kuhn-Munkres via
// dual potentials). Returns the chosen column per row.
std::vector<int> max_score_assignment(const Matrix& score);

}  // namespace chaincluster
