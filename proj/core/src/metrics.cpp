#include "chaincluster/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "chaincluster/errors.hpp"

namespace chaincluster {

namespace {

void check_labels(const std::vector<int>& labels, int k) {
  if (k < 1) throw ValidationError("metrics: k must be positive");
  std::vector<Eigen::Index> counts(k, 0);
  for (int label : labels) {
    if (label < 0 || label >= k)
      throw ValidationError("metrics: label " + std::to_string(label) +
                            " outside [0, " + std::to_string(k) + ")");
    ++counts[label];
  }
  for (int c = 0; c < k; ++c)
    if (counts[c] == 0)
      throw ValidationError("metrics: cluster " + std::to_string(c) +
                            " is empty");
}

}  // namespace

double silhouette(const Matrix& points, const std::vector<int>& labels,
                  int k) {
  const Eigen::Index n = points.rows();
  if (static_cast<Eigen::Index>(labels.size()) != n)
    throw ValidationError("silhouette: labels/points size mismatch");
  if (k < 2) throw ValidationError("silhouette: needs k >= 2");
  check_labels(labels, k);

  std::vector<Eigen::Index> sizes(k, 0);
  for (int label : labels) ++sizes[label];

  double total = 0.0;
  std::vector<double> mean_to_cluster(k);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (sizes[labels[i]] == 1) continue;  // singleton scores 0

    std::fill(mean_to_cluster.begin(), mean_to_cluster.end(), 0.0);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      mean_to_cluster[labels[j]] += (points.row(i) - points.row(j)).norm();
    }
    const int own = labels[i];
    const double a = mean_to_cluster[own] / static_cast<double>(sizes[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      if (c == own) continue;
      b = std::min(b, mean_to_cluster[c] / static_cast<double>(sizes[c]));
    }
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

double modularity(const Matrix& weights, const std::vector<int>& labels,
                  int k) {
  const Eigen::Index n = weights.rows();
  if (weights.cols() != n)
    throw ValidationError("modularity: weight matrix must be square");
  if (static_cast<Eigen::Index>(labels.size()) != n)
    throw ValidationError("modularity: labels/matrix size mismatch");
  const double max_abs = weights.cwiseAbs().maxCoeff();
  if ((weights - weights.transpose()).cwiseAbs().maxCoeff() >
      1e-10 * std::max(max_abs, 1e-300))
    throw ValidationError("modularity: weight matrix must be symmetric");
  if (weights.minCoeff() < 0.0)
    throw ValidationError("modularity: weights must be non-negative");
  check_labels(labels, k);

  const double two_m = weights.sum();
  if (two_m <= 0.0) throw ValidationError("modularity: total weight is zero");

  const Vector degree = weights.rowwise().sum();
  std::vector<double> in_weight(k, 0.0);
  std::vector<double> total_degree(k, 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    total_degree[labels[i]] += degree[i];
    for (Eigen::Index j = 0; j < n; ++j)
      if (labels[j] == labels[i]) in_weight[labels[i]] += weights(i, j);
  }

  double q = 0.0;
  for (int c = 0; c < k; ++c) {
    const double fraction = total_degree[c] / two_m;
    q += in_weight[c] / two_m - fraction * fraction;
  }
  return q;
}

std::vector<int> max_score_assignment(const Matrix& score) {
  const Eigen::Index n = score.rows();
  if (score.cols() != n)
    throw ValidationError("assignment: score matrix must be square");

  // Kuhn-Munkres with potentials on the cost matrix -score, 1-based
  // scratch arrays with a dummy 0 row/column.
  const Matrix cost = -score;
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<Eigen::Index> match(n + 1, 0), way(n + 1, 0);

  for (Eigen::Index i = 1; i <= n; ++i) {
    match[0] = i;
    Eigen::Index j0 = 0;
    std::vector<double> minv(n + 1, std::numeric_limits<double>::infinity());
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const Eigen::Index i0 = match[j0];
      double delta = std::numeric_limits<double>::infinity();
      Eigen::Index j1 = 0;
      for (Eigen::Index j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double current = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (current < minv[j]) {
          minv[j] = current;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (Eigen::Index j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const Eigen::Index j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(n, -1);
  for (Eigen::Index j = 1; j <= n; ++j)
    row_to_col[match[j] - 1] = static_cast<int>(j - 1);
  return row_to_col;
}

double recovery_rate(const std::vector<int>& predicted, int predicted_k,
                     const std::vector<int>& truth, int truth_k) {
  if (predicted.size() != truth.size())
    throw ValidationError("recovery_rate: node sets differ in size");
  if (predicted.empty())
    throw ValidationError("recovery_rate: empty node set");
  check_labels(predicted, predicted_k);
  check_labels(truth, truth_k);

  const int dim = std::max(predicted_k, truth_k);
  Matrix confusion = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < predicted.size(); ++i)
    confusion(predicted[i], truth[i]) += 1.0;

  const std::vector<int> mapping = max_score_assignment(confusion);
  double matched = 0.0;
  for (int p = 0; p < dim; ++p) matched += confusion(p, mapping[p]);
  return matched / static_cast<double>(predicted.size());
}

}  // namespace chaincluster
