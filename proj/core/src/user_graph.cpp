#include "chaincluster/user_graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>

#include "chaincluster/errors.hpp"

namespace chaincluster {

UserGraph build_user_graph(const std::vector<TxRecord>& txs,
                           const AddressPartition& partition,
                           const std::unordered_set<std::int64_t>& surviving) {
  if (surviving.empty())
    throw ValidationError("build_user_graph: no surviving super-addresses");

  UserGraph graph;
  graph.nodes.assign(surviving.begin(), surviving.end());
  std::sort(graph.nodes.begin(), graph.nodes.end());

  std::unordered_map<std::int64_t, Eigen::Index> index;
  index.reserve(graph.nodes.size());
  for (std::size_t i = 0; i < graph.nodes.size(); ++i)
    index[graph.nodes[i]] = static_cast<Eigen::Index>(i);

  const Eigen::Index n = static_cast<Eigen::Index>(graph.nodes.size());
  graph.amounts = Matrix::Zero(n, n);

  const SuperResolver resolver(partition);
  std::map<Eigen::Index, double> input_sums;
  for (const TxRecord& tx : txs) {
    input_sums.clear();
    double total_in = 0.0;
    for (const auto& [addr, amount] : tx.inputs) {
      const auto it = index.find(resolver.super_of(addr));
      if (it == index.end()) continue;
      input_sums[it->second] += static_cast<double>(amount);
      total_in += static_cast<double>(amount);
    }
    if (input_sums.empty()) continue;

    for (const auto& [addr, amount] : tx.outputs) {
      const auto it = index.find(resolver.super_of(addr));
      if (it == index.end()) continue;
      const Eigen::Index out = it->second;
      for (const auto& [in, in_sum] : input_sums) {
        if (in == out) continue;
        // amounts with an all-zero input side are split evenly
        const double share =
            total_in > 0.0 ? in_sum / total_in
                           : 1.0 / static_cast<double>(input_sums.size());
        const double flow = static_cast<double>(amount) * share;
        graph.amounts(in, out) += flow;
        graph.amounts(out, in) += flow;
      }
    }
  }

  const double max_amount = graph.amounts.maxCoeff();
  if (max_amount <= 0.0) throw ValidationError("build_user_graph: empty graph");
  graph.weights = graph.amounts / max_amount;
  return graph;
}

LaplacianBundle laplacians(const Matrix& weights, bool pseudo_degree) {
  const Eigen::Index n = weights.rows();
  if (weights.cols() != n)
    throw ValidationError("laplacians: weight matrix must be square");
  const double max_abs = weights.cwiseAbs().maxCoeff();
  if ((weights - weights.transpose()).cwiseAbs().maxCoeff() >
      1e-10 * std::max(max_abs, 1e-300))
    throw ValidationError("laplacians: weight matrix must be symmetric");
  if (weights.minCoeff() < 0.0)
    throw ValidationError("laplacians: weights must be non-negative");
  if (weights.diagonal().cwiseAbs().maxCoeff() >
      1e-12 * std::max(max_abs, 1e-300))
    throw ValidationError("laplacians: diagonal must be zero");

  LaplacianBundle bundle;
  bundle.degrees = weights.rowwise().sum();
  bundle.laplacian = Matrix(-weights);
  bundle.laplacian.diagonal() += bundle.degrees;

  Vector inv_sqrt(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (bundle.degrees[i] > 0.0) {
      inv_sqrt[i] = 1.0 / std::sqrt(bundle.degrees[i]);
    } else {
      if (!pseudo_degree)
        throw ValidationError(
            "laplacians: isolated node " + std::to_string(i) +
            " (opt into pseudo-degree to zero its rows instead)");
      inv_sqrt[i] = 0.0;
      bundle.has_isolated = true;
    }
  }
  bundle.normalized =
      inv_sqrt.asDiagonal() * bundle.laplacian * inv_sqrt.asDiagonal();
  bundle.normalized = 0.5 * (bundle.normalized + bundle.normalized.transpose()).eval();
  return bundle;
}

}  // namespace chaincluster
