#pragma once

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "chaincluster/btc_ingest.hpp"
#include "chaincluster/linalg.hpp"

namespace chaincluster {

// Undirected weighted graph over super-addresses. `amounts` holds the
// historical satoshi total between two users summed over both directions;
// `weights` is amounts scaled by the single largest amount, so the largest
// edge weight is exactly 1.
struct UserGraph {
  std::vector<std::int64_t> nodes;  // canonical super ids, ascending
  Matrix amounts;
  Matrix weights;
};

// Accumulates per-transaction flows between distinct super-addresses. Each
// output amount is attributed to the input side; when the inputs span
// several super-addresses the amount is split across them proportionally to
// their input sums. Flows inside one super-address are dropped.
UserGraph build_user_graph(const std::vector<TxRecord>& txs,
                           const AddressPartition& partition,
                           const std::unordered_set<std::int64_t>& surviving);

struct LaplacianBundle {
  Vector degrees;     // row sums of W
  Matrix laplacian;   // D - W
  Matrix normalized;  // D^{-1/2} (D - W) D^{-1/2}
  bool has_isolated = false;
};

// Degree-zero rows are rejected unless pseudo_degree is set, in which case
// the corresponding D^{-1/2} entries are treated as zero and the bundle is
// flagged.
LaplacianBundle laplacians(const Matrix& weights, bool pseudo_degree = false);

}  // namespace chaincluster
