#pragma once

#include <cstdint>
#include <optional>

#include "chaincluster/clustering.hpp"
#include "chaincluster/linalg.hpp"

namespace chaincluster {

// Parameters of the planted-partition benchmark: N nodes in K communities,
// within/between edge probabilities, R lead nodes exciting a graph filter
// of order L, observed over T noisy instances.
struct SynthSpec {
  int nodes = 150;
  int communities = 5;
  double p_within = 0.89;
  double p_between = 0.11;
  int lead_nodes = 15;
  int filter_order = 3;
  std::optional<double> alpha;  // empty: 0.9 / spectral radius of S
  double sigma = 0.0;
  int instances = 1000;
  std::uint64_t seed = 1;

  void validate() const;
};

struct PlantedGraph {
  Matrix adjacency;
  ClusterAssignment truth;
  bool empty = false;  // no edges drawn
};

// N nodes split into K near-equal communities (remainder spread over the
// first ones); each unordered pair draws an edge with probability p_within
// or p_between from the seed's graph stream.
PlantedGraph gen_planted_partition(const SynthSpec& spec);

// (I - alpha*S)^(order-1) * input by repeated multiplication.
Vector apply_graph_filter(const Matrix& s, double alpha, int order,
                          const Vector& input);

// Largest eigenvalue magnitude via deterministic power iteration; used to
// pick the automatic filter coefficient.
double spectral_radius(const Matrix& s);

struct SignalData {
  Matrix signals;  // N x T, one observed instance per column
  ClusterAssignment truth;
  Matrix lead_pattern;  // B, N x R
  Matrix adjacency;
  Matrix laplacian;  // S = D - A
  double alpha = 0.0;  // resolved coefficient
};

// Full benchmark draw: planted graph, combinatorial Laplacian, lead nodes
// (at least one per community when R >= K), excitation pattern B with
// max(1, round(R*d/N)) ones per lead row, and per-instance observations
// y_t = H(S) B a_t + noise. Every stage draws from its own substream, so
// instances are independent of evaluation order.
SignalData gen_signals(const SynthSpec& spec);

// Observation matrix from an already-filtered lead basis H(S)*B: column t
// is filtered_leads * a_t + sigma * w_t with standard normal a_t, w_t drawn
// from per-instance substreams of `seed`.
Matrix draw_filtered_signals(const Matrix& filtered_leads, int nodes,
                             int instances, double sigma, std::uint64_t seed);

}  // namespace chaincluster
