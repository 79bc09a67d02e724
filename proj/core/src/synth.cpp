#include "chaincluster/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "chaincluster/errors.hpp"
#include "chaincluster/rng.hpp"

namespace chaincluster {

void SynthSpec::validate() const {
  if (nodes < 1) throw ValidationError("synth: nodes must be >= 1");
  if (communities < 1 || communities > nodes)
    throw ValidationError("synth: communities must be in [1, nodes]");
  if (p_within < 0.0 || p_within > 1.0 || p_between < 0.0 || p_between > 1.0)
    throw ValidationError("synth: edge probabilities must be in [0, 1]");
  if (p_between > p_within)
    throw ValidationError("synth: p_between must not exceed p_within");
  if (lead_nodes < 1 || lead_nodes > nodes)
    throw ValidationError("synth: lead_nodes must be in [1, nodes]");
  if (filter_order < 1) throw ValidationError("synth: filter_order must be >= 1");
  if (alpha && !(std::isfinite(*alpha)))
    throw ValidationError("synth: alpha must be finite");
  if (sigma < 0.0) throw ValidationError("synth: sigma must be >= 0");
  if (instances < 1) throw ValidationError("synth: instances must be >= 1");
}

PlantedGraph gen_planted_partition(const SynthSpec& spec) {
  spec.validate();
  const int n = spec.nodes;
  const int k = spec.communities;

  PlantedGraph graph;
  graph.truth.labels.resize(n);
  graph.truth.k = k;
  graph.truth.seed = spec.seed;

  // equal-size communities, remainder to the first n mod k of them
  const int base = n / k;
  const int remainder = n % k;
  int node = 0;
  for (int c = 0; c < k; ++c) {
    const int size = base + (c < remainder ? 1 : 0);
    for (int i = 0; i < size; ++i) graph.truth.labels[node++] = c;
  }

  auto rng = make_stream(spec.seed, StreamPurpose::kGraph);
  graph.adjacency = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double p = graph.truth.labels[i] == graph.truth.labels[j]
                           ? spec.p_within
                           : spec.p_between;
      if (uniform_double(rng) < p) {
        graph.adjacency(i, j) = 1.0;
        graph.adjacency(j, i) = 1.0;
      }
    }
  }
  graph.empty = graph.adjacency.sum() == 0.0;
  return graph;
}

Vector apply_graph_filter(const Matrix& s, double alpha, int order,
                          const Vector& input) {
  if (s.rows() != s.cols())
    throw ValidationError("apply_graph_filter: matrix must be square");
  if (s.rows() != input.size())
    throw ValidationError("apply_graph_filter: dimension mismatch");
  if (order < 1) throw ValidationError("apply_graph_filter: order must be >= 1");

  Vector result = input;
  for (int step = 0; step < order - 1; ++step)
    result = (result - alpha * (s * result)).eval();
  return result;
}

double spectral_radius(const Matrix& s) {
  const Eigen::Index n = s.rows();
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = 1.0 + static_cast<double>(i);
  v /= v.norm();

  double lambda = 0.0;
  for (int iteration = 0; iteration < 1000; ++iteration) {
    Vector w = s * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    w /= norm;
    const double next = w.dot(s * w);
    if (std::abs(next - lambda) <= 1e-10 * std::max(1.0, std::abs(next))) {
      return std::abs(next);
    }
    lambda = next;
    v = w;
  }
  return std::abs(lambda);
}

namespace {

// R lead nodes; when R >= K every community contributes at least one.
std::vector<int> pick_lead_nodes(const SynthSpec& spec,
                                 const std::vector<int>& labels,
                                 std::mt19937_64& rng) {
  const int n = spec.nodes;
  const int r = spec.lead_nodes;
  std::vector<char> is_lead(n, 0);
  int chosen = 0;

  if (r >= spec.communities) {
    std::vector<std::vector<int>> members(spec.communities);
    for (int i = 0; i < n; ++i) members[labels[i]].push_back(i);
    for (const auto& community : members) {
      const int pick = community[static_cast<std::size_t>(
          uniform_below(rng, community.size()))];
      is_lead[pick] = 1;
      ++chosen;
    }
  }

  std::vector<int> pool;
  for (int i = 0; i < n; ++i)
    if (!is_lead[i]) pool.push_back(i);
  while (chosen < r) {
    const std::size_t at = static_cast<std::size_t>(
        uniform_below(rng, pool.size()));
    is_lead[pool[at]] = 1;
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(at));
    ++chosen;
  }

  std::vector<int> leads;
  for (int i = 0; i < n; ++i)
    if (is_lead[i]) leads.push_back(i);
  return leads;
}

}  // namespace

SignalData gen_signals(const SynthSpec& spec) {
  spec.validate();
  PlantedGraph graph = gen_planted_partition(spec);

  SignalData data;
  data.truth = std::move(graph.truth);
  data.adjacency = std::move(graph.adjacency);
  data.laplacian = Matrix(-data.adjacency);
  data.laplacian.diagonal() += data.adjacency.rowwise().sum();

  const double radius = spectral_radius(data.laplacian);
  data.alpha = spec.alpha ? *spec.alpha : (radius > 0.0 ? 0.9 / radius : 0.0);

  auto lead_rng = make_stream(spec.seed, StreamPurpose::kLeads);
  const std::vector<int> leads =
      pick_lead_nodes(spec, data.truth.labels, lead_rng);

  const int n = spec.nodes;
  const int r = spec.lead_nodes;
  const double mean_degree = data.adjacency.sum() / static_cast<double>(n);
  const int ones_per_row = std::min(
      r, std::max(1, static_cast<int>(std::lround(
             static_cast<double>(r) * mean_degree / static_cast<double>(n)))));

  auto pattern_rng = make_stream(spec.seed, StreamPurpose::kLeadPattern);
  data.lead_pattern = Matrix::Zero(n, r);
  std::vector<int> columns(r);
  std::iota(columns.begin(), columns.end(), 0);
  for (int lead : leads) {
    // partial Fisher-Yates picks ones_per_row distinct columns
    for (int j = 0; j < ones_per_row; ++j) {
      const int swap_with = j + static_cast<int>(uniform_below(
                                    pattern_rng, static_cast<std::uint64_t>(r - j)));
      std::swap(columns[j], columns[swap_with]);
      data.lead_pattern(lead, columns[j]) = 1.0;
    }
  }

  Matrix filtered_leads(n, r);
  for (int j = 0; j < r; ++j)
    filtered_leads.col(j) = apply_graph_filter(
        data.laplacian, data.alpha, spec.filter_order, data.lead_pattern.col(j));

  data.signals = draw_filtered_signals(filtered_leads, n, spec.instances,
                                       spec.sigma, spec.seed);
  return data;
}

Matrix draw_filtered_signals(const Matrix& filtered_leads, int nodes,
                             int instances, double sigma, std::uint64_t seed) {
  if (filtered_leads.rows() != nodes)
    throw ValidationError("draw_filtered_signals: lead basis has wrong height");
  if (instances < 1)
    throw ValidationError("draw_filtered_signals: instances must be >= 1");

  const Eigen::Index r = filtered_leads.cols();
  Matrix signals(nodes, instances);
  Vector excitation(r);
  for (int t = 0; t < instances; ++t) {
    auto excitation_rng = make_stream(seed, StreamPurpose::kExcitation,
                                      static_cast<std::uint64_t>(t));
    GaussianSampler gaussian(excitation_rng);
    for (Eigen::Index i = 0; i < r; ++i) excitation[i] = gaussian();
    signals.col(t) = filtered_leads * excitation;

    if (sigma > 0.0) {
      auto noise_rng = make_stream(seed, StreamPurpose::kNoise,
                                   static_cast<std::uint64_t>(t));
      GaussianSampler noise(noise_rng);
      for (int i = 0; i < nodes; ++i) signals(i, t) += sigma * noise();
    }
  }
  return signals;
}

}  // namespace chaincluster
