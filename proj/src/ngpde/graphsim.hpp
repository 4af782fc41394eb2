#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ngpde/degree_ode.hpp"
#include "ngpde/model.hpp"

namespace ngpde {

using Rng = std::mt19937_64;

/// Undirected simple graph on nodes 0..N-1. Node deletion relabels the last
/// node into the freed slot.
class Network {
 public:
  Network() = default;
  explicit Network(std::size_t n) : adj_(n) {}

  std::size_t node_count() const { return adj_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t degree(std::size_t v) const { return adj_[v].size(); }
  const std::vector<std::uint32_t>& neighbors(std::size_t v) const { return adj_[v]; }
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges() const { return edges_; }

  bool has_edge(std::size_t u, std::size_t v) const;
  /// False for self-loops and existing edges.
  bool add_edge(std::size_t u, std::size_t v);
  bool remove_edge(std::size_t u, std::size_t v);
  std::size_t add_node();
  /// Removes v with all its edges; the former last node takes label v.
  void remove_node(std::size_t v);

  /// Uniform node; requires N >= 1.
  std::size_t random_node(Rng& rng) const;
  /// Node chosen with probability degree/2E; requires E >= 1.
  std::size_t random_endpoint(Rng& rng) const;
  /// Index of a uniform edge; requires E >= 1.
  std::size_t random_edge(Rng& rng) const;

  /// Simple-graph and bookkeeping consistency; throws NumericalError.
  void check_invariants() const;

 private:
  static std::uint64_t key(std::size_t u, std::size_t v);
  void erase_edge_at(std::size_t idx);
  static void erase_neighbor(std::vector<std::uint32_t>& list, std::uint32_t v);

  std::vector<std::vector<std::uint32_t>> adj_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
  std::unordered_map<std::uint64_t, std::size_t> edge_index_;
};

Network empty_graph(std::size_t n);
Network complete_graph(std::size_t n);
Network ring_graph(std::size_t n);
/// Node 0 is the hub.
Network star_graph(std::size_t n);
Network erdos_renyi(std::size_t n, double p, Rng& rng);
/// Uniform simple graph with the given degree sequence by repeated stub
/// matching. Throws ValidationError for odd degree sums, NumericalError when
/// no simple matching is found within `attempts`.
Network configuration_graph(const std::vector<std::size_t>& degrees, Rng& rng,
                            int attempts = 1000);

/// p_k = #{nodes of degree k}/N, padded with zeros up to kmax (longer if a
/// degree exceeds kmax).
TruncatedDistribution empirical_distribution(const Network& net, std::size_t kmax = 0);

/// Half the L1 distance; the shorter vector is zero-padded.
double total_variation(const std::vector<double>& a, const std::vector<double>& b);

enum class Process {
  random_rewiring,
  preferential_rewiring,
  link_deletion,
  random_link_addition,
  preferential_link_addition,
  node_deletion,
  random_node_addition,
  preferential_node_addition,
};

struct StepResult {
  Process process;
  double elapsed = 0.0;
  bool skipped = false;  // no legal placement within the resampling budget
};

/// Per-process event rates for the current graph. Link processes (rewiring,
/// link deletion) and node deletion scale with E, additions with N, so that
/// the N -> infinity limit is the master equation.
std::vector<double> event_rates(const Network& net, const ProcessRates& rates);

/// One Gillespie event. nullopt when every rate is zero (absorbing state);
/// the graph is then unchanged.
std::optional<StepResult> step(Network& net, const ProcessRates& rates, Rng& rng);

enum class GraphKind { empty, complete, ring, star, erdos_renyi, regular };

struct GraphSpec {
  GraphKind kind = GraphKind::ring;
  double param = 0.0;  // edge probability (erdos_renyi) or degree (regular)
};

Network make_graph(const GraphSpec& spec, std::size_t n, Rng& rng);

struct SimConfig {
  ProcessRates rates;
  std::size_t nodes = 1000;
  GraphSpec initial;
  std::vector<double> sample_times;  // ascending, >= 0
  std::size_t replicas = 1;
  std::uint64_t seed = 1;
  std::size_t kmax = 0;
  unsigned threads = 0;  // 0: hardware concurrency

  void validate() const;
};

struct SimResult {
  std::vector<double> times;
  std::vector<std::vector<double>> mean;    // [sample][k]
  std::vector<std::vector<double>> stderr_; // [sample][k]
  std::vector<double> mean_first_moment;
  std::vector<double> initial_mean;  // ensemble mean at t = 0
  std::size_t absorbed_replicas = 0;
  std::size_t skipped_events = 0;
  std::size_t events = 0;
};

/// Ensemble of independent replicas. Replica r is driven by
/// mt19937_64(seed_seq{seed, r}), so results are reproducible and do not
/// depend on the thread count.
SimResult run(const SimConfig& config);

}  // namespace ngpde
