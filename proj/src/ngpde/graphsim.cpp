#include "ngpde/graphsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "ngpde/error.hpp"

namespace ngpde {

namespace {

constexpr int kPlacementAttempts = 100;

std::size_t uniform_index(std::size_t n, Rng& rng) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace

std::uint64_t Network::key(std::size_t u, std::size_t v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint64_t>(v);
}

bool Network::has_edge(std::size_t u, std::size_t v) const {
  return edge_index_.count(key(u, v)) != 0;
}

bool Network::add_edge(std::size_t u, std::size_t v) {
  if (u == v || has_edge(u, v)) return false;
  edge_index_.emplace(key(u, v), edges_.size());
  edges_.emplace_back(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v));
  adj_[u].push_back(static_cast<std::uint32_t>(v));
  adj_[v].push_back(static_cast<std::uint32_t>(u));
  return true;
}

void Network::erase_neighbor(std::vector<std::uint32_t>& list, std::uint32_t v) {
  auto it = std::find(list.begin(), list.end(), v);
  *it = list.back();
  list.pop_back();
}

void Network::erase_edge_at(std::size_t idx) {
  const auto [u, v] = edges_[idx];
  edge_index_.erase(key(u, v));
  if (idx + 1 != edges_.size()) {
    edges_[idx] = edges_.back();
    edge_index_[key(edges_[idx].first, edges_[idx].second)] = idx;
  }
  edges_.pop_back();
  erase_neighbor(adj_[u], v);
  erase_neighbor(adj_[v], u);
}

bool Network::remove_edge(std::size_t u, std::size_t v) {
  auto it = edge_index_.find(key(u, v));
  if (it == edge_index_.end()) return false;
  erase_edge_at(it->second);
  return true;
}

std::size_t Network::add_node() {
  adj_.emplace_back();
  return adj_.size() - 1;
}

void Network::remove_node(std::size_t v) {
  while (!adj_[v].empty()) remove_edge(v, adj_[v].back());
  const std::size_t last = adj_.size() - 1;
  if (v != last) {
    // Relabel last -> v in every structure that mentions it.
    const auto nv = static_cast<std::uint32_t>(v);
    for (std::uint32_t w : adj_[last]) {
      auto& list = adj_[w];
      *std::find(list.begin(), list.end(), static_cast<std::uint32_t>(last)) = nv;
      const std::size_t idx = edge_index_.at(key(w, last));
      edge_index_.erase(key(w, last));
      edges_[idx] = {w, nv};
      edge_index_.emplace(key(w, v), idx);
    }
    adj_[v] = std::move(adj_[last]);
  }
  adj_.pop_back();
}

std::size_t Network::random_node(Rng& rng) const { return uniform_index(adj_.size(), rng); }

std::size_t Network::random_edge(Rng& rng) const { return uniform_index(edges_.size(), rng); }

std::size_t Network::random_endpoint(Rng& rng) const {
  const auto& e = edges_[random_edge(rng)];
  return std::bernoulli_distribution(0.5)(rng) ? e.first : e.second;
}

void Network::check_invariants() const {
  std::size_t degree_sum = 0;
  for (std::size_t u = 0; u < adj_.size(); ++u) {
    degree_sum += adj_[u].size();
    for (std::uint32_t v : adj_[u]) {
      if (v == u) throw NumericalError("self-loop at node " + std::to_string(u));
      if (v >= adj_.size()) throw NumericalError("dangling neighbor label");
      if (!has_edge(u, v)) throw NumericalError("adjacency without edge record");
      if (std::count(adj_[u].begin(), adj_[u].end(), v) != 1) {
        throw NumericalError("multi-edge at node " + std::to_string(u));
      }
    }
  }
  if (degree_sum != 2 * edges_.size()) throw NumericalError("sum of degrees != 2E");
  if (edge_index_.size() != edges_.size()) throw NumericalError("edge index out of sync");
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    auto it = edge_index_.find(key(edges_[i].first, edges_[i].second));
    if (it == edge_index_.end() || it->second != i) throw NumericalError("edge index mismatch");
  }
}

Network empty_graph(std::size_t n) { return Network(n); }

Network complete_graph(std::size_t n) {
  Network g(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

Network ring_graph(std::size_t n) {
  Network g(n);
  if (n < 3) throw ValidationError("a ring needs at least 3 nodes");
  for (std::size_t u = 0; u < n; ++u) g.add_edge(u, (u + 1) % n);
  return g;
}

Network star_graph(std::size_t n) {
  Network g(n);
  for (std::size_t v = 1; v < n; ++v) g.add_edge(0, v);
  return g;
}

Network erdos_renyi(std::size_t n, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("edge probability must lie in [0,1]");
  Network g(n);
  std::bernoulli_distribution coin(p);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (coin(rng)) g.add_edge(u, v);
  return g;
}

Network configuration_graph(const std::vector<std::size_t>& degrees, Rng& rng, int attempts) {
  std::vector<std::uint32_t> stubs;
  for (std::size_t v = 0; v < degrees.size(); ++v) {
    if (degrees[v] >= degrees.size() && degrees[v] > 0) {
      throw ValidationError("degree exceeds N-1");
    }
    stubs.insert(stubs.end(), degrees[v], static_cast<std::uint32_t>(v));
  }
  if (stubs.size() % 2 != 0) throw ValidationError("degree sum must be even");

  for (int a = 0; a < attempts; ++a) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    Network g(degrees.size());
    bool ok = true;
    for (std::size_t i = 0; ok && i < stubs.size(); i += 2) ok = g.add_edge(stubs[i], stubs[i + 1]);
    if (ok) return g;
  }
  throw NumericalError("no simple graph found for the degree sequence");
}

TruncatedDistribution empirical_distribution(const Network& net, std::size_t kmax) {
  if (net.node_count() == 0) throw ValidationError("empty network has no degree distribution");
  std::size_t top = kmax;
  for (std::size_t v = 0; v < net.node_count(); ++v) top = std::max(top, net.degree(v));
  TruncatedDistribution d;
  d.p.assign(top + 1, 0.0);
  std::vector<std::size_t> count(top + 1, 0);
  for (std::size_t v = 0; v < net.node_count(); ++v) ++count[net.degree(v)];
  const auto n = static_cast<double>(net.node_count());
  for (std::size_t k = 0; k <= top; ++k) d.p[k] = static_cast<double>(count[k]) / n;
  return d;
}

double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = std::max(a.size(), b.size());
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = k < a.size() ? a[k] : 0.0;
    const double y = k < b.size() ? b[k] : 0.0;
    s += std::abs(x - y);
  }
  return 0.5 * s;
}

std::vector<double> event_rates(const Network& net, const ProcessRates& r) {
  const auto n = static_cast<double>(net.node_count());
  const auto e = static_cast<double>(net.edge_count());
  const bool has_edges = net.edge_count() > 0;
  const bool room = net.node_count() >= static_cast<std::size_t>(r.m);
  return {
      r.omega_r * 2.0 * e,
      r.omega_p * 2.0 * e,
      r.l_d * e,
      net.node_count() >= 2 ? r.l_r * n : 0.0,
      has_edges ? r.l_p * n : 0.0,
      net.node_count() >= 2 ? r.n_d * 2.0 * e : 0.0,
      room ? r.n_r * n : 0.0,
      has_edges && room ? r.n_p * n : 0.0,
  };
}

namespace {

// Draws candidates until `legal` accepts one; nullopt after the budget.
template <class Draw, class Legal>
std::optional<std::size_t> place(Draw draw, Legal legal) {
  for (int i = 0; i < kPlacementAttempts; ++i) {
    const std::size_t c = draw();
    if (legal(c)) return c;
  }
  return std::nullopt;
}

bool rewire(Network& net, bool preferential, Rng& rng) {
  const auto e = net.edges()[net.random_edge(rng)];
  const bool flip = std::bernoulli_distribution(0.5)(rng);
  const std::size_t keep = flip ? e.first : e.second;
  const std::size_t drop = flip ? e.second : e.first;
  auto target = place(
      [&] { return preferential ? net.random_endpoint(rng) : net.random_node(rng); },
      [&](std::size_t w) { return w != keep && !net.has_edge(keep, w); });
  if (!target) return false;
  net.remove_edge(keep, drop);
  net.add_edge(keep, *target);
  return true;
}

bool add_link(Network& net, bool preferential, Rng& rng) {
  auto draw = [&] { return preferential ? net.random_endpoint(rng) : net.random_node(rng); };
  for (int i = 0; i < kPlacementAttempts; ++i) {
    const std::size_t u = draw(), v = draw();
    if (net.add_edge(u, v)) return true;
  }
  return false;
}

bool add_node(Network& net, int m, bool preferential, Rng& rng) {
  std::vector<std::size_t> targets;
  for (int j = 0; j < m; ++j) {
    auto w = place(
        [&] { return preferential ? net.random_endpoint(rng) : net.random_node(rng); },
        [&](std::size_t c) { return std::find(targets.begin(), targets.end(), c) == targets.end(); });
    if (!w) return false;
    targets.push_back(*w);
  }
  const std::size_t v = net.add_node();
  for (std::size_t w : targets) net.add_edge(v, w);
  return true;
}

}  // namespace

namespace {

// Applies the process drawn from the weights `w`; the waiting time is the
// caller's business.
StepResult fire(Network& net, const ProcessRates& rates, const std::vector<double>& w, Rng& rng) {
  StepResult out;
  out.process = static_cast<Process>(std::discrete_distribution<int>(w.begin(), w.end())(rng));
  bool done = true;
  switch (out.process) {
    case Process::random_rewiring: done = rewire(net, false, rng); break;
    case Process::preferential_rewiring: done = rewire(net, true, rng); break;
    case Process::link_deletion: {
      const auto e = net.edges()[net.random_edge(rng)];
      net.remove_edge(e.first, e.second);
      break;
    }
    case Process::random_link_addition: done = add_link(net, false, rng); break;
    case Process::preferential_link_addition: done = add_link(net, true, rng); break;
    case Process::node_deletion: net.remove_node(net.random_node(rng)); break;
    case Process::random_node_addition: done = add_node(net, rates.m, false, rng); break;
    case Process::preferential_node_addition: done = add_node(net, rates.m, true, rng); break;
  }
  out.skipped = !done;
  return out;
}

double sum(const std::vector<double>& w) { return std::accumulate(w.begin(), w.end(), 0.0); }

}  // namespace

std::optional<StepResult> step(Network& net, const ProcessRates& rates, Rng& rng) {
  const std::vector<double> w = event_rates(net, rates);
  const double total = sum(w);
  if (!(total > 0.0)) return std::nullopt;
  const double elapsed = std::exponential_distribution<double>(total)(rng);
  StepResult out = fire(net, rates, w, rng);
  out.elapsed = elapsed;
  return out;
}

Network make_graph(const GraphSpec& spec, std::size_t n, Rng& rng) {
  switch (spec.kind) {
    case GraphKind::empty: return empty_graph(n);
    case GraphKind::complete: return complete_graph(n);
    case GraphKind::ring: return ring_graph(n);
    case GraphKind::star: return star_graph(n);
    case GraphKind::erdos_renyi: return erdos_renyi(n, spec.param, rng);
    case GraphKind::regular: {
      if (!(spec.param >= 0.0) || spec.param != std::floor(spec.param)) {
        throw ValidationError("regular graph degree must be a nonnegative integer");
      }
      return configuration_graph(std::vector<std::size_t>(n, static_cast<std::size_t>(spec.param)),
                                 rng);
    }
  }
  throw ValidationError("unknown graph kind");
}

void SimConfig::validate() const {
  rates.validate();
  if (nodes < static_cast<std::size_t>(rates.m) + 1) {
    throw ValidationError("N must be at least m + 1");
  }
  if (replicas == 0) throw ValidationError("at least one replica is required");
  if (sample_times.empty()) throw ValidationError("sample times must be nonempty");
  if (!std::is_sorted(sample_times.begin(), sample_times.end()) || !(sample_times.front() >= 0.0)) {
    throw ValidationError("sample times must be ascending and nonnegative");
  }
}

namespace {

struct ReplicaRun {
  std::vector<std::vector<double>> samples;
  std::vector<double> initial;
  bool absorbed = false;
  std::size_t skipped = 0;
  std::size_t events = 0;
};

ReplicaRun run_replica(const SimConfig& cfg, std::uint64_t replica) {
  std::seed_seq seq{cfg.seed, replica};
  Rng rng(seq);
  Network net = make_graph(cfg.initial, cfg.nodes, rng);

  ReplicaRun out;
  out.initial = empirical_distribution(net, cfg.kmax).p;
  const auto& ts = cfg.sample_times;
  std::size_t next = 0;
  double t = 0.0;
  while (next < ts.size()) {
    const std::vector<double> w = event_rates(net, cfg.rates);
    const double total = sum(w);
    if (!(total > 0.0)) {
      const ProcessRates& r = cfg.rates;
      out.absorbed = r.omega_r + r.omega_p + r.l_d + r.l_r + r.l_p + r.n_d + r.n_r + r.n_p > 0.0;
      for (; next < ts.size(); ++next) out.samples.push_back(empirical_distribution(net, cfg.kmax).p);
      break;
    }
    const double t_new = t + std::exponential_distribution<double>(total)(rng);
    for (; next < ts.size() && ts[next] < t_new; ++next) {
      out.samples.push_back(empirical_distribution(net, cfg.kmax).p);
    }
    if (next == ts.size()) break;
    t = t_new;
    if (fire(net, cfg.rates, w, rng).skipped) ++out.skipped;
    ++out.events;
  }
  return out;
}

}  // namespace

SimResult run(const SimConfig& cfg) {
  cfg.validate();
  std::vector<ReplicaRun> runs(cfg.replicas);
  std::atomic<std::size_t> cursor{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t r; (r = cursor.fetch_add(1)) < cfg.replicas && !failed;) {
      try {
        runs[r] = run_replica(cfg, r);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  };
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, cfg.replicas));
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);

  std::size_t width = cfg.kmax + 1;
  for (const auto& r : runs) {
    width = std::max(width, r.initial.size());
    for (const auto& s : r.samples) width = std::max(width, s.size());
  }

  const auto reps = static_cast<double>(cfg.replicas);
  SimResult out;
  out.times = cfg.sample_times;
  out.mean.assign(out.times.size(), std::vector<double>(width, 0.0));
  out.stderr_.assign(out.times.size(), std::vector<double>(width, 0.0));
  out.mean_first_moment.assign(out.times.size(), 0.0);
  out.initial_mean.assign(width, 0.0);
  for (const auto& r : runs) {
    for (std::size_t k = 0; k < r.initial.size(); ++k) out.initial_mean[k] += r.initial[k] / reps;
    for (std::size_t i = 0; i < out.times.size(); ++i) {
      for (std::size_t k = 0; k < r.samples[i].size(); ++k) {
        out.mean[i][k] += r.samples[i][k] / reps;
        out.stderr_[i][k] += r.samples[i][k] * r.samples[i][k];
      }
    }
    out.absorbed_replicas += r.absorbed ? 1 : 0;
    out.skipped_events += r.skipped;
    out.events += r.events;
  }
  for (std::size_t i = 0; i < out.times.size(); ++i) {
    for (std::size_t k = 0; k < width; ++k) {
      const double mu = out.mean[i][k];
      const double var = cfg.replicas > 1
                             ? std::max(0.0, (out.stderr_[i][k] - reps * mu * mu) / (reps - 1.0))
                             : 0.0;
      out.stderr_[i][k] = std::sqrt(var / reps);
      out.mean_first_moment[i] += static_cast<double>(k) * mu;
    }
  }
  return out;
}

}  // namespace ngpde
