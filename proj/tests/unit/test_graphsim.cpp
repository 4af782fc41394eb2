#include <doctest.h>

#include <cmath>

#include "gen.hpp"
#include "ngpde/error.hpp"
#include "ngpde/graphsim.hpp"

using namespace ngpde;

namespace {

ProcessRates only(Process p, int m = 3) {
  ProcessRates r;
  r.m = m;
  switch (p) {
    case Process::random_rewiring: r.omega_r = 1; break;
    case Process::preferential_rewiring: r.omega_p = 1; break;
    case Process::link_deletion: r.l_d = 1; break;
    case Process::random_link_addition: r.l_r = 1; break;
    case Process::preferential_link_addition: r.l_p = 1; break;
    case Process::node_deletion: r.n_d = 1; break;
    case Process::random_node_addition: r.n_r = 1; break;
    case Process::preferential_node_addition: r.n_p = 1; break;
  }
  return r;
}

const Process kAll[] = {
    Process::random_rewiring,      Process::preferential_rewiring,
    Process::link_deletion,        Process::random_link_addition,
    Process::preferential_link_addition, Process::node_deletion,
    Process::random_node_addition, Process::preferential_node_addition,
};

}  // namespace

TEST_SUITE("graphsim") {

TEST_CASE("network bookkeeping") {
  Network n(4);
  CHECK(n.add_edge(0, 1));
  CHECK_FALSE(n.add_edge(1, 0));
  CHECK_FALSE(n.add_edge(2, 2));
  CHECK(n.add_edge(1, 2));
  CHECK(n.add_edge(3, 1));
  CHECK(n.edge_count() == 3);
  CHECK(n.degree(1) == 3);
  n.remove_node(1);
  CHECK(n.node_count() == 3);
  CHECK(n.edge_count() == 0);
  CHECK_NOTHROW(n.check_invariants());
  n.add_edge(0, 2);
  n.remove_node(0);  // node 2 is relabelled to 0
  CHECK(n.node_count() == 2);
  CHECK(n.edge_count() == 0);
  CHECK_NOTHROW(n.check_invariants());
}

TEST_CASE("empirical distribution examples") {
  auto d = empirical_distribution(complete_graph(4));
  CHECK(d.p.size() == 4);
  CHECK(d.p[3] == 1.0);
  d = empirical_distribution(empty_graph(7));
  CHECK(d.p[0] == 1.0);
  d = empirical_distribution(star_graph(5), 10);
  CHECK(d.p.size() == 11);
  CHECK(d.p[1] == doctest::Approx(0.8));
  CHECK(d.p[4] == doctest::Approx(0.2));
  CHECK_THROWS_AS(empirical_distribution(Network{}), ValidationError);
}

TEST_CASE("generators") {
  Rng rng(3);
  const auto ring = ring_graph(10);
  CHECK(ring.edge_count() == 10);
  const auto reg = configuration_graph(std::vector<std::size_t>(50, 4), rng);
  for (std::size_t v = 0; v < 50; ++v) CHECK(reg.degree(v) == 4);
  CHECK_NOTHROW(reg.check_invariants());
  CHECK_THROWS_AS(configuration_graph({1, 1, 1}, rng), ValidationError);
  const auto er = erdos_renyi(200, 0.05, rng);
  CHECK_NOTHROW(er.check_invariants());
  CHECK(er.edge_count() > 700);
  CHECK(er.edge_count() < 1300);
}

TEST_CASE("endpoint sampling is proportional to degree") {
  Rng rng(4);
  const auto s = star_graph(5);
  int hub = 0;
  const int draws = 40000;
  for (int i = 0; i < draws; ++i) hub += s.random_endpoint(rng) == 0;
  CHECK(std::abs(hub / double(draws) - 0.5) < 0.015);
}

TEST_CASE("edge accounting per event type") {
  Rng rng(5);
  for (Process p : kAll) {
    Network net = erdos_renyi(60, 0.1, rng);
    const auto r = only(p);
    for (int i = 0; i < 200; ++i) {
      const std::size_t e0 = net.edge_count(), n0 = net.node_count();
      // Degree of the node that a deletion will remove is not known in
      // advance, so node deletion is checked through the degree sum.
      std::size_t deg_sum = 0;
      for (std::size_t v = 0; v < n0; ++v) deg_sum += net.degree(v);
      const auto res = step(net, r, rng);
      if (!res) break;
      CHECK(res->process == p);
      CHECK(res->elapsed > 0.0);
      net.check_invariants();
      const long de = long(net.edge_count()) - long(e0);
      if (res->skipped) {
        CHECK(de == 0);
        continue;
      }
      switch (p) {
        case Process::random_rewiring:
        case Process::preferential_rewiring: CHECK(de == 0); break;
        case Process::link_deletion: CHECK(de == -1); break;
        case Process::random_link_addition:
        case Process::preferential_link_addition: CHECK(de == 1); break;
        case Process::node_deletion: {
          CHECK(net.node_count() == n0 - 1);
          std::size_t after = 0;
          for (std::size_t v = 0; v < net.node_count(); ++v) after += net.degree(v);
          // removed degree d drops the sum by 2d and E by d
          CHECK(long(deg_sum - after) == -2 * de);
          break;
        }
        case Process::random_node_addition:
        case Process::preferential_node_addition:
          CHECK(de == r.m);
          CHECK(net.node_count() == n0 + 1);
          CHECK(net.degree(net.node_count() - 1) == std::size_t(r.m));
          break;
      }
    }
  }
}

TEST_CASE("random mixed dynamics keep a simple graph") {
  gen::Source s(61);
  for (int trial = 0; trial < 10; ++trial) {
    const auto r = s.rates();
    Rng rng(100 + trial);
    Network net = erdos_renyi(80, 0.05, rng);
    for (int i = 0; i < 500; ++i) {
      if (!step(net, r, rng)) break;
      if (net.node_count() < std::size_t(r.m) + 2) break;
    }
    CHECK_NOTHROW(net.check_invariants());
  }
}

TEST_CASE("zero rates: constant series") {
  SimConfig c;
  c.nodes = 50;
  c.initial = {GraphKind::ring, 0};
  c.sample_times = {0.0, 0.5, 1.0};
  c.replicas = 3;
  c.kmax = 5;
  const auto res = run(c);
  CHECK(res.absorbed_replicas == 0);  // nothing can happen, nothing was cut short
  for (const auto& row : res.mean) CHECK(total_variation(row, res.initial_mean) == 0.0);
  Network ring = ring_graph(5);
  Rng rng(1);
  CHECK_FALSE(step(ring, ProcessRates{}, rng));
}

TEST_CASE("rewiring conserves the first moment") {
  SimConfig c;
  c.rates.omega_r = 1.0;
  c.rates.omega_p = 0.5;
  c.nodes = 300;
  c.initial = {GraphKind::erdos_renyi, 0.02};
  c.sample_times = {0.0, 0.5, 1.0, 2.0};
  c.replicas = 4;
  c.kmax = 40;
  const auto res = run(c);
  for (double mu : res.mean_first_moment) {
    CHECK(mu == doctest::Approx(res.mean_first_moment.front()).epsilon(1e-12));
  }
}

TEST_CASE("seeded runs are reproducible and thread-count independent") {
  SimConfig c;
  c.rates = gen::mixed();
  c.nodes = 200;
  c.initial = {GraphKind::ring, 0};
  c.sample_times = {0.05, 0.1};
  c.replicas = 6;
  c.seed = 9;
  c.kmax = 30;
  c.threads = 1;
  const auto a = run(c);
  c.threads = 4;
  const auto b = run(c);
  CHECK(a.mean == b.mean);
  CHECK(a.stderr_ == b.stderr_);
  CHECK(a.events == b.events);
  c.seed = 10;
  const auto d = run(c);
  CHECK(a.mean != d.mean);
}

TEST_CASE("absorbing state is flagged") {
  SimConfig c;
  c.rates.l_d = 5.0;
  c.nodes = 20;
  c.initial = {GraphKind::ring, 0};
  c.sample_times = {0.0, 50.0};
  c.replicas = 2;
  c.kmax = 5;
  const auto res = run(c);
  CHECK(res.absorbed_replicas == 2);
  CHECK(res.mean.back()[0] == 1.0);
}

TEST_CASE("config validation") {
  SimConfig c;
  c.sample_times = {0.2, 0.1};
  CHECK_THROWS_AS(run(c), ValidationError);
  c.sample_times = {0.1};
  c.replicas = 0;
  CHECK_THROWS_AS(run(c), ValidationError);
}

TEST_CASE("total variation") {
  CHECK(total_variation({0.5, 0.5}, {0.5, 0.5}) == 0.0);
  CHECK(total_variation({1.0}, {0.0, 1.0}) == 1.0);
  CHECK(total_variation({0.2, 0.8}, {0.4, 0.4, 0.2}) == doctest::Approx(0.4));
}

}  // TEST_SUITE
