#include <doctest.h>

#include <cmath>
#include <numeric>

#include "gen.hpp"
#include "ngpde/degree_ode.hpp"
#include "ngpde/error.hpp"
#include "ngpde/initial_condition.hpp"
#include "ngpde/riccati.hpp"

using namespace ngpde;

namespace {

TruncatedDistribution delta(std::size_t k, std::size_t kmax) {
  TruncatedDistribution d{std::vector<double>(kmax + 1, 0.0), 0.0};
  d.p[k] = 1.0;
  return d;
}

TruncatedDistribution geometric(std::size_t kmax) {
  return {InitialCondition::scaled_geometric(2.0 / 3.0, 3.0).coefficients(kmax), 0.0};
}

}  // namespace

TEST_SUITE("degree_ode") {

TEST_CASE("preferential link addition from a delta at k = 2") {
  ProcessRates r;
  r.l_p = 1.0;
  const auto dp = master_rhs(delta(2, 10), r);
  CHECK(dp[2] == doctest::Approx(-2.0));
  CHECK(dp[3] == doctest::Approx(2.0));
  for (std::size_t k = 0; k < dp.size(); ++k) {
    if (k != 2 && k != 3) CHECK(dp[k] == 0.0);
  }
}

TEST_CASE("zero rates give a zero vector and a constant trajectory") {
  const auto p0 = geometric(60);
  for (double v : master_rhs(p0, ProcessRates{})) CHECK(v == 0.0);
  const auto traj = integrate(p0, ProcessRates{}, 2.0);
  const auto p1 = traj.at(1.3);
  for (std::size_t k = 0; k < p0.p.size(); ++k) CHECK(p1.p[k] == p0.p[k]);
}

TEST_CASE("each process preserves total probability away from the cutoff") {
  gen::Source s(41);
  for (int i = 0; i < 300; ++i) {
    const auto r = s.rates();
    TruncatedDistribution d{std::vector<double>(80, 0.0), 0.0};
    double total = 0.0;
    for (std::size_t k = 0; k < 30; ++k) total += d.p[k] = s.uniform(0, 1);
    d.p[1] += 0.1;  // keeps the first moment positive
    total += 0.1;
    for (auto& v : d.p) v /= total;
    const auto dp = master_rhs(d, r);
    const double sum = std::accumulate(dp.begin(), dp.end(), 0.0);
    CHECK(std::abs(sum) <= 1e-12);
  }
}

TEST_CASE("vanishing first moment with preferential processes") {
  ProcessRates r;
  r.n_p = 1.0;
  r.m = 1;
  CHECK_THROWS_AS(master_rhs(delta(0, 10), r), DomainError);
}

TEST_CASE("gf_eval and first_moment") {
  const auto g = geometric(200);
  CHECK(std::abs(g.mass() - 1.0) <= 1e-15);
  CHECK(gf_eval(g, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gf_eval(g, 0.0) == g.p[0]);
  CHECK(gf_eval(delta(2, 5), 0.5) == 0.25);
  CHECK(first_moment(delta(3, 5)) == 3.0);
  CHECK(first_moment(g) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(first_moment(TruncatedDistribution{{0.5, 0.5}, 0.0}) == 0.5);
}

TEST_CASE("first moment follows the Riccati solution") {
  const auto r = gen::mixed();
  const auto traj = integrate(delta(2, 200), r, 0.2);
  const auto g = solve_closed_form(derive_riccati(r), 2.0);
  for (int i = 0; i <= 20; ++i) {
    const double t = 0.01 * i;
    CHECK(std::abs(first_moment(traj.at(t)) - g(t)) <= 1e-4);
  }
}

TEST_CASE("mass conservation and moment consistency on random rate sets") {
  gen::Source s(42);
  for (int i = 0; i < 12; ++i) {
    const auto r = s.rates(2.0);
    const auto p0 = s.coin() ? geometric(200) : delta(static_cast<std::size_t>(s.integer(1, 4)), 200);
    MasterTrajectory traj = integrate(p0, r, 1.0);
    const auto g = solve_closed_form(derive_riccati(r), first_moment(p0));
    CHECK(traj.max_leakage() <= 1e-6);
    for (int j = 0; j <= 10; ++j) {
      const double t = 0.1 * j;
      const auto p = traj.at(t);
      CHECK(std::abs(p.mass() - 1.0) <= 1e-6);
      CHECK(std::abs(first_moment(p) - g(t)) <= 1e-4);
    }
  }
}

TEST_CASE("leakage past the cutoff is reported") {
  ProcessRates r;
  r.l_r = 5.0;
  CHECK_THROWS_AS(integrate(delta(2, 8), r, 3.0), NumericalError);
  CHECK_THROWS_AS(integrate(delta(1, 3), gen::mixed(), 0.1), ValidationError);
}

}  // TEST_SUITE
