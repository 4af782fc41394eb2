#include <doctest.h>

#include <cmath>
#include <limits>

#include "gen.hpp"
#include "ngpde/characteristics.hpp"
#include "ngpde/degree_ode.hpp"
#include "ngpde/error.hpp"
#include "ngpde/steady.hpp"

using namespace ngpde;

TEST_SUITE("characteristics") {

TEST_CASE("char_rhs examples") {
  const auto r = gen::mixed();
  const auto k = derive_riccati(r);
  const auto g = solve_closed_form(k, equilibrium(k));
  const double ge = equilibrium(k);

  CharacteristicState s{1.0, 0.4, -0.2, 0.9, 0.3};
  CHECK(char_rhs(s, r, g)[0] == 0.0);

  const auto zero_g = solve_closed_form({0, 0, 0}, 1.0);
  // p2 = H = 0 on the solution surface when every rate vanishes.
  const auto d0 = char_rhs({0.3, 0.5, 0.0, 0.7, 0.2}, ProcessRates{}, zero_g);
  for (double v : d0) CHECK(v == 0.0);

  const auto d = char_rhs({0.0, 0.0, 0.0, 1.0, 0.0}, r, g);
  CHECK(d[0] == doctest::Approx(-(1 + 1 + 1 + ge)));
  CHECK(d[3] == 0.0);
}

TEST_CASE("trace_back examples") {
  const auto r = gen::mixed();
  const auto g = solve_closed_form(derive_riccati(r), 2.0);
  CHECK(trace_back(1.0, 0.7, r, g) == 1.0);
  CHECK(trace_back(1.0, 4.0, r, g) == 1.0);
  CHECK(trace_back(-1.0, 1e-9, r, g) == doctest::Approx(-1.0).epsilon(1e-7));
  CHECK(trace_back(0.3, 0.0, r, g) == 0.3);
  CHECK_THROWS_AS(trace_back(1.5, 0.1, r, g), ValidationError);
  CHECK_THROWS_AS(trace_back(0.0, -0.1, r, g), ValidationError);
}

TEST_CASE("trapping and roundtrip on random points") {
  gen::Source s(31);
  const auto r = gen::mixed();
  const auto g = solve_closed_form(derive_riccati(r), 2.0);
  for (int i = 0; i < 200; ++i) {
    const double xb = s.uniform(-1, 1), tb = s.uniform(1e-6, 5);
    const auto foot = trace_back_foot(xb, tb, r, g);
    CHECK(foot.x0 >= -1.0 - 1e-9);
    CHECK(foot.x0 <= 1.0 + 1e-9);
    CHECK(std::abs(trace_forward(foot, tb, r, g) - xb) <= 1e-8);
  }
}

TEST_CASE("trapping holds for random rate sets") {
  gen::Source s(32);
  SolverOptions opts;
  opts.roundtrip_tol = 1e-6;  // strongly contracting rate sets lose a few digits
  for (int i = 0; i < 40; ++i) {
    const auto r = s.rates();
    const auto k = derive_riccati(r);
    const auto g = solve_closed_form(k, s.uniform(0.2, 4));
    for (int j = 0; j < 10; ++j) {
      const double x0 = trace_back(s.uniform(-1, 1), s.uniform(0.01, 3), r, g, opts);
      CHECK(x0 >= -1.0 - 1e-9);
      CHECK(x0 <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("characteristics do not cross") {
  const auto r = gen::uniform_only();
  const auto g = solve_closed_form(derive_riccati(r), 1.0);
  const auto x0s = uniform_grid(-1.0, 0.9, 0.1);
  for (double t : {0.5, 1.0, 2.5, 5.0}) {
    // Forward images may leave [-1,1]; only their order matters.
    double prev = -std::numeric_limits<double>::infinity();
    for (double x0 : x0s) {
      const double x = trace_forward(x0, t, r, g);
      CHECK(x > prev);
      prev = x;
    }
  }
}

TEST_CASE("solve_at examples") {
  const auto r = gen::mixed();
  const auto h = InitialCondition::polynomial({0, 0, 1});
  const auto g = solve_closed_form(derive_riccati(r), h.first_moment());

  for (double t : {0.0, 0.05, 0.2, 1.0}) {
    CHECK(solve_at(1.0, t, r, g, h).G == doctest::Approx(1.0).epsilon(1e-12));
  }
  for (double x : {-1.0, -0.4, 0.0, 0.8}) {
    CHECK(solve_at(x, 0.0, r, g, h).G == doctest::Approx(h.value(x)).epsilon(1e-14));
  }

  TruncatedDistribution p0{std::vector<double>(201, 0.0), 0.0};
  p0.p[2] = 1.0;
  const auto oracle = integrate(p0, r, 0.2);
  const double expected = gf_eval(oracle.at(0.2), 0.5);
  CHECK(std::abs(solve_at(0.5, 0.2, r, g, h).G - expected) <= 1e-4);
}

TEST_CASE("solve_grid closure, boundary and residual") {
  const auto r = gen::mixed();
  const auto h = InitialCondition::polynomial({0, 0, 1});
  const auto xs = uniform_grid(-1, 1, 0.05);
  const auto ts = uniform_grid(0, 0.2, 0.02);
  const auto f = solve_grid(xs, ts, r, h);
  CHECK(f.max_closure_error <= 1e-6);
  CHECK(f.max_unit_error <= 1e-7);
  CHECK(f.max_pde_residual <= 1e-6);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(std::abs(f.G[0][i] - h.value(xs[i])) <= 1e-12);
  }
  // The surface approaches its limit shape: the distance to the steady state
  // shrinks in t.
  const auto st = build_steady_state(steady_constants(r));
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < ts.size(); ++j) {
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) d = std::max(d, std::abs(f.G[j][i] - st(xs[i])));
    CHECK(d < prev);
    prev = d;
  }

  const auto one = solve_grid({0.3}, {0.1}, r, h);
  const auto g = solve_closed_form(derive_riccati(r), 2.0);
  CHECK(one.G[0][0] == doctest::Approx(solve_at(0.3, 0.1, r, g, h).G).epsilon(1e-15));
}

TEST_CASE("solve_grid rejects bad grids") {
  const auto r = gen::mixed();
  const auto h = InitialCondition::polynomial({0, 0, 1});
  CHECK_THROWS_AS(solve_grid({0.5, 0.1}, {0.0}, r, h), ValidationError);
  CHECK_THROWS_AS(solve_grid({0.1}, {0.2, 0.1}, r, h), ValidationError);
  CHECK_THROWS_AS(solve_grid({-1.5}, {0.0}, r, h), ValidationError);
  CHECK_THROWS_AS(solve_grid({}, {0.0}, r, h), ValidationError);
  CHECK_THROWS_AS(solve_grid({0.0}, {0.0}, r, InitialCondition::polynomial({0.5})), ValidationError);
}

TEST_CASE("uniform grid") {
  const auto xs = uniform_grid(-1, 1, 0.05);
  CHECK(xs.size() == 41);
  CHECK(xs.front() == -1.0);
  CHECK(xs.back() == 1.0);
}

}  // TEST_SUITE
