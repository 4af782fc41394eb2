#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "ngpde/ngpde.h"

namespace {

ngp_rates mixed() { return ngp_rates{1, 1, 1, 1, 0, 1, 1, 1, 3}; }

}  // namespace

TEST_CASE("version and status codes") {
  CHECK(std::strlen(ngp_version()) > 0);
  ngp_rates bad = mixed();
  bad.l_d = -1;
  CHECK(ngp_rates_validate(&bad) == NGP_ERR_VALIDATION);
  CHECK(std::strlen(ngp_last_error()) > 0);
  CHECK(ngp_rates_validate(nullptr) == NGP_ERR_VALIDATION);
  const ngp_rates ok = mixed();
  CHECK(ngp_rates_validate(&ok) == NGP_OK);
}

TEST_CASE("model through the C interface") {
  const ngp_rates r = mixed();
  double nd, b, c;
  REQUIRE(ngp_riccati_coefficients(&r, &nd, &b, &c) == NGP_OK);
  CHECK(nd == 1.0);
  CHECK(b == 3.0);
  CHECK(c == 14.0);
  double ge;
  REQUIRE(ngp_riccati_equilibrium(&r, &ge) == NGP_OK);
  CHECK(ge == doctest::Approx((-3 + std::sqrt(65.0)) / 2));
  double h;
  REQUIRE(ngp_evaluate_h(&r, 0.4, 1.0, 1.0, 2.0, &h) == NGP_OK);
  CHECK(h == doctest::Approx(0.0));
  CHECK(ngp_evaluate_h(&r, 0.4, 1.0, 1.0, 0.0, &h) == NGP_ERR_VALIDATION);

  ngp_rates lp{};
  lp.l_p = 1;
  double cs[4];
  int deg;
  REQUIRE(ngp_steady_constants(&lp, cs, &ge, &deg) == NGP_OK);
  CHECK(deg == NGP_STEADY_NONE);
  ngp_steady* s = nullptr;
  CHECK(ngp_steady_build(&lp, &s) == NGP_ERR_NO_STEADY_STATE);
  CHECK(s == nullptr);
}

TEST_CASE("field, moment and master equation agree") {
  const ngp_rates r = mixed();
  const double coeffs[] = {0, 0, 1};
  ngp_initial* h = nullptr;
  REQUIRE(ngp_initial_polynomial(coeffs, 3, &h) == NGP_OK);
  double v, d;
  REQUIRE(ngp_initial_value(h, 0.5, &v, &d) == NGP_OK);
  CHECK(v == 0.25);

  std::vector<double> xs, ts;
  for (int i = 0; i <= 20; ++i) xs.push_back(-1 + 0.1 * i);
  xs.back() = 1.0;
  for (int i = 0; i <= 4; ++i) ts.push_back(0.05 * i);
  ngp_solver_options opts;
  ngp_solver_options_default(&opts);
  ngp_field* f = nullptr;
  REQUIRE(ngp_solve_grid(&r, h, xs.data(), xs.size(), ts.data(), ts.size(), &opts, &f) == NGP_OK);
  std::vector<double> G(xs.size() * ts.size()), g(ts.size());
  REQUIRE(ngp_field_values(f, G.data(), nullptr, g.data()) == NGP_OK);
  double closure, unit, res;
  REQUIRE(ngp_field_diagnostics(f, &closure, &unit, &res) == NGP_OK);
  CHECK(closure <= 1e-6);
  CHECK(unit <= 1e-7);

  std::vector<double> p0(201, 0.0);
  p0[2] = 1.0;
  ngp_ode* ode = nullptr;
  REQUIRE(ngp_ode_integrate(&r, p0.data(), p0.size(), 0.2, 1e-10, 1e-13, 1e-6, &ode) == NGP_OK);
  std::vector<double> p(p0.size());
  REQUIRE(ngp_ode_at(ode, 0.2, p.data()) == NGP_OK);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double s = 0.0;
    for (std::size_t k = p.size(); k-- > 0;) s = s * xs[i] + p[k];
    CHECK(std::abs(G[(ts.size() - 1) * xs.size() + i] - s) <= 1e-4);
  }

  ngp_moment* mom = nullptr;
  REQUIRE(ngp_moment_closed_form(&r, 2.0, &mom) == NGP_OK);
  double gm;
  REQUIRE(ngp_moment_value(mom, 0.2, &gm) == NGP_OK);
  CHECK(gm == doctest::Approx(g.back()));
  double x0, gap, xf;
  REQUIRE(ngp_trace_back(&r, mom, 0.3, 2.0, &opts, &x0, &gap) == NGP_OK);
  REQUIRE(ngp_trace_forward(&r, mom, gap, 2.0, &opts, &xf) == NGP_OK);
  CHECK(std::abs(xf - 0.3) <= 1e-8);
  CHECK(ngp_trace_back(&r, mom, 2.0, 1.0, &opts, &x0, &gap) == NGP_ERR_VALIDATION);

  ngp_moment_free(mom);
  ngp_ode_free(ode);
  ngp_field_free(f);
  ngp_initial_free(h);
}

TEST_CASE("steady state handles") {
  const double c[4] = {2, 1, 1, 2};
  ngp_steady* s = nullptr;
  REQUIRE(ngp_steady_build_constants(c, 3, &s) == NGP_OK);
  const double xs[] = {0.5, 1.0, 0.0};
  double out[3];
  REQUIRE(ngp_steady_eval(s, xs, 3, out) == NGP_OK);
  CHECK(std::abs(out[0] - 0.1) <= 1e-6);
  CHECK(out[1] == 1.0);
  double r0;
  REQUIRE(ngp_steady_residual(s, xs + 2, 1, 1e-4, &r0) == NGP_OK);
  CHECK(std::abs(r0) <= 1e-6);
  ngp_steady_info info;
  REQUIRE(ngp_steady_get_info(s, &info) == NGP_OK);
  CHECK(info.singular_count == 2);
  CHECK(info.value_at_ratio == doctest::Approx(0.1));
  std::vector<double> grid(101);
  std::size_t written = 0;
  REQUIRE(ngp_steady_residual_grid(s, 101, 1e-3, grid.data(), &written) == NGP_OK);
  CHECK(written > 90);
  ngp_steady_free(s);

  const double bad[4] = {1, 2, 1, 1};
  CHECK(ngp_steady_build_two_singularity(bad, 3, NAN, &s) == NGP_ERR_VALIDATION);
}

TEST_CASE("simulation and analysis") {
  ngp_mc_config cfg{};
  cfg.rates = ngp_rates{1, 0, 0, 0, 0, 0, 0, 0, 0};
  cfg.nodes = 100;
  cfg.graph = NGP_GRAPH_RING;
  cfg.replicas = 2;
  cfg.seed = 3;
  cfg.kmax = 20;
  const double times[] = {0.0, 0.5};
  ngp_mc* mc = nullptr;
  REQUIRE(ngp_mc_run(&cfg, times, 2, &mc) == NGP_OK);
  const std::size_t w = ngp_mc_width(mc);
  std::vector<double> mean(2 * w), init(w);
  REQUIRE(ngp_mc_values(mc, mean.data(), nullptr, init.data()) == NGP_OK);
  double tv;
  REQUIRE(ngp_total_variation(mean.data(), w, init.data(), w, &tv) == NGP_OK);
  CHECK(tv == 0.0);
  ngp_mc_free(mc);

  std::vector<double> ts, ns;
  for (int i = 1; i <= 10; ++i) {
    ts.push_back(i);
    ns.push_back(std::exp(-0.5 * i));
  }
  ngp_rate_fit fit;
  REQUIRE(ngp_fit_rate(ts.data(), ns.data(), ts.size(), 1, 10, 0.01, &fit) == NGP_OK);
  CHECK(fit.model == NGP_RATE_EXPONENTIAL);
  CHECK(fit.rate == doctest::Approx(-0.5));
  ns[3] = 0.0;
  CHECK(ngp_fit_rate(ts.data(), ns.data(), ts.size(), 1, 10, 0.01, &fit) == NGP_ERR_VALIDATION);

  const double bt[] = {0, 1, 2, 3};
  const double arg[] = {-1, -1, 0.3, 0.3};
  int found = 0;
  double when = 0;
  REQUIRE(ngp_detect_bend(bt, arg, 4, 0.1, &found, &when) == NGP_OK);
  CHECK(found == 1);
  CHECK(when == 2.0);
}
