// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ngpde/analysis.hpp"
#include "ngpde/characteristics.hpp"
#include "ngpde/degree_ode.hpp"
#include "ngpde/graphsim.hpp"
#include "ngpde/steady.hpp"

using namespace ngpde;

namespace {

ProcessRates rates(double omega_r, double omega_p, double l_d, double l_r, double l_p,
                   double n_d, double n_r, double n_p, int m) {
  ProcessRates p;
  p.omega_r = omega_r;
  p.omega_p = omega_p;
  p.l_d = l_d;
  p.l_r = l_r;
  p.l_p = l_p;
  p.n_d = n_d;
  p.n_r = n_r;
  p.n_p = n_p;
  p.m = m;
  return p;
}

const ProcessRates kMixed = rates(1, 1, 1, 1, 0, 1, 1, 1, 3);
const ProcessRates kPreferentialLinks = rates(0, 1, 1, 0, 1, 1, 0, 0, 3);
const ProcessRates kUniformOnly = rates(1, 0, 1, 1, 0, 1, 1, 0, 3);

const InitialCondition kSquare = InitialCondition::polynomial({0, 0, 1});
const InitialCondition kLinear = InitialCondition::polynomial({0, 1});
const InitialCondition kGeometric = InitialCondition::scaled_geometric(2.0 / 3.0, 3.0);

constexpr std::size_t kKmax = 200;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void note(Outcome& o, const char* fmt, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

TruncatedDistribution start(const InitialCondition& h) { return {h.coefficients(kKmax), 0.0}; }

// Loose oracle options: leakage is measured here, not enforced.
OracleOptions measuring() {
  OracleOptions o;
  o.mass_tol = 1.0;
  return o;
}

Outcome nonlocal_closure() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto xs = uniform_grid(-1, 1, 0.05);
  const auto ts = uniform_grid(0, 0.2, 0.005);
  const auto f = solve_grid(xs, ts, kMixed, kSquare);
  const double secs = seconds_since(t0);
  const auto g = solve_closed_form(derive_riccati(kMixed), 2.0);
  double unit = 0.0, closure = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    unit = std::max(unit, std::abs(f.G[i].back() - 1.0));
    closure = std::max(closure, std::abs(f.Gx[i].back() - g(ts[i])));
  }
  o.pass = unit <= 1e-7 && closure <= 1e-6 && secs <= 10.0;
  note(o, "max|G(1,t)-1| = %.3g, max|Gx(1,t)-g(t)| = %.3g, %.2f s", unit, closure, secs);
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto xs = uniform_grid(-1, 1, 0.05);
  const auto ts = uniform_grid(0, 1, 0.1);
  const auto f = solve_grid(xs, ts, kMixed, kGeometric);
  const auto oracle = integrate(start(kGeometric), kMixed, 1.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto p = oracle.at(ts[i]);
    for (std::size_t j = 0; j < xs.size(); ++j) {
      worst = std::max(worst, std::abs(f.G[i][j] - gf_eval(p, xs[j])));
    }
  }
  const double secs = seconds_since(t0);
  o.pass = xs.size() == 41 && ts.size() == 11 && worst <= 1e-4 && secs <= 60.0;
  note(o, "max|G - sum p_k x^k| = %.3g on %gx11 grid, %.2f s", worst, double(xs.size()), secs);
  return o;
}

Outcome moment_consistency() {
  Outcome o;
  double overall = 0.0;
  for (const auto& r : {kMixed, kPreferentialLinks, kUniformOnly}) {
    for (const auto* h : {&kSquare, &kGeometric}) {
      const auto traj = integrate(start(*h), r, 1.0, measuring());
      const auto g = solve_closed_form(derive_riccati(r), h->first_moment());
      double worst = 0.0;
      for (double t : uniform_grid(0, 1, 0.01)) {
        worst = std::max(worst, std::abs(first_moment(traj.at(t)) - g(t)));
      }
      overall = std::max(overall, worst);
    }
  }
  o.pass = overall <= 1e-4;
  note(o, "max|sum k p_k - g| = %.3g over 3 rate sets x 2 initial conditions", overall);
  return o;
}

Outcome trapping_roundtrip() {
  Outcome o;
  std::mt19937_64 rng(20240501);
  std::uniform_real_distribution<double> ux(-1.0, 1.0), ut(0.0, 5.0);
  const auto g = solve_closed_form(derive_riccati(kMixed), 2.0);
  SolverOptions opts;
  opts.roundtrip_tol = 1.0;  // measured below, not enforced inside
  double worst_trap = 0.0, worst_trip = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double xb = ux(rng);
    double tb = ut(rng);
    if (tb == 0.0) tb = 5.0;
    const auto foot = trace_back_foot(xb, tb, kMixed, g, opts);
    worst_trap = std::max(worst_trap, std::max(foot.x0 - 1.0, -1.0 - foot.x0));
    worst_trip = std::max(worst_trip, std::abs(trace_forward(foot, tb, kMixed, g, opts) - xb));
  }
  o.pass = worst_trap <= 1e-9 && worst_trip <= 1e-8;
  note(o, "max excursion outside [-1,1] = %.3g, max roundtrip error = %.3g", std::max(0.0, worst_trap),
       worst_trip);
  return o;
}

Outcome steady_construction() {
  Outcome o;
  const auto k = SteadyConstants::explicit_constants(2, 1, 1, 2, 3);
  const auto s = build_two_singularity(k);
  const double at_one = s(1.0);
  const double at_half = s(0.5);
  double res = 0.0;
  const auto xs = residual_grid(s.steady_case(), 101, 1e-3);
  for (double x : xs) res = std::max(res, std::abs(residual(s, k, x)));
  const auto a = build_two_singularity(k, 0.6);
  const auto b = build_two_singularity(k, 0.9);
  double anchor = 0.0;
  for (double x : uniform_grid(-1, 1, 0.01)) anchor = std::max(anchor, std::abs(a(x) - b(x)));
  o.pass = at_one == 1.0 && std::abs(at_half - 0.1) <= 1e-6 && res <= 1e-6 && anchor <= 1e-8;
  note(o, "G*(1) = %.17g, |G*(0.5) - 0.1| = %.3g", at_one, std::abs(at_half - 0.1));
  note(o, "max residual = %.3g at %g points, anchor spread = %.3g", res, double(xs.size()), anchor);
  return o;
}

Outcome slope_identity() {
  Outcome o;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  std::bernoulli_distribution off(0.25);
  std::uniform_int_distribution<int> um(0, 6);
  int found = 0, drawn = 0;
  double worst = 0.0;
  while (found < 100) {
    ++drawn;
    auto r = [&] { return off(rng) ? 0.0 : u(rng); };
    ProcessRates p = rates(r(), r(), r(), r(), r(), r(), r(), r(), um(rng));
    const auto k = steady_constants(p);
    if (k.degeneracy != SteadyDegeneracy::regular) continue;
    if (std::abs(k.c4 + k.c2 - k.c1) < 1e-12) continue;
    ++found;
    const double rel = std::abs(series_seed_slope(k) - equilibrium(derive_riccati(p))) /
                       std::max(std::abs(k.g_inf), 1e-300);
    worst = std::max(worst, rel);
  }
  o.pass = worst <= 1e-8;
  note(o, "max relative difference = %.3g over 100 regular sets (%g drawn)", worst, double(drawn));
  return o;
}

ConvergenceSeries convergence(const ProcessRates& r, const InitialCondition& h, double t_max,
                              double t_step) {
  const auto f = solve_grid(uniform_grid(-1, 1, 0.02), uniform_grid(0, t_max, t_step), r, h);
  return diff_norms(f, build_steady_state(steady_constants(r)));
}

Outcome convergence_regimes() {
  Outcome o;

  const auto s5 = convergence(kMixed, kGeometric, 5.0, 0.1);
  try {
    const auto fit = fit_rate(s5, 1.0, 5.0);
    const bool ok = fit.model == RateModel::exponential && fit.goodness >= 0.99;
    o.pass = o.pass && ok;
    note(o, "geometric start: R2 exp = %.4f, R2 alg = %.4f, rate = %.3g", fit.exponential_r2,
         fit.algebraic_r2, fit.exponential_rate);
    o.detail += ok ? " (exponential)" : " (not exponential)";
  } catch (const Error& e) {
    o.pass = false;
    o.detail += std::string("geometric start: ") + e.what();
  }
  note(o, "sup norm %.3g at t=1, %.3g at t=5", s5.sup_norm[10], s5.sup_norm.back());
  // Diagnostic only: the same fit stopped before the norm reaches the
  // double-precision floor of G values near 1.
  const auto early = fit_rate(s5, 1.0, 2.5);
  note(o, "[1,2.5] diagnostic: R2 exp = %.4f, rate = %.3g", early.exponential_r2,
       early.exponential_rate);

  const auto s6 = convergence(kPreferentialLinks, kGeometric, 20.0, 0.25);
  const auto fit6 = fit_rate(s6, 1.0, 20.0);
  const bool alg = fit6.model == RateModel::algebraic;
  o.pass = o.pass && alg;
  note(o, "c3=c4=0: R2 alg = %.4f, order = %.3g", fit6.algebraic_r2, fit6.algebraic_order);
  o.detail += alg ? " (algebraic)" : " (not algebraic)";

  for (const auto* h : {&kLinear, &kSquare}) {
    const auto s7 = convergence(kUniformOnly, *h, 3.0, 0.05);
    const auto bend = detect_bend(s7);
    o.pass = o.pass && bend.has_value();
    note(o, h == &kLinear ? "h=x: bend at t = %g" : "h=x^2: bend at t = %g", bend ? *bend : -1.0);
  }
  return o;
}

Outcome stochastic_validation() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  SimConfig c;
  c.rates = kMixed;
  c.nodes = 2000;
  c.initial = {GraphKind::ring, 0.0};
  c.sample_times = {0.05, 0.1, 0.2};
  c.replicas = 20;
  c.seed = 2;
  c.kmax = kKmax;
  const auto res = run(c);
  TruncatedDistribution p0{res.initial_mean, 0.0};
  p0.p.resize(kKmax + 1, 0.0);
  const auto traj = integrate(p0, kMixed, 0.2);
  double worst = 0.0;
  for (std::size_t i = 0; i < res.times.size(); ++i) {
    worst = std::max(worst, total_variation(res.mean[i], traj.at(res.times[i]).p));
  }
  const double secs = seconds_since(t0);
  o.pass = worst <= 0.05 && secs <= 300.0;
  note(o, "max TV over t in {0.05, 0.1, 0.2} = %.3g, %.1f s", worst, secs);
  return o;
}

Outcome mass_conservation() {
  Outcome o;
  const struct {
    ProcessRates r;
    const InitialCondition* h;
  } configs[] = {{kMixed, &kSquare}, {kMixed, &kGeometric}, {kPreferentialLinks, &kGeometric},
                 {kUniformOnly, &kLinear}, {kUniformOnly, &kSquare},    {kUniformOnly, &kGeometric}};
  double worst = 0.0;
  for (const auto& c : configs) {
    const auto traj = integrate(start(*c.h), c.r, 1.0, measuring());
    for (double t : uniform_grid(0, 1, 0.01)) {
      worst = std::max(worst, std::abs(traj.at(t).mass() - 1.0));
    }
  }
  o.pass = worst <= 1e-6;
  note(o, "max|sum p_k - 1| = %.3g over 6 configurations", worst);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"nonlocal closure", nonlocal_closure},
      {"oracle equivalence", oracle_equivalence},
      {"moment consistency", moment_consistency},
      {"trapping and roundtrip", trapping_roundtrip},
      {"steady-state construction", steady_construction},
      {"slope identity", slope_identity},
      {"convergence regimes", convergence_regimes},
      {"stochastic validation", stochastic_validation},
      {"mass conservation", mass_conservation},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    failed += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed ? 1 : 0;
}
