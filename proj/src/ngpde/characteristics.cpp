#include "ngpde/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "ngpde/error.hpp"

namespace ngpde {

namespace {

// Time-dependent coefficients of H and their time derivatives:
//   H = (x-1)(x B - A) a + ((x-1) C - E) b + E x^m
struct Terms {
  double A, B, C, E;
  double dA, dB, dC;
};

Terms terms_at(const ProcessRates& r, double g, double dg) {
  if (!(g > 0.0)) {
    throw DomainError("characteristic system requires g(t) > 0, got " +
                      std::to_string(g));
  }
  const double pref = 2.0 * r.l_p + r.n_p * r.m;
  Terms k;
  k.A = r.omega_r + r.omega_p + r.l_d + r.n_d * g;
  k.B = r.omega_p + pref / g;
  k.C = r.omega_r * g + 2.0 * r.l_r + r.n_r * r.m;
  k.E = r.n_r + r.n_p;
  k.dA = r.n_d * dg;
  k.dB = -pref * dg / (g * g);
  k.dC = r.omega_r * dg;
  return k;
}

Terms terms_at(const ProcessRates& r, const MomentTrajectory& g, double t) {
  const double gv = g.value(t);
  return terms_at(r, gv, g.coefficients().rhs(gv));
}

// The integrators carry v = log(1 - x) instead of x. x = 1 is an equilibrium
// of the projected characteristic, and characteristics traced back over long
// times accumulate exponentially close to it; in v the tolerance controls the
// relative error of 1 - x at every scale. x = 1 itself stays put and is
// handled without v.
using Full = std::array<double, 4>;  // (v, p1, p2, z)
using Proj = std::array<double, 1>;  // (v)

double v_rate(double u, const Terms& k) { return k.A - k.B + u * k.B; }

Full full_rhs(const Full& y, const Terms& k, int m, bool at_one) {
  const double u = at_one ? 0.0 : std::exp(y[0]);
  const double p1 = y[1], p2 = y[2], z = y[3];
  const double x = 1.0 - u;
  const double xm1 = -u;
  const double drift = (k.B - k.A) - u * k.B;  // x B - A
  const double h_a = xm1 * drift;
  const double h_b = xm1 * k.C - k.E;
  const double source = m > 0 ? k.E * m * ipow(x, m - 1) : 0.0;
  const double h_c = (drift + xm1 * k.B) * p1 + k.C * z + source;
  const double h_d = xm1 * (x * k.dB - k.dA) * p1 + xm1 * k.dC * z;
  return {at_one ? 0.0 : v_rate(u, k), h_c + h_b * p1, h_d + h_b * p2, -h_a * p1 + p2};
}

// 1 - x along the projected characteristic from t0 to t1; u = 0 is fixed.
double integrate_u(double u, double t0, double t1, const ProcessRates& rates,
                   const MomentTrajectory& g, const ode::Tolerances& tol) {
  if (u == 0.0) return 0.0;
  Proj y{std::log(u)};
  ode::integrate(
      [&](const Proj& s, Proj& ds, double t) {
        ds[0] = v_rate(std::exp(s[0]), terms_at(rates, g, t));
      },
      y, t0, t1, tol);
  return std::exp(y[0]);
}

void check_x(double x) {
  if (!(x >= -1.0 && x <= 1.0)) {
    throw ValidationError("x must lie in [-1,1], got " + std::to_string(x));
  }
}

[[noreturn]] void rethrow_with_context(const Error& e, const std::string& where) {
  const std::string msg = where + ": " + e.what();
  switch (e.code()) {
    case ErrorCode::numerical:
      throw NumericalError(msg);
    case ErrorCode::no_steady_state:
      throw NoSteadyStateError(msg);
    case ErrorCode::validation:
      break;
  }
  throw ValidationError(msg);
}

}  // namespace

CharacteristicState initial_state(double x0, const InitialCondition& h,
                                  const ProcessRates& rates, const MomentTrajectory& g) {
  CharacteristicState s;
  s.x = x0;
  s.z = h.value(x0);
  s.p1 = h.derivative(x0);
  s.p2 = evaluate_h(s.p1, s.z, x0, g.value(0.0), rates);
  s.t = 0.0;
  return s;
}

std::array<double, 4> char_rhs(const CharacteristicState& s, const ProcessRates& rates,
                               const MomentTrajectory& g) {
  const Terms k = terms_at(rates, g, s.t);
  const double u = 1.0 - s.x;
  const Full d = full_rhs({u > 0.0 ? std::log(u) : 0.0, s.p1, s.p2, s.z}, k, rates.m, u == 0.0);
  return {-u * d[0], d[1], d[2], d[3]};
}

double trace_forward(const CharacteristicFoot& foot, double t, const ProcessRates& rates,
                     const MomentTrajectory& g, const SolverOptions& opts) {
  return 1.0 - integrate_u(foot.gap, 0.0, t, rates, g, opts.tol);
}

double trace_forward(double x0, double t, const ProcessRates& rates,
                     const MomentTrajectory& g, const SolverOptions& opts) {
  return trace_forward(CharacteristicFoot{x0, 1.0 - x0}, t, rates, g, opts);
}

CharacteristicFoot trace_back_foot(double x_bar, double t_bar, const ProcessRates& rates,
                                   const MomentTrajectory& g, const SolverOptions& opts) {
  check_x(x_bar);
  if (!(t_bar >= 0.0)) throw ValidationError("t must be nonnegative");
  if (t_bar == 0.0 || x_bar == 1.0) return {x_bar, 1.0 - x_bar};

  CharacteristicFoot foot;
  foot.gap = integrate_u(1.0 - x_bar, t_bar, 0.0, rates, g, opts.tol);
  foot.x0 = 1.0 - foot.gap;
  if (foot.x0 < -1.0 - opts.clamp_tol || foot.x0 > 1.0 + opts.clamp_tol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "traced characteristic left the trapping region: x_bar=" << x_bar
        << " t_bar=" << t_bar << " x0=" << foot.x0;
    throw NumericalError(msg.str());
  }
  if (foot.x0 < -1.0) foot = {-1.0, 2.0};

  const double x_back = trace_forward(foot, t_bar, rates, g, opts);
  if (!(std::abs(x_back - x_bar) <= opts.roundtrip_tol)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "characteristic roundtrip mismatch: x_bar=" << x_bar << " t_bar=" << t_bar
        << " x0=" << foot.x0 << " forward=" << x_back
        << " error=" << std::abs(x_back - x_bar) << " tol=" << opts.roundtrip_tol;
    throw NumericalError(msg.str());
  }
  return foot;
}

double trace_back(double x_bar, double t_bar, const ProcessRates& rates,
                  const MomentTrajectory& g, const SolverOptions& opts) {
  return trace_back_foot(x_bar, t_bar, rates, g, opts).x0;
}

PointSolution solve_at(double x_bar, double t_bar, const ProcessRates& rates,
                       const MomentTrajectory& g, const InitialCondition& h,
                       const SolverOptions& opts) {
  const CharacteristicFoot foot = trace_back_foot(x_bar, t_bar, rates, g, opts);
  const double x0 = foot.x0;
  const CharacteristicState q = initial_state(x0, h, rates, g);

  const bool at_one = foot.gap == 0.0;
  Full y{at_one ? 0.0 : std::log(foot.gap), q.p1, q.p2, q.z};
  if (t_bar > 0.0) {
    const int m = rates.m;
    ode::integrate(
        [&](const Full& s, Full& ds, double t) {
          ds = full_rhs(s, terms_at(rates, g, t), m, at_one);
        },
        y, 0.0, t_bar, opts.tol);
  }
  const double x_end = at_one ? 1.0 : 1.0 - std::exp(y[0]);

  PointSolution out;
  out.x0 = x0;
  out.Gx = y[1];
  out.Gt = y[2];
  out.G = y[3];
  out.residual =
      std::abs(y[2] - evaluate_h(y[1], y[3], x_end, g.value(t_bar), rates));
  return out;
}

SolutionField solve_grid(const std::vector<double>& xs, const std::vector<double>& ts,
                         const ProcessRates& rates, const InitialCondition& h,
                         const SolverOptions& opts) {
  rates.validate();
  h.validate();
  if (xs.empty() || ts.empty()) throw ValidationError("grids must be nonempty");
  if (!std::is_sorted(xs.begin(), xs.end()) || !std::is_sorted(ts.begin(), ts.end())) {
    throw ValidationError("grids must be sorted");
  }
  for (double x : xs) check_x(x);
  if (!(ts.front() >= 0.0)) throw ValidationError("times must be nonnegative");

  const MomentTrajectory g = solve_closed_form(derive_riccati(rates), h.first_moment());

  SolutionField field;
  field.xs = xs;
  field.ts = ts;
  field.G.assign(ts.size(), std::vector<double>(xs.size()));
  field.Gx.assign(ts.size(), std::vector<double>(xs.size()));
  field.g.resize(ts.size());

  for (std::size_t it = 0; it < ts.size(); ++it) {
    const double t = ts[it];
    field.g[it] = g.value(t);
    for (std::size_t ix = 0; ix < xs.size(); ++ix) {
      PointSolution p;
      try {
        p = solve_at(xs[ix], t, rates, g, h, opts);
      } catch (const Error& e) {
        std::ostringstream where;
        where.precision(17);
        where << "solve failed at (x=" << xs[ix] << ", t=" << t << ")";
        rethrow_with_context(e, where.str());
      }
      field.G[it][ix] = p.G;
      field.Gx[it][ix] = p.Gx;
      field.max_pde_residual = std::max(field.max_pde_residual, p.residual);
    }
    const PointSolution one = solve_at(1.0, t, rates, g, h, opts);
    field.max_closure_error = std::max(field.max_closure_error, std::abs(one.Gx - field.g[it]));
    field.max_unit_error = std::max(field.max_unit_error, std::abs(one.G - 1.0));
  }

  if (!(field.max_closure_error <= opts.closure_tol)) {
    throw NumericalError("nonlocal closure violated: max |G_x(1,t) - g(t)| = " +
                         std::to_string(field.max_closure_error));
  }
  return field;
}

std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw ValidationError("invalid grid specification");
  const double slack = step * 1e-6;
  const auto n = static_cast<std::size_t>(std::floor((hi - lo + slack) / step));
  std::vector<double> out;
  for (std::size_t i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
  if (std::abs(out.back() - hi) <= slack) {
    out.back() = hi;
  } else {
    out.push_back(hi);
  }
  return out;
}

}  // namespace ngpde
