#include "ngpde/ngpde.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "ngpde/analysis.hpp"
#include "ngpde/characteristics.hpp"
#include "ngpde/degree_ode.hpp"
#include "ngpde/error.hpp"
#include "ngpde/graphsim.hpp"
#include "ngpde/initial_condition.hpp"
#include "ngpde/model.hpp"
#include "ngpde/riccati.hpp"
#include "ngpde/steady.hpp"

struct ngp_initial {
  ngpde::InitialCondition h;
};
struct ngp_moment {
  ngpde::ProcessRates rates;
  ngpde::MomentTrajectory g;
};
struct ngp_field {
  ngpde::SolutionField f;
};
struct ngp_steady {
  ngpde::SteadyState s;
  ngpde::SteadyConstants k;
  std::string cell;
};
struct ngp_ode {
  ngpde::MasterTrajectory traj;
  std::size_t n;
};
struct ngp_mc {
  ngpde::SimResult r;
};

namespace {

thread_local std::string g_last_error;

ngp_status fail(ngp_status code, const char* what) {
  g_last_error = what;
  return code;
}

// Runs `body` and maps exceptions onto status codes.
template <class F>
ngp_status guarded(F&& body) {
  try {
    body();
    return NGP_OK;
  } catch (const ngpde::Error& e) {
    return fail(static_cast<ngp_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(NGP_ERR_NUMERICAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(NGP_ERR_NUMERICAL, e.what());
  }
}

void need(const void* p, const char* name) {
  if (p == nullptr) throw ngpde::ValidationError(std::string(name) + " must not be NULL");
}

ngpde::ProcessRates to_rates(const ngp_rates* r) {
  need(r, "rates");
  ngpde::ProcessRates out;
  out.omega_r = r->omega_r;
  out.omega_p = r->omega_p;
  out.l_d = r->l_d;
  out.l_r = r->l_r;
  out.l_p = r->l_p;
  out.n_d = r->n_d;
  out.n_r = r->n_r;
  out.n_p = r->n_p;
  out.m = r->m;
  out.validate();
  return out;
}

ngpde::SolverOptions to_options(const ngp_solver_options* o) {
  ngpde::SolverOptions out;
  if (o == nullptr) return out;
  out.tol = {o->rtol, o->atol};
  out.roundtrip_tol = o->roundtrip_tol;
  out.clamp_tol = o->clamp_tol;
  out.closure_tol = o->closure_tol;
  if (!(o->rtol > 0.0 && o->atol > 0.0 && o->roundtrip_tol > 0.0 && o->clamp_tol >= 0.0 &&
        o->closure_tol > 0.0)) {
    throw ngpde::ValidationError("solver tolerances must be positive");
  }
  return out;
}

std::vector<double> span(const double* p, std::size_t n, const char* name) {
  if (n > 0) need(p, name);
  return std::vector<double>(p, p + n);
}

ngpde::SteadyConstants constants_from(const double c[4], int m) {
  need(c, "c");
  if (m < 0) throw ngpde::ValidationError("m must be nonnegative");
  return ngpde::SteadyConstants::explicit_constants(c[0], c[1], c[2], c[3], m);
}

ngp_steady* wrap(ngpde::SteadyState s, const ngpde::SteadyConstants& k) {
  auto* out = new ngp_steady{std::move(s), k, {}};
  out->cell = ngpde::to_string(out->s.steady_case().cell);
  return out;
}

}  // namespace

extern "C" {

const char* ngp_last_error(void) { return g_last_error.c_str(); }

const char* ngp_version(void) { return "1.0.0"; }

ngp_status ngp_rates_validate(const ngp_rates* rates) {
  return guarded([&] { to_rates(rates); });
}

ngp_status ngp_riccati_coefficients(const ngp_rates* rates, double* n_d, double* b, double* c) {
  return guarded([&] {
    const auto k = ngpde::derive_riccati(to_rates(rates));
    if (n_d) *n_d = k.n_d;
    if (b) *b = k.b;
    if (c) *c = k.c;
  });
}

ngp_status ngp_riccati_equilibrium(const ngp_rates* rates, double* g_inf) {
  return guarded([&] {
    need(g_inf, "g_inf");
    *g_inf = ngpde::equilibrium(ngpde::derive_riccati(to_rates(rates)));
  });
}

ngp_status ngp_steady_constants(const ngp_rates* rates, double c[4], double* g_inf,
                                int* degeneracy) {
  return guarded([&] {
    const auto k = ngpde::steady_constants(to_rates(rates));
    if (c) {
      c[0] = k.c1;
      c[1] = k.c2;
      c[2] = k.c3;
      c[3] = k.c4;
    }
    if (g_inf) *g_inf = k.g_inf;
    if (degeneracy) *degeneracy = static_cast<int>(k.degeneracy);
  });
}

ngp_status ngp_evaluate_h(const ngp_rates* rates, double a, double bb, double cc, double g_at_t,
                          double* out) {
  return guarded([&] {
    need(out, "out");
    *out = ngpde::evaluate_h(a, bb, cc, g_at_t, to_rates(rates));
  });
}

ngp_status ngp_initial_polynomial(const double* coeffs, size_t n, ngp_initial** out) {
  return guarded([&] {
    need(out, "out");
    *out = new ngp_initial{ngpde::InitialCondition::polynomial(span(coeffs, n, "coeffs"))};
  });
}

ngp_status ngp_initial_geometric(double a, double ratio, ngp_initial** out) {
  return guarded([&] {
    need(out, "out");
    *out = new ngp_initial{ngpde::InitialCondition::scaled_geometric(a, ratio)};
  });
}

ngp_status ngp_initial_explicit(const double* head, size_t n, double tail_a, double tail_ratio,
                                ngp_initial** out) {
  return guarded([&] {
    need(out, "out");
    *out = new ngp_initial{
        ngpde::InitialCondition::explicit_coefficients(span(head, n, "head"), tail_a, tail_ratio)};
  });
}

ngp_status ngp_initial_value(const ngp_initial* h, double x, double* value, double* derivative) {
  return guarded([&] {
    need(h, "h");
    if (value) *value = h->h.value(x);
    if (derivative) *derivative = h->h.derivative(x);
  });
}

ngp_status ngp_initial_coefficients(const ngp_initial* h, size_t kmax, double* out) {
  return guarded([&] {
    need(h, "h");
    need(out, "out");
    const auto p = h->h.coefficients(kmax);
    std::copy(p.begin(), p.end(), out);
  });
}

void ngp_initial_free(ngp_initial* h) { delete h; }

ngp_status ngp_moment_closed_form(const ngp_rates* rates, double g0, ngp_moment** out) {
  return guarded([&] {
    need(out, "out");
    const auto r = to_rates(rates);
    *out = new ngp_moment{r, ngpde::solve_closed_form(ngpde::derive_riccati(r), g0)};
  });
}

ngp_status ngp_moment_numeric(const ngp_rates* rates, double g0, double t_end, double tol,
                              ngp_moment** out) {
  return guarded([&] {
    need(out, "out");
    const auto r = to_rates(rates);
    *out = new ngp_moment{r, ngpde::solve_numeric(ngpde::derive_riccati(r), g0, t_end, tol)};
  });
}

ngp_status ngp_moment_value(const ngp_moment* g, double t, double* value) {
  return guarded([&] {
    need(g, "g");
    need(value, "value");
    *value = g->g.value(t);
  });
}

void ngp_moment_free(ngp_moment* g) { delete g; }

void ngp_solver_options_default(ngp_solver_options* opts) {
  if (opts == nullptr) return;
  const ngpde::SolverOptions d;
  opts->rtol = d.tol.rtol;
  opts->atol = d.tol.atol;
  opts->roundtrip_tol = d.roundtrip_tol;
  opts->clamp_tol = d.clamp_tol;
  opts->closure_tol = d.closure_tol;
}

ngp_status ngp_trace_back(const ngp_rates* rates, const ngp_moment* g, double x_bar, double t_bar,
                          const ngp_solver_options* opts, double* x0, double* gap) {
  return guarded([&] {
    need(g, "g");
    const auto foot = ngpde::trace_back_foot(x_bar, t_bar, to_rates(rates), g->g, to_options(opts));
    if (x0) *x0 = foot.x0;
    if (gap) *gap = foot.gap;
  });
}

ngp_status ngp_trace_forward(const ngp_rates* rates, const ngp_moment* g, double gap, double t,
                             const ngp_solver_options* opts, double* x) {
  return guarded([&] {
    need(g, "g");
    need(x, "x");
    *x = ngpde::trace_forward(ngpde::CharacteristicFoot{1.0 - gap, gap}, t, to_rates(rates), g->g,
                              to_options(opts));
  });
}

ngp_status ngp_solve_point(const ngp_rates* rates, const ngp_moment* g, const ngp_initial* h,
                           double x, double t, const ngp_solver_options* opts, double* G,
                           double* Gx) {
  return guarded([&] {
    need(g, "g");
    need(h, "h");
    const auto p = ngpde::solve_at(x, t, to_rates(rates), g->g, h->h, to_options(opts));
    if (G) *G = p.G;
    if (Gx) *Gx = p.Gx;
  });
}

ngp_status ngp_solve_grid(const ngp_rates* rates, const ngp_initial* h, const double* xs,
                          size_t nx, const double* ts, size_t nt, const ngp_solver_options* opts,
                          ngp_field** out) {
  return guarded([&] {
    need(h, "h");
    need(out, "out");
    *out = new ngp_field{ngpde::solve_grid(span(xs, nx, "xs"), span(ts, nt, "ts"),
                                           to_rates(rates), h->h, to_options(opts))};
  });
}

ngp_status ngp_field_values(const ngp_field* f, double* G, double* Gx, double* g) {
  return guarded([&] {
    need(f, "f");
    const std::size_t nx = f->f.xs.size();
    for (std::size_t it = 0; it < f->f.ts.size(); ++it) {
      if (G) std::copy(f->f.G[it].begin(), f->f.G[it].end(), G + it * nx);
      if (Gx) std::copy(f->f.Gx[it].begin(), f->f.Gx[it].end(), Gx + it * nx);
    }
    if (g) std::copy(f->f.g.begin(), f->f.g.end(), g);
  });
}

ngp_status ngp_field_diagnostics(const ngp_field* f, double* max_closure_error,
                                 double* max_unit_error, double* max_pde_residual) {
  return guarded([&] {
    need(f, "f");
    if (max_closure_error) *max_closure_error = f->f.max_closure_error;
    if (max_unit_error) *max_unit_error = f->f.max_unit_error;
    if (max_pde_residual) *max_pde_residual = f->f.max_pde_residual;
  });
}

void ngp_field_free(ngp_field* f) { delete f; }

ngp_status ngp_ode_integrate(const ngp_rates* rates, const double* p0, size_t n, double t_end,
                             double rtol, double atol, double mass_tol, ngp_ode** out) {
  return guarded([&] {
    need(out, "out");
    ngpde::OracleOptions o;
    o.tol = {rtol, atol};
    o.mass_tol = mass_tol;
    if (!(rtol > 0.0 && atol > 0.0 && mass_tol > 0.0)) {
      throw ngpde::ValidationError("oracle tolerances must be positive");
    }
    ngpde::TruncatedDistribution d{span(p0, n, "p0"), 0.0};
    *out = new ngp_ode{ngpde::integrate(d, to_rates(rates), t_end, o), n};
  });
}

ngp_status ngp_ode_at(const ngp_ode* ode, double t, double* p) {
  return guarded([&] {
    need(ode, "ode");
    need(p, "p");
    if (!(t >= 0.0 && t <= ode->traj.t_end())) {
      throw ngpde::ValidationError("t outside the integrated interval");
    }
    const auto d = ode->traj.at(t);
    std::copy(d.p.begin(), d.p.end(), p);
  });
}

ngp_status ngp_ode_diagnostics(const ngp_ode* ode, double* max_leakage, double* min_probability) {
  return guarded([&] {
    need(ode, "ode");
    if (max_leakage) *max_leakage = ode->traj.max_leakage();
    if (min_probability) *min_probability = ode->traj.min_probability();
  });
}

void ngp_ode_free(ngp_ode* ode) { delete ode; }

ngp_status ngp_steady_build(const ngp_rates* rates, ngp_steady** out) {
  return guarded([&] {
    need(out, "out");
    const auto k = ngpde::steady_constants(to_rates(rates));
    *out = wrap(ngpde::build_steady_state(k), k);
  });
}

ngp_status ngp_steady_build_constants(const double c[4], int m, ngp_steady** out) {
  return guarded([&] {
    need(out, "out");
    const auto k = constants_from(c, m);
    *out = wrap(ngpde::build_steady_state(k), k);
  });
}

ngp_status ngp_steady_build_two_singularity(const double c[4], int m, double anchor,
                                            ngp_steady** out) {
  return guarded([&] {
    need(out, "out");
    const auto k = constants_from(c, m);
    *out = wrap(ngpde::build_two_singularity(k, anchor), k);
  });
}

ngp_status ngp_steady_eval(const ngp_steady* s, const double* xs, size_t n, double* out) {
  return guarded([&] {
    need(s, "s");
    if (n > 0) need(xs, "xs"), need(out, "out");
    for (std::size_t i = 0; i < n; ++i) out[i] = s->s(xs[i]);
  });
}

ngp_status ngp_steady_residual(const ngp_steady* s, const double* xs, size_t n, double h,
                               double* out) {
  return guarded([&] {
    need(s, "s");
    if (n > 0) need(xs, "xs"), need(out, "out");
    if (!(h > 0.0)) throw ngpde::ValidationError("difference step must be positive");
    for (std::size_t i = 0; i < n; ++i) out[i] = ngpde::residual(s->s, s->k, xs[i], h);
  });
}

ngp_status ngp_steady_get_info(const ngp_steady* s, ngp_steady_info* info) {
  return guarded([&] {
    need(s, "s");
    need(info, "info");
    info->cell = s->cell.c_str();
    info->slope_at_one = s->s.slope_at_one();
    info->value_at_ratio = s->s.value_at_ratio().value_or(ngpde::kNaN);
    info->certified = s->s.certified() ? 1 : 0;
    const auto& pts = s->s.steady_case().singular_points;
    info->singular_count = pts.size();
    info->singular_points[0] = info->singular_points[1] = ngpde::kNaN;
    for (std::size_t i = 0; i < pts.size() && i < 2; ++i) info->singular_points[i] = pts[i];
  });
}

ngp_status ngp_steady_residual_grid(const ngp_steady* s, int count, double delta, double* out,
                                    size_t* written) {
  return guarded([&] {
    need(s, "s");
    need(out, "out");
    need(written, "written");
    if (count < 2) throw ngpde::ValidationError("count must be at least 2");
    const auto xs = ngpde::residual_grid(s->s.steady_case(), count, delta);
    std::copy(xs.begin(), xs.end(), out);
    *written = xs.size();
  });
}

void ngp_steady_free(ngp_steady* s) { delete s; }

ngp_status ngp_mc_run(const ngp_mc_config* cfg, const double* times, size_t nt, ngp_mc** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out, "out");
    if (cfg->graph < NGP_GRAPH_EMPTY || cfg->graph > NGP_GRAPH_REGULAR) {
      throw ngpde::ValidationError("unknown graph kind");
    }
    ngpde::SimConfig c;
    c.rates = to_rates(&cfg->rates);
    c.nodes = cfg->nodes;
    c.initial = {static_cast<ngpde::GraphKind>(cfg->graph), cfg->graph_param};
    c.sample_times = span(times, nt, "times");
    c.replicas = cfg->replicas;
    c.seed = cfg->seed;
    c.kmax = cfg->kmax;
    c.threads = cfg->threads;
    *out = new ngp_mc{ngpde::run(c)};
  });
}

size_t ngp_mc_width(const ngp_mc* mc) {
  return mc == nullptr ? 0 : mc->r.initial_mean.size();
}

ngp_status ngp_mc_values(const ngp_mc* mc, double* mean, double* stderr_, double* initial) {
  return guarded([&] {
    need(mc, "mc");
    const std::size_t w = mc->r.initial_mean.size();
    for (std::size_t i = 0; i < mc->r.times.size(); ++i) {
      if (mean) std::copy(mc->r.mean[i].begin(), mc->r.mean[i].end(), mean + i * w);
      if (stderr_) std::copy(mc->r.stderr_[i].begin(), mc->r.stderr_[i].end(), stderr_ + i * w);
    }
    if (initial) std::copy(mc->r.initial_mean.begin(), mc->r.initial_mean.end(), initial);
  });
}

ngp_status ngp_mc_stats(const ngp_mc* mc, size_t* absorbed_replicas, size_t* skipped_events,
                        size_t* events) {
  return guarded([&] {
    need(mc, "mc");
    if (absorbed_replicas) *absorbed_replicas = mc->r.absorbed_replicas;
    if (skipped_events) *skipped_events = mc->r.skipped_events;
    if (events) *events = mc->r.events;
  });
}

void ngp_mc_free(ngp_mc* mc) { delete mc; }

ngp_status ngp_total_variation(const double* a, size_t na, const double* b, size_t nb,
                               double* out) {
  return guarded([&] {
    need(out, "out");
    *out = ngpde::total_variation(span(a, na, "a"), span(b, nb, "b"));
  });
}

ngp_status ngp_diff_norms(const double* xs, size_t nx, const double* ts, size_t nt,
                          const double* G, const double* reference, double* sup_norm,
                          double* l2_norm, double* argmax_x, double* grid_spacing) {
  return guarded([&] {
    std::vector<std::vector<double>> rows(nt);
    if (nt * nx > 0) need(G, "G");
    for (std::size_t it = 0; it < nt; ++it) rows[it].assign(G + it * nx, G + (it + 1) * nx);
    const auto s = ngpde::diff_norms(span(xs, nx, "xs"), span(ts, nt, "ts"), rows,
                                     span(reference, nx, "reference"));
    if (sup_norm) std::copy(s.sup_norm.begin(), s.sup_norm.end(), sup_norm);
    if (l2_norm) std::copy(s.l2_norm.begin(), s.l2_norm.end(), l2_norm);
    if (argmax_x) std::copy(s.argmax_x.begin(), s.argmax_x.end(), argmax_x);
    if (grid_spacing) *grid_spacing = s.grid_spacing;
  });
}

ngp_status ngp_fit_rate(const double* ts, const double* norms, size_t n, double t_lo, double t_hi,
                        double margin, ngp_rate_fit* out) {
  return guarded([&] {
    need(out, "out");
    const auto f =
        ngpde::fit_rate(span(ts, n, "ts"), span(norms, n, "norms"), t_lo, t_hi, margin);
    out->model = f.model == ngpde::RateModel::exponential ? NGP_RATE_EXPONENTIAL : NGP_RATE_ALGEBRAIC;
    out->rate = f.rate;
    out->goodness = f.goodness;
    out->exponential_rate = f.exponential_rate;
    out->exponential_r2 = f.exponential_r2;
    out->algebraic_order = f.algebraic_order;
    out->algebraic_r2 = f.algebraic_r2;
    out->points = f.points;
  });
}

ngp_status ngp_detect_bend(const double* ts, const double* argmax_x, size_t n, double min_jump,
                           int* found, double* t) {
  return guarded([&] {
    need(found, "found");
    const auto b = ngpde::detect_bend(span(ts, n, "ts"), span(argmax_x, n, "argmax_x"), min_jump);
    *found = b ? 1 : 0;
    if (t) *t = b.value_or(ngpde::kNaN);
  });
}

}  // extern "C"
