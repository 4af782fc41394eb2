/* C interface to the ngpde library: generating-function PDE of evolving
 * networks, its steady states, the degree master equation and a stochastic
 * graph simulator.
 *
 * Every call returns an ngp_status. On failure the message is available from
 * ngp_last_error() until the next failing call on the same thread. Handles are
 * opaque, owned by the caller and released with the matching *_free.
 * Dense 2-D outputs are row-major with the time index outermost.
 */
#ifndef NGPDE_NGPDE_H
#define NGPDE_NGPDE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NGP_API __declspec(dllexport)
#else
#define NGP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ngp_status {
  NGP_OK = 0,
  NGP_ERR_VALIDATION = 1,
  NGP_ERR_NUMERICAL = 2,
  NGP_ERR_NO_STEADY_STATE = 3
} ngp_status;

typedef struct ngp_rates {
  double omega_r; /* random rewiring */
  double omega_p; /* preferential rewiring */
  double l_d;     /* deletion of links */
  double l_r;     /* random addition of links */
  double l_p;     /* preferential addition of links */
  double n_d;     /* deletion of nodes */
  double n_r;     /* random addition of nodes */
  double n_p;     /* preferential attachment of nodes */
  int m;          /* degree of a new node */
} ngp_rates;

typedef struct ngp_initial ngp_initial;
typedef struct ngp_moment ngp_moment;
typedef struct ngp_field ngp_field;
typedef struct ngp_steady ngp_steady;
typedef struct ngp_ode ngp_ode;
typedef struct ngp_mc ngp_mc;

NGP_API const char* ngp_last_error(void);
NGP_API const char* ngp_version(void);

/* ---- model ---- */

NGP_API ngp_status ngp_rates_validate(const ngp_rates* rates);
/* g' = -n_d g^2 - b g + c */
NGP_API ngp_status ngp_riccati_coefficients(const ngp_rates* rates, double* n_d, double* b,
                                            double* c);
NGP_API ngp_status ngp_riccati_equilibrium(const ngp_rates* rates, double* g_inf);

enum { NGP_STEADY_REGULAR = 0, NGP_STEADY_UNIFORM = 1, NGP_STEADY_NONE = 2 };

/* c[4] = (c1, c2, c3, c4); degeneracy is one of NGP_STEADY_*. */
NGP_API ngp_status ngp_steady_constants(const ngp_rates* rates, double c[4], double* g_inf,
                                        int* degeneracy);

/* H(a, bb, cc, t) of G_t = H(G_x, G, x, t) with g(t) supplied. */
NGP_API ngp_status ngp_evaluate_h(const ngp_rates* rates, double a, double bb, double cc,
                                  double g_at_t, double* out);

/* ---- initial conditions ---- */

NGP_API ngp_status ngp_initial_polynomial(const double* coeffs, size_t n, ngp_initial** out);
/* p_k = a ratio^-k */
NGP_API ngp_status ngp_initial_geometric(double a, double ratio, ngp_initial** out);
/* head p_0..p_{n-1}, then tail_a tail_ratio^-k */
NGP_API ngp_status ngp_initial_explicit(const double* head, size_t n, double tail_a,
                                        double tail_ratio, ngp_initial** out);
NGP_API ngp_status ngp_initial_value(const ngp_initial* h, double x, double* value,
                                     double* derivative);
/* out has kmax + 1 entries */
NGP_API ngp_status ngp_initial_coefficients(const ngp_initial* h, size_t kmax, double* out);
NGP_API void ngp_initial_free(ngp_initial* h);

/* ---- first moment ---- */

NGP_API ngp_status ngp_moment_closed_form(const ngp_rates* rates, double g0, ngp_moment** out);
NGP_API ngp_status ngp_moment_numeric(const ngp_rates* rates, double g0, double t_end,
                                      double tol, ngp_moment** out);
NGP_API ngp_status ngp_moment_value(const ngp_moment* g, double t, double* value);
NGP_API void ngp_moment_free(ngp_moment* g);

/* ---- characteristics ---- */

typedef struct ngp_solver_options {
  double rtol;
  double atol;
  double roundtrip_tol;
  double clamp_tol;
  double closure_tol;
} ngp_solver_options;

NGP_API void ngp_solver_options_default(ngp_solver_options* opts);

/* Foot of the characteristic through (x_bar, t_bar). gap = 1 - x0 at full
 * relative precision; either output may be NULL. opts may be NULL. */
NGP_API ngp_status ngp_trace_back(const ngp_rates* rates, const ngp_moment* g, double x_bar,
                                  double t_bar, const ngp_solver_options* opts, double* x0,
                                  double* gap);
/* Forward image from the foot with 1 - x0 = gap. */
NGP_API ngp_status ngp_trace_forward(const ngp_rates* rates, const ngp_moment* g, double gap,
                                     double t, const ngp_solver_options* opts, double* x);
NGP_API ngp_status ngp_solve_point(const ngp_rates* rates, const ngp_moment* g,
                                   const ngp_initial* h, double x, double t,
                                   const ngp_solver_options* opts, double* G, double* Gx);

/* G on xs x ts; g is built in closed form from h'(1). */
NGP_API ngp_status ngp_solve_grid(const ngp_rates* rates, const ngp_initial* h, const double* xs,
                                  size_t nx, const double* ts, size_t nt,
                                  const ngp_solver_options* opts, ngp_field** out);
/* G and Gx: nt*nx entries; g: nt entries. Any output may be NULL. */
NGP_API ngp_status ngp_field_values(const ngp_field* f, double* G, double* Gx, double* g);
NGP_API ngp_status ngp_field_diagnostics(const ngp_field* f, double* max_closure_error,
                                         double* max_unit_error, double* max_pde_residual);
NGP_API void ngp_field_free(ngp_field* f);

/* ---- master equation ---- */

NGP_API ngp_status ngp_ode_integrate(const ngp_rates* rates, const double* p0, size_t n,
                                     double t_end, double rtol, double atol, double mass_tol,
                                     ngp_ode** out);
/* p has n entries, n as passed to ngp_ode_integrate. */
NGP_API ngp_status ngp_ode_at(const ngp_ode* ode, double t, double* p);
NGP_API ngp_status ngp_ode_diagnostics(const ngp_ode* ode, double* max_leakage,
                                       double* min_probability);
NGP_API void ngp_ode_free(ngp_ode* ode);

/* ---- steady states ---- */

NGP_API ngp_status ngp_steady_build(const ngp_rates* rates, ngp_steady** out);
NGP_API ngp_status ngp_steady_build_constants(const double c[4], int m, ngp_steady** out);
/* Two singular points only; anchor NaN picks the midpoint of (c2/c1, 1). */
NGP_API ngp_status ngp_steady_build_two_singularity(const double c[4], int m, double anchor,
                                                    ngp_steady** out);
NGP_API ngp_status ngp_steady_eval(const ngp_steady* s, const double* xs, size_t n, double* out);
NGP_API ngp_status ngp_steady_residual(const ngp_steady* s, const double* xs, size_t n,
                                       double h, double* out);

typedef struct ngp_steady_info {
  const char* cell;     /* static string naming the existence-table cell */
  double slope_at_one;  /* NaN when undefined */
  double value_at_ratio; /* NaN without a second singular point */
  int certified;
  size_t singular_count;
  double singular_points[2];
} ngp_steady_info;

NGP_API ngp_status ngp_steady_get_info(const ngp_steady* s, ngp_steady_info* info);
/* Interior grid of [-1,1] avoiding delta-neighbourhoods of the singular
 * points. out has room for count entries; *written receives the number used. */
NGP_API ngp_status ngp_steady_residual_grid(const ngp_steady* s, int count, double delta,
                                            double* out, size_t* written);
NGP_API void ngp_steady_free(ngp_steady* s);

/* ---- stochastic simulation ---- */

enum {
  NGP_GRAPH_EMPTY = 0,
  NGP_GRAPH_COMPLETE = 1,
  NGP_GRAPH_RING = 2,
  NGP_GRAPH_STAR = 3,
  NGP_GRAPH_ERDOS_RENYI = 4,
  NGP_GRAPH_REGULAR = 5
};

typedef struct ngp_mc_config {
  ngp_rates rates;
  size_t nodes;
  int graph;          /* NGP_GRAPH_* */
  double graph_param; /* edge probability or degree */
  size_t replicas;
  uint64_t seed;
  size_t kmax;
  unsigned threads; /* 0: hardware concurrency */
} ngp_mc_config;

NGP_API ngp_status ngp_mc_run(const ngp_mc_config* cfg, const double* times, size_t nt,
                              ngp_mc** out);
/* Number of degree classes per sample. */
NGP_API size_t ngp_mc_width(const ngp_mc* mc);
/* mean and stderr: nt*width; initial: width. Any output may be NULL. */
NGP_API ngp_status ngp_mc_values(const ngp_mc* mc, double* mean, double* stderr_, double* initial);
NGP_API ngp_status ngp_mc_stats(const ngp_mc* mc, size_t* absorbed_replicas,
                                size_t* skipped_events, size_t* events);
NGP_API void ngp_mc_free(ngp_mc* mc);

NGP_API ngp_status ngp_total_variation(const double* a, size_t na, const double* b, size_t nb,
                                       double* out);

/* ---- convergence analysis ---- */

/* G: nt*nx, reference: nx. Outputs have nt entries; grid_spacing may be NULL. */
NGP_API ngp_status ngp_diff_norms(const double* xs, size_t nx, const double* ts, size_t nt,
                                  const double* G, const double* reference, double* sup_norm,
                                  double* l2_norm, double* argmax_x, double* grid_spacing);

enum { NGP_RATE_EXPONENTIAL = 0, NGP_RATE_ALGEBRAIC = 1 };

typedef struct ngp_rate_fit {
  int model; /* NGP_RATE_* */
  double rate;
  double goodness;
  double exponential_rate;
  double exponential_r2;
  double algebraic_order;
  double algebraic_r2;
  size_t points;
} ngp_rate_fit;

NGP_API ngp_status ngp_fit_rate(const double* ts, const double* norms, size_t n, double t_lo,
                                double t_hi, double margin, ngp_rate_fit* out);
/* *found is 1 and *t the bend time if a bend exists, else 0. */
NGP_API ngp_status ngp_detect_bend(const double* ts, const double* argmax_x, size_t n,
                                   double min_jump, int* found, double* t);

#ifdef __cplusplus
}
#endif

#endif /* NGPDE_NGPDE_H */
