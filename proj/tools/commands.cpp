#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "csv.hpp"

namespace cli {

namespace fs = std::filesystem;

namespace {

void check(ngp_status s, const char* what) {
  if (s != NGP_OK) throw ApiError(s, std::string(what) + ": " + ngp_last_error());
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Initial = std::unique_ptr<ngp_initial, Deleter<ngp_initial, ngp_initial_free>>;
using Moment = std::unique_ptr<ngp_moment, Deleter<ngp_moment, ngp_moment_free>>;
using Field = std::unique_ptr<ngp_field, Deleter<ngp_field, ngp_field_free>>;
using Steady = std::unique_ptr<ngp_steady, Deleter<ngp_steady, ngp_steady_free>>;
using Ode = std::unique_ptr<ngp_ode, Deleter<ngp_ode, ngp_ode_free>>;
using Mc = std::unique_ptr<ngp_mc, Deleter<ngp_mc, ngp_mc_free>>;

fs::path out_path(const ExperimentConfig& c, const std::string& name) {
  fs::create_directories(c.out_dir);
  return fs::path(c.out_dir) / name;
}

// Builds h and rejects it unless h(1) = 1.
Initial make_initial(const InitialSpec& s) {
  ngp_initial* h = nullptr;
  if (s.kind == "polynomial") {
    check(ngp_initial_polynomial(s.coefficients.data(), s.coefficients.size(), &h), s.name.c_str());
  } else if (s.kind == "geometric") {
    check(ngp_initial_geometric(s.a, s.ratio, &h), s.name.c_str());
  } else {
    check(ngp_initial_explicit(s.head.data(), s.head.size(), s.tail_a, s.tail_ratio, &h),
          s.name.c_str());
  }
  Initial out(h);
  double one = 0.0, slope = 0.0;
  check(ngp_initial_value(h, 1.0, &one, &slope), s.name.c_str());
  if (!(std::abs(one - 1.0) <= 1e-12)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "[" << s.name << "] h(1) = " << one << ", must be 1";
    throw ConfigError(msg.str());
  }
  return out;
}

const InitialSpec& first_initial(const ExperimentConfig& c) {
  if (c.initials.empty()) throw ConfigError("config has no [initial] section");
  return c.initials.front();
}

std::vector<double> x_grid(const ExperimentConfig& c) {
  return grid(c.grid.x_min, c.grid.x_max, c.grid.x_step);
}
std::vector<double> t_grid(const ExperimentConfig& c) { return grid(0.0, c.grid.t_max, c.grid.t_step); }

struct FieldData {
  std::vector<double> G, Gx, g;  // row-major [t][x]
  double closure = 0.0, unit = 0.0, residual = 0.0;
};

FieldData solve(const ExperimentConfig& c, const ngp_initial* h, const std::vector<double>& xs,
                const std::vector<double>& ts) {
  ngp_field* raw = nullptr;
  check(ngp_solve_grid(&c.require_rates(), h, xs.data(), xs.size(), ts.data(), ts.size(),
                       &c.solver, &raw),
        "solve");
  Field f(raw);
  FieldData d;
  d.G.resize(xs.size() * ts.size());
  d.Gx.resize(d.G.size());
  d.g.resize(ts.size());
  check(ngp_field_values(f.get(), d.G.data(), d.Gx.data(), d.g.data()), "solve");
  check(ngp_field_diagnostics(f.get(), &d.closure, &d.unit, &d.residual), "solve");
  return d;
}

Steady make_steady(const ExperimentConfig& c) {
  ngp_steady* raw = nullptr;
  if (c.steady.constants) {
    check(ngp_steady_build_constants(c.steady.constants->data(), c.steady.m, &raw), "steady");
  } else {
    check(ngp_steady_build(&c.require_rates(), &raw), "steady");
  }
  return Steady(raw);
}

Ode integrate_oracle(const ExperimentConfig& c, std::vector<double> p0, double t_end) {
  if (p0.size() < c.oracle.kmax + 1) p0.resize(c.oracle.kmax + 1, 0.0);
  ngp_ode* raw = nullptr;
  check(ngp_ode_integrate(&c.require_rates(), p0.data(), p0.size(), t_end, c.oracle.rtol,
                          c.oracle.atol, c.oracle.mass_tol, &raw),
        "ode");
  return Ode(raw);
}

double horner(const std::vector<double>& p, double x) {
  double s = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) s = s * x + *it;
  return s;
}

double first_moment(const std::vector<double>& p) {
  double s = 0.0;
  for (std::size_t k = 1; k < p.size(); ++k) s += static_cast<double>(k) * p[k];
  return s;
}

std::string fmt(const char* key, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s=%.17g", key, v);
  return buf;
}

}  // namespace

void cmd_solve(const ExperimentConfig& c) {
  const Initial h = make_initial(first_initial(c));
  const auto xs = x_grid(c);
  const auto ts = t_grid(c);
  const FieldData d = solve(c, h.get(), xs, ts);

  CsvWriter field(out_path(c, "field.csv"), c.hash, {"t", "x", "G", "Gx"},
                  {fmt("max_closure_error", d.closure), fmt("max_unit_error", d.unit),
                   fmt("max_pde_residual", d.residual)});
  for (std::size_t it = 0; it < ts.size(); ++it)
    for (std::size_t ix = 0; ix < xs.size(); ++ix)
      field.row({ts[it], xs[ix], d.G[it * xs.size() + ix], d.Gx[it * xs.size() + ix]});

  CsvWriter moment(out_path(c, "gmoment.csv"), c.hash, {"t", "g"});
  for (std::size_t it = 0; it < ts.size(); ++it) moment.row({ts[it], d.g[it]});

  std::printf("solve: %zu x %zu grid, max |G(1,t)-1| = %.3g, max |G_x(1,t)-g| = %.3g\n",
              ts.size(), xs.size(), d.unit, d.closure);
}

void cmd_steady(const ExperimentConfig& c) {
  const Steady s = make_steady(c);
  const auto xs = x_grid(c);
  std::vector<double> G(xs.size()), res(xs.size());
  check(ngp_steady_eval(s.get(), xs.data(), xs.size(), G.data()), "steady");
  check(ngp_steady_residual(s.get(), xs.data(), xs.size(), c.steady.residual_step, res.data()),
        "steady");
  ngp_steady_info info{};
  check(ngp_steady_get_info(s.get(), &info), "steady");

  CsvWriter out(out_path(c, "steady.csv"), c.hash, {"x", "G", "residual"},
                {std::string("cell=") + info.cell, fmt("certified", info.certified),
                 fmt("slope_at_one", info.slope_at_one)});
  for (std::size_t i = 0; i < xs.size(); ++i) out.row({xs[i], G[i], res[i]});

  std::printf("steady: cell %s, G*'(1) = %.17g, %s\n", info.cell, info.slope_at_one,
              info.certified ? "certified" : "not certified as a PDE steady state");
}

void cmd_ode(const ExperimentConfig& c) {
  const ngp_rates& rates = c.require_rates();
  const Initial h = make_initial(first_initial(c));
  std::vector<double> p0(c.oracle.kmax + 1);
  check(ngp_initial_coefficients(h.get(), c.oracle.kmax, p0.data()), "ode");
  const auto ts = t_grid(c);
  const Ode ode = integrate_oracle(c, p0, ts.back());

  double slope = 0.0;
  check(ngp_initial_value(h.get(), 1.0, nullptr, &slope), "ode");
  ngp_moment* raw = nullptr;
  check(ngp_moment_closed_form(&rates, slope, &raw), "ode");
  const Moment g(raw);

  double leak = 0.0, lowest = 0.0;
  check(ngp_ode_diagnostics(ode.get(), &leak, &lowest), "ode");
  std::vector<std::string> cols{"t", "mass", "first_moment", "g"};
  for (std::size_t k = 0; k < p0.size(); ++k) cols.push_back("p" + std::to_string(k));
  CsvWriter out(out_path(c, "ode.csv"), c.hash, cols,
                {fmt("max_leakage", leak), fmt("min_probability", lowest)});
  std::vector<double> p(p0.size());
  for (double t : ts) {
    check(ngp_ode_at(ode.get(), t, p.data()), "ode");
    double gt = 0.0;
    check(ngp_moment_value(g.get(), t, &gt), "ode");
    std::vector<double> row{t, std::accumulate(p.begin(), p.end(), 0.0), first_moment(p), gt};
    row.insert(row.end(), p.begin(), p.end());
    out.row(row);
  }
  std::printf("ode: kmax %zu, max mass leakage %.3g\n", c.oracle.kmax, leak);
}

void cmd_mc(const ExperimentConfig& c) {
  ngp_mc_config cfg{};
  cfg.rates = c.require_rates();
  cfg.nodes = c.mc.nodes;
  cfg.graph = c.mc.graph;
  cfg.graph_param = c.mc.graph_param;
  cfg.replicas = c.mc.replicas;
  cfg.seed = c.mc.seed;
  cfg.kmax = c.mc.kmax;
  cfg.threads = c.mc.threads;
  const std::vector<double> ts = c.mc.times.empty() ? t_grid(c) : c.mc.times;

  ngp_mc* raw = nullptr;
  check(ngp_mc_run(&cfg, ts.data(), ts.size(), &raw), "mc");
  const Mc mc(raw);
  const std::size_t w = ngp_mc_width(mc.get());
  std::vector<double> mean(ts.size() * w), err(ts.size() * w), initial(w);
  check(ngp_mc_values(mc.get(), mean.data(), err.data(), initial.data()), "mc");
  std::size_t absorbed = 0, skipped = 0, events = 0;
  check(ngp_mc_stats(mc.get(), &absorbed, &skipped, &events), "mc");

  // Reference: the master equation started from the ensemble-mean initial distribution.
  std::vector<double> p0 = initial;
  const std::size_t width = std::max(w, c.oracle.kmax + 1);
  p0.resize(width, 0.0);
  const Ode ode = integrate_oracle(c, p0, ts.back());

  CsvWriter out(out_path(c, "mc.csv"), c.hash,
                {"t", "k", "mean", "stderr", "ode", "tv", "first_moment", "ode_first_moment"},
                {fmt("absorbed_replicas", static_cast<double>(absorbed)),
                 fmt("skipped_events", static_cast<double>(skipped)),
                 fmt("events", static_cast<double>(events))});
  std::vector<double> q(width);
  double worst = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    check(ngp_ode_at(ode.get(), ts[i], q.data()), "mc");
    const double* m = mean.data() + i * w;
    double tv = 0.0;
    check(ngp_total_variation(m, w, q.data(), q.size(), &tv), "mc");
    worst = std::max(worst, tv);
    const std::vector<double> mv(m, m + w);
    const double mu = first_moment(mv), mu_ode = first_moment(q);
    for (std::size_t k = 0; k < width; ++k) {
      out.row({ts[i], static_cast<double>(k), k < w ? m[k] : 0.0, k < w ? err[i * w + k] : 0.0,
               q[k], tv, mu, mu_ode});
    }
  }
  if (absorbed > 0) {
    std::fprintf(stderr, "mc: warning: %zu replica(s) reached an absorbing state\n", absorbed);
  }
  std::printf("mc: %zu replicas x %zu nodes, %zu events, max TV to master equation %.4g\n",
              c.mc.replicas, c.mc.nodes, events, worst);
}

void cmd_compare(const ExperimentConfig& c) {
  if (c.initials.empty()) throw ConfigError("config has no [initial] section");
  const auto xs = x_grid(c);
  const auto ts = t_grid(c);
  const Steady s = make_steady(c);
  std::vector<double> ref(xs.size());
  check(ngp_steady_eval(s.get(), xs.data(), xs.size(), ref.data()), "steady");
  ngp_steady_info info{};
  check(ngp_steady_get_info(s.get(), &info), "steady");

  nlohmann::json report;
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(c.hash));
  report["config_hash"] = hash;
  report["steady"] = {{"cell", info.cell},
                      {"certified", info.certified != 0},
                      {"slope_at_one", std::isfinite(info.slope_at_one)
                                           ? nlohmann::json(info.slope_at_one)
                                           : nlohmann::json(nullptr)}};
  report["window"] = {c.compare.t_lo, c.compare.t_hi};
  report["norm"] = c.compare.norm;
  report["runs"] = nlohmann::json::array();

  CsvWriter norms(out_path(c, "norms.csv"), c.hash, {"initial", "t", "sup", "l2", "argmax_x"});
  for (const InitialSpec& spec : c.initials) {
    const Initial h = make_initial(spec);
    const FieldData d = solve(c, h.get(), xs, ts);

    std::vector<double> sup(ts.size()), l2(ts.size()), arg(ts.size());
    double spacing = 0.0;
    check(ngp_diff_norms(xs.data(), xs.size(), ts.data(), ts.size(), d.G.data(), ref.data(),
                         sup.data(), l2.data(), arg.data(), &spacing),
          "norms");
    for (std::size_t i = 0; i < ts.size(); ++i) norms.row({ts[i], sup[i], l2[i], arg[i]}, spec.name);

    ngp_rate_fit fit{};
    check(ngp_fit_rate(ts.data(), c.compare.norm == "sup" ? sup.data() : l2.data(), ts.size(),
                       c.compare.t_lo, c.compare.t_hi, c.compare.margin, &fit),
          "fit");
    int found = 0;
    double bend = 0.0;
    check(ngp_detect_bend(ts.data(), arg.data(), ts.size(), c.compare.min_jump, &found, &bend),
          "bend");

    nlohmann::json run = {
        {"initial", spec.name},
        {"model", fit.model == NGP_RATE_EXPONENTIAL ? "exponential" : "algebraic"},
        {"rate", fit.rate},
        {"goodness", fit.goodness},
        {"exponential_rate", fit.exponential_rate},
        {"exponential_r2", fit.exponential_r2},
        {"algebraic_order", fit.algebraic_order},
        {"algebraic_r2", fit.algebraic_r2},
        {"points", fit.points},
        {"bend_time", found ? nlohmann::json(bend) : nlohmann::json(nullptr)},
        {"grid_spacing", spacing},
        {"max_closure_error", d.closure},
    };

    if (c.compare.oracle) {
      // The oracle is a cross-check; a truncation failure is reported, not fatal.
      try {
        std::vector<double> p0(c.oracle.kmax + 1);
        check(ngp_initial_coefficients(h.get(), c.oracle.kmax, p0.data()), "oracle");
        const Ode ode = integrate_oracle(c, p0, ts.back());
        std::vector<double> p(p0.size());
        double worst = 0.0;
        for (std::size_t it = 0; it < ts.size(); ++it) {
          check(ngp_ode_at(ode.get(), ts[it], p.data()), "oracle");
          for (std::size_t ix = 0; ix < xs.size(); ++ix) {
            worst = std::max(worst, std::abs(d.G[it * xs.size() + ix] - horner(p, xs[ix])));
          }
        }
        run["oracle_max_deviation"] = worst;
      } catch (const ApiError& e) {
        run["oracle_error"] = e.what();
        std::fprintf(stderr, "compare [%s]: warning: %s\n", spec.name.c_str(), e.what());
      }
    }
    report["runs"].push_back(run);
    std::printf("compare [%s]: %s, rate %.6g, R^2 %.4f%s\n", spec.name.c_str(),
                fit.model == NGP_RATE_EXPONENTIAL ? "exponential" : "algebraic", fit.rate,
                fit.goodness, found ? ", bend detected" : "");
  }

  std::ofstream json(out_path(c, "fit.json"));
  json << report.dump(2) << '\n';
}

}  // namespace cli
