#include "ngpde/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "ngpde/error.hpp"

namespace ngpde {

namespace {

constexpr double kBoundaryTol = 1e-12;

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  f.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return f;
}

}  // namespace

ConvergenceSeries diff_norms(const std::vector<double>& xs, const std::vector<double>& ts,
                             const std::vector<std::vector<double>>& G,
                             const std::vector<double>& reference) {
  if (xs.empty() || reference.size() != xs.size() || G.size() != ts.size()) {
    throw ValidationError("field and reference grids disagree");
  }
  ConvergenceSeries s;
  s.times = ts;
  for (std::size_t i = 1; i < xs.size(); ++i) s.grid_spacing = std::max(s.grid_spacing, xs[i] - xs[i - 1]);

  for (const auto& row : G) {
    if (row.size() != xs.size()) throw ValidationError("field row length != x-grid length");
    double sup = -1.0, arg = xs.front(), l2 = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double d = std::abs(row[i] - reference[i]);
      if (d > sup) sup = d, arg = xs[i];
      if (i > 0) {
        const double prev = row[i - 1] - reference[i - 1];
        l2 += 0.5 * (xs[i] - xs[i - 1]) * (prev * prev + d * d);
      }
    }
    s.sup_norm.push_back(sup);
    s.l2_norm.push_back(std::sqrt(l2));
    s.argmax_x.push_back(arg);
  }
  return s;
}

ConvergenceSeries diff_norms(const SolutionField& field, const SteadyState& steady) {
  std::vector<double> ref;
  ref.reserve(field.xs.size());
  for (double x : field.xs) ref.push_back(steady(x));
  return diff_norms(field.xs, field.ts, field.G, ref);
}

std::string to_string(RateModel m) {
  return m == RateModel::exponential ? "exponential" : "algebraic";
}

RateFit fit_rate(const std::vector<double>& times, const std::vector<double>& norms,
                 double t_lo, double t_hi, double margin) {
  if (times.size() != norms.size()) throw ValidationError("times and norms differ in length");
  std::vector<double> t, logt, logn;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_lo || times[i] > t_hi) continue;
    if (!(times[i] > 0.0)) throw ValidationError("fit window must exclude t <= 0");
    if (!(norms[i] > 0.0)) {
      throw DomainError("nonpositive norm " + std::to_string(norms[i]) + " at t = " +
                        std::to_string(times[i]));
    }
    t.push_back(times[i]);
    logt.push_back(std::log(times[i]));
    logn.push_back(std::log(norms[i]));
  }
  if (t.size() < 5) throw ValidationError("fit window needs at least 5 points");

  const LineFit e = least_squares(t, logn);
  const LineFit a = least_squares(logt, logn);
  RateFit f;
  f.points = t.size();
  f.exponential_rate = e.slope;
  f.exponential_r2 = e.r2;
  f.algebraic_order = a.slope;
  f.algebraic_r2 = a.r2;
  if (e.r2 >= a.r2 + margin) {
    f.model = RateModel::exponential;
    f.rate = e.slope;
    f.goodness = e.r2;
  } else {
    f.model = RateModel::algebraic;
    f.rate = a.slope;
    f.goodness = a.r2;
  }
  return f;
}

RateFit fit_rate(const ConvergenceSeries& s, double t_lo, double t_hi, NormKind norm,
                 double margin) {
  return fit_rate(s.times, norm == NormKind::sup ? s.sup_norm : s.l2_norm, t_lo, t_hi, margin);
}

std::optional<double> detect_bend(const std::vector<double>& times,
                                  const std::vector<double>& argmax_x, double min_jump) {
  if (times.size() != argmax_x.size()) throw ValidationError("times and argmax differ in length");
  if (times.size() < 3) throw ValidationError("bend detection needs at least 3 points");
  for (std::size_t i = 1; i < times.size(); ++i) {
    const bool was_left = std::abs(argmax_x[i - 1] + 1.0) <= kBoundaryTol;
    const bool interior = argmax_x[i] > -1.0 + kBoundaryTol && argmax_x[i] < 1.0 - kBoundaryTol;
    if (was_left && interior && argmax_x[i] - argmax_x[i - 1] >= min_jump) return times[i];
  }
  return std::nullopt;
}

std::optional<double> detect_bend(const ConvergenceSeries& s, double min_jump) {
  return detect_bend(s.times, s.argmax_x, min_jump);
}

}  // namespace ngpde
