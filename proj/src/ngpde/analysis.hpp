#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ngpde/characteristics.hpp"
#include "ngpde/steady.hpp"

namespace ngpde {

/// Distance of G(., t) from the steady state, one entry per time.
struct ConvergenceSeries {
  std::vector<double> times;
  std::vector<double> sup_norm;
  std::vector<double> l2_norm;   // trapezoidal on the x-grid
  std::vector<double> argmax_x;  // first grid point attaining the sup
  double grid_spacing = 0.0;     // largest x-step, bounds the L2 accuracy
};

/// G[t][x] on the grid xs x ts against reference values on xs.
ConvergenceSeries diff_norms(const std::vector<double>& xs, const std::vector<double>& ts,
                             const std::vector<std::vector<double>>& G,
                             const std::vector<double>& reference);
ConvergenceSeries diff_norms(const SolutionField& field, const SteadyState& steady);

enum class RateModel { exponential, algebraic };
std::string to_string(RateModel m);

enum class NormKind { sup, l2 };

struct RateFit {
  RateModel model = RateModel::exponential;
  double rate = 0.0;      // slope of the chosen model
  double goodness = 0.0;  // R^2 of the chosen model
  double exponential_rate = 0.0;  // d log|.| / dt
  double exponential_r2 = 0.0;
  double algebraic_order = 0.0;   // d log|.| / d log t
  double algebraic_r2 = 0.0;
  std::size_t points = 0;
};

/// Least squares of log-norm against t and against log t over the samples
/// with t in [t_lo, t_hi]. Exponential wins iff its R^2 beats the algebraic
/// one by at least `margin`. Needs >= 5 points with t > 0; throws
/// DomainError on nonpositive norms.
RateFit fit_rate(const ConvergenceSeries& s, double t_lo, double t_hi,
                 NormKind norm = NormKind::sup, double margin = 0.01);
RateFit fit_rate(const std::vector<double>& times, const std::vector<double>& norms,
                 double t_lo, double t_hi, double margin = 0.01);

/// First time at which argmax_x leaves the left boundary x = -1 for an
/// interior point at least `min_jump` away in one sample step.
std::optional<double> detect_bend(const ConvergenceSeries& s, double min_jump = 0.1);
std::optional<double> detect_bend(const std::vector<double>& times,
                                  const std::vector<double>& argmax_x, double min_jump = 0.1);

}  // namespace ngpde
