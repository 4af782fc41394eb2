#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ngpde/model.hpp"

namespace ngpde {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Cells of the existence table for
///   0 = (x-1)(x c1 - c2) G' + ((x-1) c3 - c4) G + c4 x^m   on [-1,1].
enum class SteadyCell {
  uniform_limit,            // g_inf = 0, no equation to solve: G* = 1
  all_constants_zero,       // every continuous function solves it
  constants_only,           // c3 = c4 = 0: only constants

  // c4 = 0, c3 > 0
  c4_zero_c1_c2_zero,       // only G = 0
  c4_zero_c1_zero_lt_c2,    // one-parameter family, unique with G(1) = 1
  c4_zero_c1_lt_c2,         // one-parameter family, unique with G(1) = 1
  c4_zero_c1_eq_c2,         // only G = 0
  c4_zero_c2_zero_lt_c1,    // only G = 0
  c4_zero_c2_lt_c1,         // only G = 0

  // c4 > 0
  c4_pos_c1_c2_zero_c3_zero,  // G = x^m (the constant 1 when m = 0)
  c4_pos_c1_c2_zero_c3_pos,   // unique, algebraic
  c4_pos_c1_zero_lt_c2,       // unique, single singular point x = 1
  c4_pos_c1_lt_c2,            // unique, single singular point x = 1
  c4_pos_c1_eq_c2,            // unique, double singular point x = 1
  c4_pos_c2_zero_lt_c1,       // unique, singular points {0, 1}
  c4_pos_c2_lt_c1,            // unique, singular points {c2/c1, 1}
};

std::string to_string(SteadyCell cell);

struct SteadyCase {
  SteadyCell cell = SteadyCell::all_constants_zero;
  std::vector<double> singular_points;  // ascending, subset of {c2/c1, 1}
};

/// Sign-pattern classification; zero/equality ties use tolerance 1e-12.
/// Requires regular constants.
SteadyCase classify(const SteadyConstants& k);

/// Continuous solution G* on [-1,1]. Evaluation is thread-safe.
class SteadyState {
 public:
  class Impl;

  double operator()(double x) const;
  double value(double x) const { return (*this)(x); }

  const SteadyCase& steady_case() const { return case_; }
  std::optional<double> value_at_one() const { return value_at_one_; }
  std::optional<double> value_at_ratio() const { return value_at_ratio_; }
  /// G*'(1); NaN when the slope does not exist (two singular points with
  /// c4/(c1-c2) < 1).
  double slope_at_one() const { return slope_at_one_; }
  /// False when G*'(1) is zero or undefined: then G* need not be a steady
  /// state of the PDE.
  bool certified() const { return certified_; }

 private:
  friend SteadyState build_two_singularity(const SteadyConstants&, double);
  friend SteadyState build_series_seeded(const SteadyConstants&);
  friend SteadyState build_steady_state(const SteadyConstants&);
  friend SteadyState constant_steady_state(double, SteadyCase);

  std::shared_ptr<const Impl> impl_;
  SteadyCase case_;
  std::optional<double> value_at_one_;
  std::optional<double> value_at_ratio_;
  double slope_at_one_ = 0.0;
  bool certified_ = false;
};

/// Parameters of the two-singularity construction.
struct TwoSingularityParameters {
  double ratio;  // c2/c1
  double alpha;  // c4/(c1-c2) > 0
  double beta;   // (-c1 c3 + c2 c3 - c1 c4)/((c1-c2) c1) < 0
};
TwoSingularityParameters two_singularity_parameters(const SteadyConstants& k);

/// Case 0 <= c2 < c1, c4 > 0. The solution is assembled piecewise by
/// variation of constants on [-1, c2/c1) and (c2/c1, 1), continuous at both
/// singular points. `anchor` in (c2/c1, 1) is the point where the right piece
/// is pinned; the result does not depend on it. NaN picks the midpoint.
SteadyState build_two_singularity(const SteadyConstants& k, double anchor = kNaN);

/// Cases with c4 > 0 where x = 1 is the only singular point in [-1,1]
/// (c1 = 0 < c2, or c2 >= c1 > 0), and the algebraic case c1 = c2 = 0.
/// Starts from the regular series at x = 1 and integrates towards -1.
SteadyState build_series_seeded(const SteadyConstants& k);

/// Dispatches on classify(); NoSteadyStateError for the no_steady_state tag
/// and the constant 1 for uniform_steady_state.
SteadyState build_steady_state(const SteadyConstants& k);

SteadyState constant_steady_state(double value, SteadyCase c);

/// (x-1)(x c1 - c2) G'(x) + ((x-1) c3 - c4) G(x) + c4 x^m with G' from a
/// central difference of step `h`.
double residual(const SteadyState& s, const SteadyConstants& k, double x,
                double h = 1e-5);

/// `count` equally spaced points of [-1,1] with delta-neighbourhoods of the
/// singular points removed.
std::vector<double> residual_grid(const SteadyCase& c, int count, double delta);

}  // namespace ngpde
