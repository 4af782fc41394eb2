#pragma once

#include <cstddef>
#include <limits>

namespace ngpde {

/// Rates of the eight network processes plus the degree m of newly added nodes.
struct ProcessRates {
  double omega_r = 0.0;  // random rewiring
  double omega_p = 0.0;  // preferential rewiring
  double l_d = 0.0;      // deletion of links
  double l_r = 0.0;      // random addition of links
  double l_p = 0.0;      // preferential addition of links
  double n_d = 0.0;      // deletion of nodes
  double n_r = 0.0;      // random addition of nodes
  double n_p = 0.0;      // addition of nodes by preferential attachment
  int m = 0;

  /// Throws ValidationError unless every rate is finite and >= 0 and m >= 0.
  void validate() const;
};

/// g' = -n_d g^2 - b g + c, the closed equation for the first moment G_x(1,t).
struct RiccatiCoefficients {
  double n_d = 0.0;
  double b = 0.0;
  double c = 0.0;

  double rhs(double g) const { return (-n_d * g - b) * g + c; }
};

RiccatiCoefficients derive_riccati(const ProcessRates& rates);

/// x^n for integer n >= 0, with 0^0 = 1.
inline double ipow(double x, int n) {
  double r = 1.0;
  while (n > 0) {
    if (n & 1) r *= x;
    x *= x;
    n >>= 1;
  }
  return r;
}

/// Right-hand side H(a, bb, cc, d) of the localized PDE G_t = H(G_x, G, x, t),
/// with the nonlocal moment already replaced by g_at_d = g(d). The argument
/// order follows the slots (G_x, G, x, t).
double evaluate_h(double a, double bb, double cc, double g_at_d,
                  const ProcessRates& rates);

template <class Moment>
double evaluate_h(double a, double bb, double cc, double d,
                  const ProcessRates& rates, const Moment& g) {
  return evaluate_h(a, bb, cc, g(d), rates);
}

enum class SteadyDegeneracy {
  regular,
  uniform_steady_state,  // g_inf = 0: G converges to 1
  no_steady_state,       // g_inf = infinity
};

/// Coefficients of the steady-state equation
///   0 = (x-1)(x c1 - c2) G'(x) + ((x-1) c3 - c4) G(x) + c4 x^m.
/// For the degenerate tags the c_i are left at zero.
struct SteadyConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
  double g_inf = std::numeric_limits<double>::quiet_NaN();
  int m = 0;
  SteadyDegeneracy degeneracy = SteadyDegeneracy::regular;

  /// Constants given directly (no rates behind them); g_inf stays NaN.
  static SteadyConstants explicit_constants(double c1, double c2, double c3,
                                            double c4, int m);
};

SteadyConstants steady_constants(const ProcessRates& rates);

/// Slope G*'(1) of the regular series solution at x=1: (c3 + c4 m)/(c4 + c2 - c1).
double series_seed_slope(const SteadyConstants& k);

}  // namespace ngpde
