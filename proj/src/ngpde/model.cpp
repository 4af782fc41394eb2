#include "ngpde/model.hpp"

#include <cmath>
#include <string>

#include "ngpde/error.hpp"
#include "ngpde/riccati.hpp"

namespace ngpde {

void ProcessRates::validate() const {
  const std::pair<const char*, double> fields[] = {
      {"omega_r", omega_r}, {"omega_p", omega_p}, {"l_d", l_d}, {"l_r", l_r},
      {"l_p", l_p},         {"n_d", n_d},         {"n_r", n_r}, {"n_p", n_p}};
  for (const auto& [name, v] : fields) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ValidationError(std::string("rate ") + name +
                            " must be finite and nonnegative, got " +
                            std::to_string(v));
    }
  }
  if (m < 0) throw ValidationError("m must be a nonnegative integer");
}

RiccatiCoefficients derive_riccati(const ProcessRates& r) {
  return {r.n_d, r.l_d + r.n_p + r.n_r,
          2.0 * (r.l_p + r.l_r + r.m * (r.n_p + r.n_r))};
}

double evaluate_h(double a, double bb, double cc, double g, const ProcessRates& r) {
  if (!(g > 0.0)) {
    throw DomainError("H requires g(d) > 0, got " + std::to_string(g));
  }
  const double drift = cc * (r.omega_p + (2.0 * r.l_p + r.n_p * r.m) / g) -
                       r.omega_r - r.omega_p - r.l_d - r.n_d * g;
  const double growth = (cc - 1.0) * (r.omega_r * g + 2.0 * r.l_r + r.n_r * r.m) -
                        r.n_r - r.n_p;
  return (cc - 1.0) * drift * a + growth * bb + (r.n_r + r.n_p) * ipow(cc, r.m);
}

SteadyConstants SteadyConstants::explicit_constants(double c1, double c2, double c3,
                                                    double c4, int m) {
  for (double c : {c1, c2, c3, c4}) {
    if (!std::isfinite(c) || c < 0.0) {
      throw ValidationError("steady constants must be finite and nonnegative");
    }
  }
  if (m < 0) throw ValidationError("m must be a nonnegative integer");
  SteadyConstants k;
  k.c1 = c1;
  k.c2 = c2;
  k.c3 = c3;
  k.c4 = c4;
  k.m = m;
  return k;
}

SteadyConstants steady_constants(const ProcessRates& r) {
  r.validate();
  SteadyConstants k;
  k.m = r.m;
  const double g = equilibrium(derive_riccati(r));
  k.g_inf = g;
  if (std::isinf(g)) {
    k.degeneracy = SteadyDegeneracy::no_steady_state;
    return k;
  }
  if (g == 0.0) {
    k.degeneracy = SteadyDegeneracy::uniform_steady_state;
    return k;
  }
  k.c1 = r.omega_p + (2.0 * r.l_p + r.n_p * r.m) / g;
  k.c2 = r.omega_r + r.omega_p + r.l_d + r.n_d * g;
  k.c3 = r.omega_r * g + 2.0 * r.l_r + r.n_r * r.m;
  k.c4 = r.n_r + r.n_p;
  return k;
}

double series_seed_slope(const SteadyConstants& k) {
  return (k.c3 + k.c4 * k.m) / (k.c4 + k.c2 - k.c1);
}

}  // namespace ngpde
