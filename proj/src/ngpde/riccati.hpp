#pragma once

#include <array>
#include <memory>

#include "ngpde/model.hpp"
#include "ngpde/ode.hpp"

namespace ngpde {

/// Unique nonnegative root of -n_d g^2 - b g + c, or +infinity when
/// n_d = b = 0 < c. The all-zero corner returns 0.
double equilibrium(const RiccatiCoefficients& k);

/// t -> g(t), the first moment G_x(1,t). Immutable; cheap to copy.
class MomentTrajectory {
 public:
  double operator()(double t) const { return value(t); }
  double value(double t) const;
  /// g'(t) from the Riccati right-hand side, not by differencing.
  double derivative(double t) const { return coeffs_.rhs(value(t)); }

  double g0() const { return g0_; }
  const RiccatiCoefficients& coefficients() const { return coeffs_; }
  bool is_closed_form() const { return numeric_ == nullptr; }

 private:
  friend MomentTrajectory solve_closed_form(const RiccatiCoefficients&, double);
  friend MomentTrajectory solve_numeric(const RiccatiCoefficients&, double, double,
                                        double);

  enum class Form { constant, logistic, reciprocal, linear_relax, linear_growth };

  RiccatiCoefficients coeffs_;
  double g0_ = 0.0;
  Form form_ = Form::constant;
  // logistic: g = r_plus + (r_plus - r_minus) K e / (1 - K e), e = exp(-lambda t)
  double r_plus_ = 0.0;
  double r_minus_ = 0.0;
  double k_ = 0.0;
  double lambda_ = 0.0;
  std::shared_ptr<const ode::DenseTrajectory<std::array<double, 1>>> numeric_;
};

/// Exact solution of g' = -n_d g^2 - b g + c, g(0) = g0 > 0.
MomentTrajectory solve_closed_form(const RiccatiCoefficients& k, double g0);

/// Adaptive Runge-Kutta solution on [0, t_end]; cross-check for the closed form.
MomentTrajectory solve_numeric(const RiccatiCoefficients& k, double g0, double t_end,
                               double tol);

}  // namespace ngpde
