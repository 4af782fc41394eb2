#include "ngpde/riccati.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ngpde/error.hpp"

namespace ngpde {

namespace {

void check_g0(double g0) {
  if (!(g0 > 0.0) || !std::isfinite(g0)) {
    throw DomainError("initial moment g0 = h'(1) must be positive, got " +
                      std::to_string(g0));
  }
}

// Larger root of n_d g^2 + b g - c, written without cancellation.
double positive_root(const RiccatiCoefficients& k, double sq) {
  return k.b + sq > 0.0 ? 2.0 * k.c / (k.b + sq) : 0.0;
}

}  // namespace

double equilibrium(const RiccatiCoefficients& k) {
  if (k.n_d > 0.0) {
    const double sq = std::sqrt(k.b * k.b + 4.0 * k.n_d * k.c);
    return positive_root(k, sq);
  }
  if (k.b > 0.0) return k.c / k.b;
  if (k.c > 0.0) return std::numeric_limits<double>::infinity();
  return 0.0;
}

MomentTrajectory solve_closed_form(const RiccatiCoefficients& k, double g0) {
  check_g0(g0);
  MomentTrajectory g;
  g.coeffs_ = k;
  g.g0_ = g0;
  if (k.n_d > 0.0) {
    const double sq = std::sqrt(k.b * k.b + 4.0 * k.n_d * k.c);
    if (sq == 0.0) {
      g.form_ = MomentTrajectory::Form::reciprocal;
      return g;
    }
    g.r_plus_ = positive_root(k, sq);
    g.r_minus_ = -(k.b + sq) / (2.0 * k.n_d);
    if (std::abs(g0 - g.r_plus_) <= 1e-12) {
      g.form_ = MomentTrajectory::Form::constant;
      g.g0_ = g.r_plus_;
      return g;
    }
    g.form_ = MomentTrajectory::Form::logistic;
    g.k_ = (g0 - g.r_plus_) / (g0 - g.r_minus_);
    g.lambda_ = sq;
    return g;
  }
  if (k.b > 0.0) {
    g.form_ = MomentTrajectory::Form::linear_relax;
    return g;
  }
  g.form_ = k.c > 0.0 ? MomentTrajectory::Form::linear_growth
                      : MomentTrajectory::Form::constant;
  return g;
}

MomentTrajectory solve_numeric(const RiccatiCoefficients& k, double g0, double t_end,
                               double tol) {
  check_g0(g0);
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  if (!(t_end >= 0.0)) throw ValidationError("t_end must be nonnegative");
  using State = std::array<double, 1>;
  MomentTrajectory g;
  g.coeffs_ = k;
  g.g0_ = g0;
  auto sys = [k](const State& y, State& dy, double) { dy[0] = k.rhs(y[0]); };
  g.numeric_ = std::make_shared<const ode::DenseTrajectory<State>>(
      sys, State{g0}, 0.0, t_end, ode::Tolerances{tol * 1e-2, tol * 1e-2});
  return g;
}

double MomentTrajectory::value(double t) const {
  if (numeric_) return numeric_->at(t)[0];
  switch (form_) {
    case Form::constant:
      return g0_;
    case Form::logistic: {
      const double ke = k_ * std::exp(-lambda_ * t);
      return r_plus_ + (r_plus_ - r_minus_) * ke / (1.0 - ke);
    }
    case Form::reciprocal:
      return g0_ / (1.0 + coeffs_.n_d * g0_ * t);
    case Form::linear_relax: {
      const double eq = coeffs_.c / coeffs_.b;
      return eq + (g0_ - eq) * std::exp(-coeffs_.b * t);
    }
    case Form::linear_growth:
      return g0_ + coeffs_.c * t;
  }
  return g0_;
}

}  // namespace ngpde
