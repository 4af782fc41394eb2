#pragma once

// Thin layer over Boost.Odeint: adaptive Dormand-Prince 5(4) integration with
// error translation, plus a queryable trajectory built from the accepted steps.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "ngpde/error.hpp"

namespace ngpde::ode {

struct Tolerances {
  double rtol = 1e-9;
  double atol = 1e-12;
};

namespace detail {

template <class State>
bool all_finite(const State& y) {
  return std::all_of(std::begin(y), std::end(y),
                     [](double v) { return std::isfinite(v); });
}

}  // namespace detail

/// Integrates `sys` from t0 to t1 (either direction) in place. The observer
/// sees every accepted step, including the initial and the final state.
template <class State, class System, class Observer>
std::size_t integrate(System&& sys, State& y, double t0, double t1,
                      const Tolerances& tol, Observer&& observer) {
  namespace odeint = boost::numeric::odeint;
  if (t0 == t1) {
    observer(y, t0);
    return 0;
  }
  auto stepper = odeint::make_controlled(tol.atol, tol.rtol,
                                         odeint::runge_kutta_dopri5<State>());
  const double dt = (t1 - t0) * 1e-3;
  std::size_t steps = 0;
  try {
    steps = odeint::integrate_adaptive(stepper, std::forward<System>(sys), y, t0,
                                       t1, dt, std::forward<Observer>(observer));
  } catch (const odeint::step_adjustment_error& e) {
    throw NumericalError(std::string("step size underflow: ") + e.what());
  }
  if (!detail::all_finite(y)) {
    throw NumericalError("integration produced a non-finite state at t=" +
                         std::to_string(t1));
  }
  return steps;
}

template <class State, class System>
std::size_t integrate(System&& sys, State& y, double t0, double t1,
                      const Tolerances& tol) {
  return integrate(std::forward<System>(sys), y, t0, t1, tol,
                   [](const State&, double) {});
}

/// Solution of an ODE over [t0, t1] that can be sampled anywhere. Accepted
/// step nodes are kept; a query re-integrates from the nearest preceding node
/// (in integration direction) so sampled values carry the integrator's local
/// accuracy rather than an interpolation error.
template <class State>
class DenseTrajectory {
 public:
  using System = std::function<void(const State&, State&, double)>;

  DenseTrajectory(System sys, State y0, double t0, double t1, Tolerances tol)
      : sys_(std::move(sys)), tol_(tol), forward_(t1 >= t0) {
    State y = y0;
    integrate(sys_, y, t0, t1, tol_, [this](const State& s, double t) {
      times_.push_back(t);
      states_.push_back(s);
    });
  }

  State at(double t) const {
    const std::size_t i = node_before(t);
    State y = states_[i];
    if (t != times_[i]) integrate(sys_, y, times_[i], t, tol_);
    return y;
  }

  double start() const { return times_.front(); }
  double end() const { return times_.back(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<State>& states() const { return states_; }

 private:
  std::size_t node_before(double t) const {
    if (forward_) {
      auto it = std::upper_bound(times_.begin(), times_.end(), t);
      return it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
    }
    auto it = std::upper_bound(times_.begin(), times_.end(), t, std::greater<>());
    return it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
  }

  System sys_;
  Tolerances tol_;
  bool forward_;
  std::vector<double> times_;
  std::vector<State> states_;
};

}  // namespace ngpde::ode
