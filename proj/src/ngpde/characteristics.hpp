#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "ngpde/initial_condition.hpp"
#include "ngpde/model.hpp"
#include "ngpde/ode.hpp"
#include "ngpde/riccati.hpp"

namespace ngpde {

/// Point on a characteristic curve: position x and the values carried along
/// it, p1 = G_x, p2 = G_t, z = G.
struct CharacteristicState {
  double x = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double z = 0.0;
  double t = 0.0;
};

/// q(x0): the characteristic state at t=0 that starts from x0.
CharacteristicState initial_state(double x0, const InitialCondition& h,
                                  const ProcessRates& rates,
                                  const MomentTrajectory& g);

/// (dx/dt, dp1/dt, dp2/dt, dz/dt) of the characteristic system. g'(t) enters
/// through the Riccati right-hand side.
std::array<double, 4> char_rhs(const CharacteristicState& s, const ProcessRates& rates,
                               const MomentTrajectory& g);

struct SolverOptions {
  ode::Tolerances tol{1e-12, 1e-13};
  double roundtrip_tol = 1e-8;  // |x(x0, t) - x_bar| after re-integration
  double clamp_tol = 1e-6;      // x0 further than this outside [-1,1] is an error
  double closure_tol = 1e-6;    // |G_x(1,t) - g(t)| allowed by solve_grid
};

/// Foot of a characteristic at t = 0. Long backward traces end exponentially
/// close to x = 1, where the double x0 keeps few significant digits of 1 - x0;
/// `gap` carries 1 - x0 at full relative precision.
struct CharacteristicFoot {
  double x0 = 1.0;
  double gap = 0.0;  // 1 - x0
};

/// Follows the projected characteristic through (x_bar, t_bar) back to t=0.
/// The result lies in [-1,1]; the forward image of it is checked against
/// x_bar and a NumericalError with diagnostics is raised on mismatch.
CharacteristicFoot trace_back_foot(double x_bar, double t_bar, const ProcessRates& rates,
                                   const MomentTrajectory& g, const SolverOptions& opts = {});
double trace_back(double x_bar, double t_bar, const ProcessRates& rates,
                  const MomentTrajectory& g, const SolverOptions& opts = {});

/// Forward image x(x0, t) of the projected characteristic.
double trace_forward(double x0, double t, const ProcessRates& rates,
                     const MomentTrajectory& g, const SolverOptions& opts = {});
/// Same, starting from a foot with its precise gap.
double trace_forward(const CharacteristicFoot& foot, double t, const ProcessRates& rates,
                     const MomentTrajectory& g, const SolverOptions& opts = {});

struct PointSolution {
  double G = 0.0;
  double Gx = 0.0;
  double Gt = 0.0;
  double x0 = 0.0;
  double residual = 0.0;  // |p2 - H(p1, z, x, t)|
};

PointSolution solve_at(double x_bar, double t_bar, const ProcessRates& rates,
                       const MomentTrajectory& g, const InitialCondition& h,
                       const SolverOptions& opts = {});

/// Values of G and G_x on a tensor grid. Row i of `G`/`Gx` is time ts[i].
struct SolutionField {
  std::vector<double> xs;
  std::vector<double> ts;
  std::vector<std::vector<double>> G;
  std::vector<std::vector<double>> Gx;
  std::vector<double> g;  // Riccati moment at each ts
  double max_closure_error = 0.0;   // max_t |G_x(1,t) - g(t)|
  double max_unit_error = 0.0;      // max_t |G(1,t) - 1|
  double max_pde_residual = 0.0;    // max over grid of |p2 - H|

  double at(std::size_t it, std::size_t ix) const { return G[it][ix]; }
};

/// Solves the nonlocal PDE on xs x ts. xs must be sorted inside [-1,1], ts
/// sorted and nonnegative. The moment is the closed-form Riccati solution
/// started at h'(1).
SolutionField solve_grid(const std::vector<double>& xs, const std::vector<double>& ts,
                         const ProcessRates& rates, const InitialCondition& h,
                         const SolverOptions& opts = {});

/// Uniform grid lo, lo+step, ..., hi (hi included when it is within step/1e6).
std::vector<double> uniform_grid(double lo, double hi, double step);

}  // namespace ngpde
