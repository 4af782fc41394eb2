#include "ngpde/degree_ode.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ngpde/error.hpp"

namespace ngpde {

double TruncatedDistribution::mass() const {
  return std::accumulate(p.begin(), p.end(), 0.0);
}

double gf_eval(const TruncatedDistribution& d, double x) {
  double s = 0.0;
  for (auto it = d.p.rbegin(); it != d.p.rend(); ++it) s = s * x + *it;
  return s;
}

double first_moment(const TruncatedDistribution& d) {
  double s = 0.0;
  for (std::size_t k = 1; k < d.p.size(); ++k) s += static_cast<double>(k) * d.p[k];
  return s;
}

void master_rhs(const std::vector<double>& p, std::vector<double>& dp,
                const ProcessRates& r) {
  const std::size_t n = p.size();
  dp.assign(n, 0.0);
  if (n == 0) return;

  double mu = 0.0;
  for (std::size_t k = 1; k < n; ++k) mu += static_cast<double>(k) * p[k];
  const bool preferential = r.l_p > 0.0 || r.n_p > 0.0;
  if (preferential && !(mu > 0.0)) {
    throw DomainError("preferential processes need a positive first moment");
  }
  const double inv_mu = preferential ? 1.0 / mu : 0.0;
  const auto m = static_cast<std::size_t>(r.m);
  const double md = static_cast<double>(r.m);

  for (std::size_t k = 0; k < n; ++k) {
    const double kd = static_cast<double>(k);
    const double pk = p[k];
    const double prev = k > 0 ? p[k - 1] : 0.0;
    const double next = k + 1 < n ? p[k + 1] : 0.0;
    const double delta = k == m ? 1.0 : 0.0;

    const double loss = (kd + 1.0) * next - kd * pk;  // a degree-k node loses an edge
    const double gain_pref = (kd - 1.0) * prev - kd * pk;
    const double gain_rand = prev - pk;

    double d = r.omega_r * (loss + mu * gain_rand);
    d += r.omega_p * (loss + gain_pref);
    d += r.l_d * loss;
    d += 2.0 * r.l_r * gain_rand;
    d += 2.0 * r.l_p * inv_mu * gain_pref;
    d += r.n_d * mu * loss;
    d += r.n_r * (md * gain_rand - pk + delta);
    d += r.n_p * (md * inv_mu * gain_pref - pk + delta);
    dp[k] = d;
  }
}

std::vector<double> master_rhs(const TruncatedDistribution& d, const ProcessRates& r) {
  std::vector<double> dp;
  master_rhs(d.p, dp, r);
  return dp;
}

TruncatedDistribution MasterTrajectory::at(double t) const {
  return {dense_->at(t), t};
}

MasterTrajectory integrate(const TruncatedDistribution& p0, const ProcessRates& rates,
                           double t_end, const OracleOptions& opts) {
  rates.validate();
  if (!(t_end >= 0.0)) throw ValidationError("t_end must be nonnegative");
  if (p0.p.size() < static_cast<std::size_t>(rates.m) + 3) {
    throw ValidationError("kmax must be at least m + 2");
  }
  for (double v : p0.p) {
    if (!(v >= -opts.negative_tol && v <= 1.0 + opts.negative_tol)) {
      throw ValidationError("initial probabilities must lie in [0,1]");
    }
  }

  auto sys = [rates](const std::vector<double>& p, std::vector<double>& dp, double) {
    master_rhs(p, dp, rates);
  };

  MasterTrajectory traj;
  traj.dense_ = std::make_shared<const ode::DenseTrajectory<std::vector<double>>>(
      sys, p0.p, p0.t, t_end, opts.tol);

  const double mass0 = p0.mass();
  double leak = 0.0;
  double lowest = 0.0;
  for (const auto& p : traj.dense_->states()) {
    leak = std::max(leak, std::abs(std::accumulate(p.begin(), p.end(), 0.0) - mass0));
    lowest = std::min(lowest, *std::min_element(p.begin(), p.end()));
  }
  traj.max_leakage_ = leak;
  traj.min_probability_ = lowest;

  if (lowest < -opts.negative_tol) {
    throw NumericalError("master equation produced p_k = " + std::to_string(lowest) +
                         " < 0; tighten the tolerance or raise kmax");
  }
  if (leak > opts.mass_tol) {
    throw NumericalError("truncation leaked mass " + std::to_string(leak) +
                         " beyond mass_tol; raise kmax");
  }
  return traj;
}

}  // namespace ngpde
