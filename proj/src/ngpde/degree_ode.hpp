#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "ngpde/model.hpp"
#include "ngpde/ode.hpp"

namespace ngpde {

/// Degree distribution p_0..p_kmax; p_{kmax+1} is taken as zero.
struct TruncatedDistribution {
  std::vector<double> p;
  double t = 0.0;

  std::size_t kmax() const { return p.empty() ? 0 : p.size() - 1; }
  double mass() const;
};

/// Sum_k p_k x^k by Horner's rule.
double gf_eval(const TruncatedDistribution& d, double x);
/// Sum_k k p_k.
double first_moment(const TruncatedDistribution& d);

/// dp_k/dt of the truncated master equation for all eight processes. Throws
/// DomainError when the first moment vanishes while a preferential process
/// (l_p or n_p) is active.
std::vector<double> master_rhs(const TruncatedDistribution& d, const ProcessRates& rates);
void master_rhs(const std::vector<double>& p, std::vector<double>& dp,
                const ProcessRates& rates);

struct OracleOptions {
  ode::Tolerances tol{1e-10, 1e-13};
  double mass_tol = 1e-6;       // allowed |sum p(t) - sum p(0)|
  double negative_tol = 1e-10;  // allowed negative excursion of any p_k
};

/// Integrated master equation over [0, t_end], queryable at any t in range.
class MasterTrajectory {
 public:
  TruncatedDistribution at(double t) const;
  double t_end() const { return dense_->end(); }
  /// max over accepted steps of |sum p(t) - sum p(0)|
  double max_leakage() const { return max_leakage_; }
  double min_probability() const { return min_probability_; }
  std::size_t steps() const { return dense_->times().size(); }

 private:
  friend MasterTrajectory integrate(const TruncatedDistribution&, const ProcessRates&,
                                    double, const OracleOptions&);
  std::shared_ptr<const ode::DenseTrajectory<std::vector<double>>> dense_;
  double max_leakage_ = 0.0;
  double min_probability_ = 0.0;
};

/// Requires kmax >= m + 2. Throws NumericalError when mass leaks beyond
/// mass_tol (raise kmax) or a p_k drops below -negative_tol.
MasterTrajectory integrate(const TruncatedDistribution& p0, const ProcessRates& rates,
                           double t_end, const OracleOptions& opts = {});

}  // namespace ngpde
