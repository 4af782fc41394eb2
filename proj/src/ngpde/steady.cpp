#include "ngpde/steady.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "ngpde/error.hpp"
#include "ngpde/ode.hpp"

namespace ngpde {

namespace {

constexpr double kTie = 1e-12;

bool is_zero(double c) { return std::abs(c) <= kTie; }
bool is_equal(double a, double b) {
  return std::abs(a - b) <= kTie * std::max({1.0, std::abs(a), std::abs(b)});
}

void require_regular(const SteadyConstants& k) {
  if (k.degeneracy != SteadyDegeneracy::regular) {
    throw ValidationError("steady-state constants are degenerate");
  }
}

double quad_tol() { return 1e-14; }

// One integrator per thread: tanh_sinh::integrate is not const.
boost::math::quadrature::tanh_sinh<double>& quadrature() {
  thread_local boost::math::quadrature::tanh_sinh<double> q;
  return q;
}

}  // namespace

class SteadyState::Impl {
 public:
  virtual ~Impl() = default;
  virtual double eval(double x) const = 0;
};

namespace {

class ConstantImpl final : public SteadyState::Impl {
 public:
  explicit ConstantImpl(double v) : v_(v) {}
  double eval(double) const override { return v_; }

 private:
  double v_;
};

// c1 = c2 = 0, c4 > 0: the equation is algebraic.
class AlgebraicImpl final : public SteadyState::Impl {
 public:
  AlgebraicImpl(double c3, double c4, int m) : c3_(c3), c4_(c4), m_(m) {}
  double eval(double x) const override {
    return c4_ * ipow(x, m_) / (c4_ + (1.0 - x) * c3_);
  }

 private:
  double c3_, c4_;
  int m_;
};

// c4 = 0, c3 > 0, c2 > c1 >= 0: (x c1 - c2) G' + c3 G = 0 normalized by G(1) = 1.
class PowerFamilyImpl final : public SteadyState::Impl {
 public:
  PowerFamilyImpl(double c1, double c2, double c3) : c1_(c1), c2_(c2), c3_(c3) {}
  double eval(double x) const override {
    if (is_zero(c1_)) return std::exp(c3_ * (x - 1.0) / c2_);
    return std::pow((c2_ - c1_) / (c2_ - c1_ * x), c3_ / c1_);
  }

 private:
  double c1_, c2_, c3_;
};

// Two singular points rho = c2/c1 and 1, with gamma = -beta > 0.
//
// Folding the improper integrals of the variation-of-constants formula with
// s = rho + (x - rho) tau^(1/gamma) gives, on both sides of rho,
//   G(x) = c4/(c1 gamma) (1-x)^alpha  int_0^1 s^m (1-s)^(-alpha-1) dtau,
// whose integrand is bounded. Right of the anchor y the piece is continued
// from G(y) with the mirrored substitution s = 1 - (1-x) theta^(-1/alpha):
//   G(x) = w(x) G(y) + c4/(c1 alpha) (x-rho)^-gamma  int_{theta_y}^1 s^m (s-rho)^(gamma-1) dtheta,
//   w(x) = ((1-x)/(1-y))^alpha ((x-rho)/(y-rho))^-gamma,  theta_y = ((1-x)/(1-y))^alpha.
class TwoSingularityImpl final : public SteadyState::Impl {
 public:
  TwoSingularityImpl(const SteadyConstants& k, const TwoSingularityParameters& p,
                     double anchor)
      : c1_(k.c1), c4_(k.c4), m_(k.m), rho_(p.ratio), alpha_(p.alpha),
        gamma_(-p.beta), anchor_(anchor) {
    at_ratio_ = c4_ * ipow(rho_, m_) / (k.c3 * (1.0 - rho_) + c4_);
    anchor_value_ = folded(anchor_);
  }

  double eval(double x) const override {
    if (x >= 1.0) return 1.0;
    if (x == rho_) return at_ratio_;
    if (x > anchor_) return anchored(x);
    return folded(x);
  }

  double at_ratio() const { return at_ratio_; }

 private:
  double folded(double x) const {
    const double d = x - rho_;
    auto f = [&](double tau) {
      const double s = rho_ + d * std::pow(tau, 1.0 / gamma_);
      return ipow(s, m_) * std::pow(1.0 - s, -alpha_ - 1.0);
    };
    const double integral = quadrature().integrate(f, 0.0, 1.0, quad_tol());
    return c4_ / (c1_ * gamma_) * std::pow(1.0 - x, alpha_) * integral;
  }

  double anchored(double x) const {
    const double y = anchor_;
    const double theta_y = std::pow((1.0 - x) / (1.0 - y), alpha_);
    auto f = [&](double theta) {
      const double s = 1.0 - (1.0 - x) * std::pow(theta, -1.0 / alpha_);
      return ipow(s, m_) * std::pow(s - rho_, gamma_ - 1.0);
    };
    const double integral = quadrature().integrate(f, theta_y, 1.0, quad_tol());
    const double w = theta_y * std::pow((x - rho_) / (y - rho_), -gamma_);
    return w * anchor_value_ +
           c4_ / (c1_ * alpha_) * std::pow(x - rho_, -gamma_) * integral;
  }

  double c1_, c4_;
  int m_;
  double rho_, alpha_, gamma_, anchor_;
  double at_ratio_ = 0.0;
  double anchor_value_ = 0.0;
};

// x = 1 is the only singular point. The solution is the regular series
// 1 + s1 (x-1) + s2 (x-1)^2 on (1-eps, 1] and is integrated from 1-eps down to
// -1. Homogeneous solutions blow up at x = 1, so this direction damps errors.
class SeriesSeededImpl final : public SteadyState::Impl {
 public:
  static constexpr double kEps = 1e-4;
  static constexpr double kLeft = -1.0 - 1e-2;

  SeriesSeededImpl(const SteadyConstants& k, double s1, double s2)
      : s1_(s1), s2_(s2),
        dense_(make_system(k), State{seed(-kEps)}, 1.0 - kEps, kLeft,
               ode::Tolerances{1e-12, 1e-13}) {}

  double eval(double x) const override {
    if (x >= 1.0 - kEps) return seed(x - 1.0);
    return dense_.at(x)[0];
  }

 private:
  using State = std::array<double, 1>;

  static ode::DenseTrajectory<State>::System make_system(const SteadyConstants& k) {
    return [k](const State& y, State& dy, double x) {
      const double lead = (x - 1.0) * (x * k.c1 - k.c2);
      dy[0] = -(((x - 1.0) * k.c3 - k.c4) * y[0] + k.c4 * ipow(x, k.m)) / lead;
    };
  }

  double seed(double e) const { return 1.0 + e * (s1_ + e * s2_); }

  double s1_, s2_;
  ode::DenseTrajectory<State> dense_;
};

SteadyCase case_for(SteadyCell cell) { return SteadyCase{cell, {}}; }

}  // namespace

std::string to_string(SteadyCell cell) {
  switch (cell) {
    case SteadyCell::uniform_limit: return "uniform_limit";
    case SteadyCell::all_constants_zero: return "all_constants_zero";
    case SteadyCell::constants_only: return "constants_only";
    case SteadyCell::c4_zero_c1_c2_zero: return "c4=0,c3>0,c1=c2=0";
    case SteadyCell::c4_zero_c1_zero_lt_c2: return "c4=0,c3>0,0=c1<c2";
    case SteadyCell::c4_zero_c1_lt_c2: return "c4=0,c3>0,0<c1<c2";
    case SteadyCell::c4_zero_c1_eq_c2: return "c4=0,c3>0,0<c1=c2";
    case SteadyCell::c4_zero_c2_zero_lt_c1: return "c4=0,c3>0,0=c2<c1";
    case SteadyCell::c4_zero_c2_lt_c1: return "c4=0,c3>0,0<c2<c1";
    case SteadyCell::c4_pos_c1_c2_zero_c3_zero: return "c4>0,c1=c2=0,c3=0";
    case SteadyCell::c4_pos_c1_c2_zero_c3_pos: return "c4>0,c1=c2=0,c3>0";
    case SteadyCell::c4_pos_c1_zero_lt_c2: return "c4>0,0=c1<c2";
    case SteadyCell::c4_pos_c1_lt_c2: return "c4>0,0<c1<c2";
    case SteadyCell::c4_pos_c1_eq_c2: return "c4>0,0<c1=c2";
    case SteadyCell::c4_pos_c2_zero_lt_c1: return "c4>0,0=c2<c1";
    case SteadyCell::c4_pos_c2_lt_c1: return "c4>0,0<c2<c1";
  }
  return "unknown";
}

SteadyCase classify(const SteadyConstants& k) {
  require_regular(k);
  const bool c1z = is_zero(k.c1), c2z = is_zero(k.c2), c3z = is_zero(k.c3),
             c4z = is_zero(k.c4), eq = is_equal(k.c1, k.c2);

  SteadyCase out;
  if (c1z && c2z && c3z && c4z) {
    out.cell = SteadyCell::all_constants_zero;
    return out;
  }
  if (c3z && c4z) {
    out.cell = SteadyCell::constants_only;
  } else if (c4z) {
    if (c1z && c2z) out.cell = SteadyCell::c4_zero_c1_c2_zero;
    else if (c1z) out.cell = SteadyCell::c4_zero_c1_zero_lt_c2;
    else if (eq) out.cell = SteadyCell::c4_zero_c1_eq_c2;
    else if (k.c2 > k.c1) out.cell = SteadyCell::c4_zero_c1_lt_c2;
    else if (c2z) out.cell = SteadyCell::c4_zero_c2_zero_lt_c1;
    else out.cell = SteadyCell::c4_zero_c2_lt_c1;
  } else {
    if (c1z && c2z) {
      out.cell = c3z ? SteadyCell::c4_pos_c1_c2_zero_c3_zero
                     : SteadyCell::c4_pos_c1_c2_zero_c3_pos;
    } else if (c1z) {
      out.cell = SteadyCell::c4_pos_c1_zero_lt_c2;
    } else if (eq) {
      out.cell = SteadyCell::c4_pos_c1_eq_c2;
    } else if (k.c2 > k.c1) {
      out.cell = SteadyCell::c4_pos_c1_lt_c2;
    } else if (c2z) {
      out.cell = SteadyCell::c4_pos_c2_zero_lt_c1;
    } else {
      out.cell = SteadyCell::c4_pos_c2_lt_c1;
    }
  }

  if (!(c1z && c2z)) {
    if (!c1z && !eq && k.c2 < k.c1) out.singular_points.push_back(c2z ? 0.0 : k.c2 / k.c1);
    out.singular_points.push_back(1.0);
  }
  return out;
}

double SteadyState::operator()(double x) const { return impl_->eval(x); }

SteadyState constant_steady_state(double value, SteadyCase c) {
  SteadyState s;
  s.impl_ = std::make_shared<ConstantImpl>(value);
  s.case_ = std::move(c);
  s.value_at_one_ = value;
  s.slope_at_one_ = 0.0;
  s.certified_ = false;
  return s;
}

TwoSingularityParameters two_singularity_parameters(const SteadyConstants& k) {
  TwoSingularityParameters p;
  p.ratio = k.c2 / k.c1;
  p.alpha = k.c4 / (k.c1 - k.c2);
  p.beta = (-k.c1 * k.c3 + k.c2 * k.c3 - k.c1 * k.c4) / ((k.c1 - k.c2) * k.c1);
  return p;
}

SteadyState build_two_singularity(const SteadyConstants& k, double anchor) {
  const SteadyCase c = classify(k);
  if (c.cell != SteadyCell::c4_pos_c2_lt_c1 && c.cell != SteadyCell::c4_pos_c2_zero_lt_c1) {
    throw ValidationError("two-singularity construction needs 0 <= c2 < c1 and c4 > 0, got " +
                          to_string(c.cell));
  }
  const TwoSingularityParameters p = two_singularity_parameters(k);
  if (std::isnan(anchor)) anchor = 0.5 * (p.ratio + 1.0);
  if (!(anchor > p.ratio && anchor < 1.0)) {
    throw ValidationError("anchor must lie strictly between c2/c1 and 1");
  }
  auto impl = std::make_shared<TwoSingularityImpl>(k, p, anchor);

  SteadyState s;
  s.case_ = c;
  s.value_at_one_ = 1.0;
  s.value_at_ratio_ = impl->at_ratio();
  // G = regular series + K (1-x)^alpha near 1: the slope exists iff alpha > 1.
  s.slope_at_one_ = p.alpha > 1.0 ? series_seed_slope(k) : kNaN;
  s.certified_ = std::isfinite(s.slope_at_one_) && s.slope_at_one_ != 0.0;
  s.impl_ = std::move(impl);
  return s;
}

SteadyState build_series_seeded(const SteadyConstants& k) {
  const SteadyCase c = classify(k);
  SteadyState s;
  s.case_ = c;
  s.value_at_one_ = 1.0;

  switch (c.cell) {
    case SteadyCell::c4_pos_c1_c2_zero_c3_zero:
    case SteadyCell::c4_pos_c1_c2_zero_c3_pos:
      s.impl_ = std::make_shared<AlgebraicImpl>(k.c3, k.c4, k.m);
      break;
    case SteadyCell::c4_pos_c1_zero_lt_c2:
    case SteadyCell::c4_pos_c1_lt_c2:
    case SteadyCell::c4_pos_c1_eq_c2: {
      const double denom1 = k.c4 + k.c2 - k.c1;
      if (std::abs(denom1) < 1e-12) {
        throw NumericalError("degenerate series seed: c4 + c2 - c1 = 0");
      }
      const double s1 = series_seed_slope(k);
      const double s2 = ((k.c1 + k.c3) * s1 + 0.5 * k.c4 * k.m * (k.m - 1)) /
                        (k.c4 + 2.0 * (k.c2 - k.c1));
      s.impl_ = std::make_shared<SeriesSeededImpl>(k, s1, s2);
      break;
    }
    case SteadyCell::c4_pos_c2_zero_lt_c1:
    case SteadyCell::c4_pos_c2_lt_c1:
      throw ValidationError("series-seeded construction needs x = 1 as the only singular "
                            "point, got " + to_string(c.cell));
    default:
      // c4 = 0 rows and the constants-only cells: the table answer is explicit.
      return build_steady_state(k);
  }
  s.slope_at_one_ = series_seed_slope(k);
  s.certified_ = s.slope_at_one_ != 0.0 && std::isfinite(s.slope_at_one_);
  return s;
}

SteadyState build_steady_state(const SteadyConstants& k) {
  switch (k.degeneracy) {
    case SteadyDegeneracy::no_steady_state:
      throw NoSteadyStateError("no steady state: the first moment grows without bound");
    case SteadyDegeneracy::uniform_steady_state:
      return constant_steady_state(1.0, case_for(SteadyCell::uniform_limit));
    case SteadyDegeneracy::regular:
      break;
  }
  const SteadyCase c = classify(k);
  switch (c.cell) {
    case SteadyCell::uniform_limit:
    case SteadyCell::all_constants_zero:
    case SteadyCell::constants_only:
      return constant_steady_state(1.0, c);
    case SteadyCell::c4_zero_c1_c2_zero:
    case SteadyCell::c4_zero_c1_eq_c2:
    case SteadyCell::c4_zero_c2_zero_lt_c1:
    case SteadyCell::c4_zero_c2_lt_c1:
      return constant_steady_state(0.0, c);
    case SteadyCell::c4_zero_c1_zero_lt_c2:
    case SteadyCell::c4_zero_c1_lt_c2: {
      SteadyState s;
      s.impl_ = std::make_shared<PowerFamilyImpl>(k.c1, k.c2, k.c3);
      s.case_ = c;
      s.value_at_one_ = 1.0;
      s.slope_at_one_ = k.c3 / (k.c2 - k.c1);
      s.certified_ = true;
      return s;
    }
    case SteadyCell::c4_pos_c2_zero_lt_c1:
    case SteadyCell::c4_pos_c2_lt_c1:
      return build_two_singularity(k);
    default:
      return build_series_seeded(k);
  }
}

double residual(const SteadyState& s, const SteadyConstants& k, double x, double h) {
  const double slope = (s(x + h) - s(x - h)) / (2.0 * h);
  return (x - 1.0) * (x * k.c1 - k.c2) * slope + ((x - 1.0) * k.c3 - k.c4) * s(x) +
         k.c4 * ipow(x, k.m);
}

std::vector<double> residual_grid(const SteadyCase& c, int count, double delta) {
  std::vector<double> xs;
  for (int i = 0; i < count; ++i) {
    const double x = -1.0 + 2.0 * i / (count - 1);
    const bool near = std::any_of(c.singular_points.begin(), c.singular_points.end(),
                                  [&](double p) { return std::abs(x - p) < delta; });
    if (!near) xs.push_back(x);
  }
  return xs;
}

}  // namespace ngpde
