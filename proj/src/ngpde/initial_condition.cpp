#include "ngpde/initial_condition.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ngpde/error.hpp"
#include "ngpde/model.hpp"

namespace ngpde {

InitialCondition InitialCondition::polynomial(std::vector<double> coefficients) {
  if (coefficients.empty()) throw ValidationError("polynomial needs coefficients");
  InitialCondition h;
  h.kind_ = Kind::polynomial;
  h.head_ = std::move(coefficients);
  return h;
}

InitialCondition InitialCondition::scaled_geometric(double a, double ratio) {
  if (!(ratio > 1.0)) throw ValidationError("geometric ratio must exceed 1");
  InitialCondition h;
  h.kind_ = Kind::scaled_geometric;
  h.tail_a_ = a;
  h.ratio_ = ratio;
  return h;
}

InitialCondition InitialCondition::explicit_coefficients(std::vector<double> head,
                                                         double tail_a,
                                                         double tail_ratio) {
  if (!(tail_ratio > 1.0)) throw ValidationError("tail ratio must exceed 1");
  InitialCondition h;
  h.kind_ = Kind::explicit_coefficients;
  h.head_ = std::move(head);
  h.tail_a_ = tail_a;
  h.ratio_ = tail_ratio;
  return h;
}

double InitialCondition::radius() const {
  return ratio_ > 0.0 ? ratio_ : std::numeric_limits<double>::infinity();
}

double InitialCondition::tail_value(double x) const {
  if (ratio_ == 0.0) return 0.0;
  const int n = static_cast<int>(head_.size());
  return tail_a_ * ratio_ * ipow(x / ratio_, n) / (ratio_ - x);
}

double InitialCondition::tail_derivative(double x) const {
  if (ratio_ == 0.0) return 0.0;
  const int n = static_cast<int>(head_.size());
  const double scale = tail_a_ * ratio_ / ipow(ratio_, n);
  const double lead = n > 0 ? n * ipow(x, n - 1) * (ratio_ - x) : 0.0;
  return scale * (lead + ipow(x, n)) / ((ratio_ - x) * (ratio_ - x));
}

double InitialCondition::value(double x) const {
  double s = 0.0;
  for (auto it = head_.rbegin(); it != head_.rend(); ++it) s = s * x + *it;
  return s + tail_value(x);
}

double InitialCondition::derivative(double x) const {
  double s = 0.0;
  for (std::size_t k = head_.size(); k-- > 1;) s = s * x + k * head_[k];
  return s + tail_derivative(x);
}

double InitialCondition::coefficient(std::size_t k) const {
  if (k < head_.size()) return head_[k];
  if (ratio_ == 0.0) return 0.0;
  return tail_a_ * std::pow(ratio_, -static_cast<double>(k));
}

std::vector<double> InitialCondition::coefficients(std::size_t kmax) const {
  std::vector<double> p(kmax + 1);
  for (std::size_t k = 0; k <= kmax; ++k) p[k] = coefficient(k);
  return p;
}

void InitialCondition::validate(double mass_tol) const {
  for (std::size_t k = 0; k < head_.size(); ++k) {
    if (!(head_[k] >= 0.0 && head_[k] <= 1.0)) {
      throw ValidationError("coefficient p_" + std::to_string(k) +
                            " must lie in [0,1]");
    }
  }
  if (ratio_ != 0.0 && !(tail_a_ >= 0.0 && tail_a_ <= 1.0)) {
    throw ValidationError("geometric amplitude must lie in [0,1]");
  }
  if (!(radius() > 1.0)) throw ValidationError("radius of convergence must exceed 1");
  const double mass = value(1.0);
  if (!(std::abs(mass - 1.0) <= mass_tol)) {
    throw ValidationError("initial condition must satisfy h(1) = 1, got h(1) = " +
                          std::to_string(mass));
  }
}

}  // namespace ngpde
