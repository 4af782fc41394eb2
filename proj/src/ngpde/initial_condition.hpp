#pragma once

#include <cstddef>
#include <vector>

namespace ngpde {

/// Initial generating function h(x) = sum_k p_k x^k with radius of
/// convergence > 1. Three representations:
///   polynomial         finitely many p_k (radius infinite)
///   scaled geometric   p_k = a rho^-k, h(x) = a rho / (rho - x)
///   explicit           p_0..p_{n-1} given, then a geometric tail a rho^-k, k >= n
class InitialCondition {
 public:
  enum class Kind { polynomial, scaled_geometric, explicit_coefficients };

  static InitialCondition polynomial(std::vector<double> coefficients);
  static InitialCondition scaled_geometric(double a, double ratio);
  static InitialCondition explicit_coefficients(std::vector<double> head,
                                                double tail_a, double tail_ratio);

  Kind kind() const { return kind_; }
  double radius() const;

  double value(double x) const;
  double derivative(double x) const;

  /// p_k; zero past the support for polynomials.
  double coefficient(std::size_t k) const;
  /// p_0..p_kmax.
  std::vector<double> coefficients(std::size_t kmax) const;

  /// h'(1), the initial first moment.
  double first_moment() const { return derivative(1.0); }

  /// Checks p_k in [0,1], radius > 1 and h(1) = 1 within `mass_tol`.
  /// Throws ValidationError.
  void validate(double mass_tol = 1e-12) const;

 private:
  InitialCondition() = default;

  double tail_value(double x) const;
  double tail_derivative(double x) const;

  Kind kind_ = Kind::polynomial;
  std::vector<double> head_;
  double tail_a_ = 0.0;
  double ratio_ = 0.0;  // 0 means no tail
};

}  // namespace ngpde
