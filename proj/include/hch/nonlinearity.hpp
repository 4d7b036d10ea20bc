// Cubic nonlinearity f(r) = a3 r^3 + a2 r^2 + a1 r and its primitive F with F(0) = 0.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace hch {

struct UnsupportedNonlinearity : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class Nonlinearity {
 public:
  Nonlinearity() = default;
  Nonlinearity(double a3, double a2, double a1) : a3_(a3), a2_(a2), a1_(a1) {
    if (!std::isfinite(a3) || !std::isfinite(a2) || !std::isfinite(a1))
      throw std::invalid_argument("Nonlinearity: coefficients must be finite");
    if (a3 < 0.0) throw UnsupportedNonlinearity("Nonlinearity: a3 must be >= 0");
  }

  static Nonlinearity zero() { return {0.0, 0.0, 0.0}; }

  double a3() const { return a3_; }
  double a2() const { return a2_; }
  double a1() const { return a1_; }

  double f(double r) const { return ((a3_ * r + a2_) * r + a1_) * r; }
  double df(double r) const { return (3.0 * a3_ * r + 2.0 * a2_) * r + a1_; }
  double d2f(double r) const { return 6.0 * a3_ * r + 2.0 * a2_; }
  double potential(double r) const { return ((0.25 * a3_ * r + a2_ / 3.0) * r + 0.5 * a1_) * r * r; }

  bool is_zero() const { return a3_ == 0.0 && a2_ == 0.0 && a1_ == 0.0; }

  /// Closed-form lambda with f' >= -lambda: max(0, a2^2/(3 a3) - a1). Infinite when
  /// f' is unbounded below (a3 = 0, a2 != 0). An explicit override replaces it.
  double lambda_bound() const {
    if (lambda_override_) return *lambda_override_;
    return natural_lambda();
  }
  double natural_lambda() const {
    if (a3_ > 0.0) return std::max(0.0, a2_ * a2_ / (3.0 * a3_) - a1_);
    if (a2_ != 0.0) return std::numeric_limits<double>::infinity();
    return std::max(0.0, -a1_);
  }
  void override_lambda_bound(double lambda) { lambda_override_ = lambda; }
  bool has_lambda_override() const { return lambda_override_.has_value(); }

  /// M with |f''(r)| <= M (1 + |r|).
  double m_bound() const { return std::max(std::abs(2.0 * a2_), 6.0 * std::abs(a3_)); }

  /// Smallest r0 >= 0 with f(r) r >= 0 for all |r| >= r0.
  double r0() const {
    // f(r) r = r^2 q(r), q(r) = a3 r^2 + a2 r + a1.
    if (a3_ == 0.0) {
      if (a2_ != 0.0) return std::numeric_limits<double>::infinity();
      return a1_ >= 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    const double disc = a2_ * a2_ - 4.0 * a3_ * a1_;
    if (disc <= 0.0) return 0.0;
    const double s = std::sqrt(disc);
    const double q = -0.5 * (a2_ + std::copysign(s, a2_));
    const double r1 = q / a3_;
    const double r2 = q != 0.0 ? a1_ / q : -r1;
    return std::max(std::abs(r1), std::abs(r2));
  }

  friend bool operator==(const Nonlinearity& a, const Nonlinearity& b) {
    return a.a3_ == b.a3_ && a.a2_ == b.a2_ && a.a1_ == b.a1_ && a.lambda_override_ == b.lambda_override_;
  }

 private:
  double a3_ = 1.0;
  double a2_ = 0.0;
  double a1_ = -1.0;
  std::optional<double> lambda_override_;
};

}  // namespace hch
