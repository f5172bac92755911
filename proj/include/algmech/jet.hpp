#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "algmech/errors.hpp"

namespace algmech {

/// Second-order truncated jet: a value together with its gradient and
/// symmetric Hessian with respect to a fixed number of independent inputs.
/// Arithmetic and the elementary transcendentals propagate both derivative
/// orders, so polynomial and rational expressions come out exact to rounding.
class Jet2 {
 public:
  Jet2() = default;

  static Jet2 constant(double value, Eigen::Index dim) {
    Jet2 j;
    j.v_ = value;
    j.g_ = Eigen::VectorXd::Zero(dim);
    j.h_ = Eigen::MatrixXd::Zero(dim, dim);
    return j;
  }

  static Jet2 variable(double value, Eigen::Index dim, Eigen::Index index) {
    Jet2 j = constant(value, dim);
    j.g_(index) = 1.0;
    return j;
  }

  double value() const { return v_; }
  const Eigen::VectorXd& grad() const { return g_; }
  const Eigen::MatrixXd& hess() const { return h_; }
  Eigen::Index dim() const { return g_.size(); }

  /// Composition with a scalar map given by its value and first two
  /// derivatives taken at this jet's value.
  Jet2 chain(double f, double df, double ddf) const {
    Jet2 r;
    r.v_ = f;
    r.g_ = df * g_;
    r.h_ = df * h_ + ddf * (g_ * g_.transpose());
    return r;
  }

  Jet2 operator-() const {
    Jet2 r;
    r.v_ = -v_;
    r.g_ = -g_;
    r.h_ = -h_;
    return r;
  }

  friend Jet2 operator+(const Jet2& a, const Jet2& b) {
    check_dims(a, b);
    Jet2 r;
    r.v_ = a.v_ + b.v_;
    r.g_ = a.g_ + b.g_;
    r.h_ = a.h_ + b.h_;
    return r;
  }

  friend Jet2 operator-(const Jet2& a, const Jet2& b) {
    check_dims(a, b);
    Jet2 r;
    r.v_ = a.v_ - b.v_;
    r.g_ = a.g_ - b.g_;
    r.h_ = a.h_ - b.h_;
    return r;
  }

  friend Jet2 operator*(const Jet2& a, const Jet2& b) {
    check_dims(a, b);
    Jet2 r;
    r.v_ = a.v_ * b.v_;
    r.g_ = b.v_ * a.g_ + a.v_ * b.g_;
    r.h_ = b.v_ * a.h_ + a.v_ * b.h_ + a.g_ * b.g_.transpose() +
           b.g_ * a.g_.transpose();
    return r;
  }

  friend Jet2 operator/(const Jet2& a, const Jet2& b) {
    return a * reciprocal(b);
  }

  friend Jet2 operator+(const Jet2& a, double c) {
    Jet2 r(a);
    r.v_ += c;
    return r;
  }
  friend Jet2 operator+(double c, const Jet2& a) { return a + c; }
  friend Jet2 operator-(const Jet2& a, double c) { return a + (-c); }
  friend Jet2 operator-(double c, const Jet2& a) { return -a + c; }

  friend Jet2 operator*(const Jet2& a, double c) {
    Jet2 r;
    r.v_ = a.v_ * c;
    r.g_ = a.g_ * c;
    r.h_ = a.h_ * c;
    return r;
  }
  friend Jet2 operator*(double c, const Jet2& a) { return a * c; }
  friend Jet2 operator/(const Jet2& a, double c) {
    if (c == 0.0) throw DomainError("division by zero");
    return a * (1.0 / c);
  }
  friend Jet2 operator/(double c, const Jet2& a) { return c * reciprocal(a); }

  friend Jet2 reciprocal(const Jet2& a) {
    if (a.v_ == 0.0) throw DomainError("division by zero");
    double iv = 1.0 / a.v_;
    return a.chain(iv, -iv * iv, 2.0 * iv * iv * iv);
  }

 private:
  static void check_dims(const Jet2& a, const Jet2& b) {
    if (a.dim() != b.dim())
      throw std::invalid_argument("jet dimension mismatch");
  }

  double v_ = 0.0;
  Eigen::VectorXd g_;
  Eigen::MatrixXd h_;
};

inline Jet2 sin(const Jet2& a) {
  double s = std::sin(a.value()), c = std::cos(a.value());
  return a.chain(s, c, -s);
}

inline Jet2 cos(const Jet2& a) {
  double s = std::sin(a.value()), c = std::cos(a.value());
  return a.chain(c, -s, -c);
}

inline Jet2 exp(const Jet2& a) {
  double e = std::exp(a.value());
  return a.chain(e, e, e);
}

inline Jet2 log(const Jet2& a) {
  if (a.value() <= 0.0) throw DomainError("log of non-positive value");
  double iv = 1.0 / a.value();
  return a.chain(std::log(a.value()), iv, -iv * iv);
}

inline Jet2 sqrt(const Jet2& a) {
  if (a.value() < 0.0) throw DomainError("sqrt of negative value");
  if (a.value() == 0.0) throw DomainError("sqrt not differentiable at zero");
  double s = std::sqrt(a.value());
  return a.chain(s, 0.5 / s, -0.25 / (s * a.value()));
}

/// Integer power by repeated multiplication; exact for polynomial input and
/// valid for any base sign.
inline Jet2 ipow(const Jet2& a, long long k) {
  if (k < 0) return reciprocal(ipow(a, -k));
  Jet2 r = Jet2::constant(1.0, a.dim());
  Jet2 base = a;
  while (k > 0) {
    if (k & 1) r = r * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return r;
}

inline Jet2 pow(const Jet2& a, double e) {
  if (e == std::floor(e) && std::abs(e) < 1e9)
    return ipow(a, static_cast<long long>(e));
  if (a.value() <= 0.0)
    throw DomainError("pow of non-positive base with non-integer exponent");
  double f = std::pow(a.value(), e);
  return a.chain(f, e * f / a.value(),
                 e * (e - 1.0) * f / (a.value() * a.value()));
}

inline Jet2 pow(const Jet2& a, const Jet2& b) {
  if (b.grad().isZero(0.0) && b.hess().isZero(0.0)) return pow(a, b.value());
  if (a.value() <= 0.0)
    throw DomainError("pow of non-positive base with varying exponent");
  return exp(b * log(a));
}

}  // namespace algmech
