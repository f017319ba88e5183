#pragma once

// Truncated bivariate Taylor polynomials.
//
// A Jet of order p represents f(u0 + s, v0 + t) = sum_{a+b<=p} c_ab s^a t^b
// around a fixed base point. Arithmetic truncates to the smaller order of
// the operands; differentiation shifts coefficients and drops one order.
// Analytic surfaces are evaluated on jets, which gives derivatives up to
// order p that are exact to round-off.

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>

namespace bicons {

enum class Axis { u = 0, v = 1 };

class Jet {
 public:
  static constexpr int kMaxOrder = 4;
  static constexpr int kSide = kMaxOrder + 1;

  Jet() = default;
  explicit Jet(double value, int order = 0) : order_(order) {
    check_order(order);
    c_[0] = value;
  }

  /// The coordinate function along `axis` expanded around `at`.
  static Jet variable(double at, Axis axis, int order) {
    Jet j(at, order);
    if (order >= 1) {
      if (axis == Axis::u) j.c_[index(1, 0)] = 1.0;
      else j.c_[index(0, 1)] = 1.0;
    }
    return j;
  }

  static constexpr int coefficient_count(int order) {
    return (order + 1) * (order + 2) / 2;
  }
  static constexpr int index(int a, int b) { return a * kSide + b; }

  int order() const noexcept { return order_; }
  double value() const noexcept { return c_[0]; }
  double coeff(int a, int b) const noexcept { return c_[index(a, b)]; }
  double& coeff(int a, int b) noexcept { return c_[index(a, b)]; }

  /// d^a/du^a d^b/dv^b at the base point.
  double partial(int a, int b) const {
    if (a + b > order_) throw std::out_of_range("Jet::partial beyond jet order");
    return coeff(a, b) * factorial(a) * factorial(b);
  }

  Jet derivative(Axis axis) const {
    if (order_ == 0) throw std::logic_error("cannot differentiate an order-0 jet");
    Jet r;
    r.order_ = order_ - 1;
    for (int a = 0; a <= r.order_; ++a) {
      for (int b = 0; a + b <= r.order_; ++b) {
        r.c_[index(a, b)] = axis == Axis::u ? (a + 1) * coeff(a + 1, b)
                                            : (b + 1) * coeff(a, b + 1);
      }
    }
    return r;
  }

  Jet truncated(int order) const {
    if (order >= order_) return *this;
    Jet r;
    r.order_ = order < 0 ? 0 : order;
    for (int a = 0; a <= r.order_; ++a)
      for (int b = 0; a + b <= r.order_; ++b) r.c_[index(a, b)] = coeff(a, b);
    return r;
  }

  Jet operator-() const {
    Jet r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }

  Jet& operator+=(const Jet& o) {
    lower_to(o.order_);
    for (int a = 0; a <= order_; ++a)
      for (int b = 0; a + b <= order_; ++b) c_[index(a, b)] += o.coeff(a, b);
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    lower_to(o.order_);
    for (int a = 0; a <= order_; ++a)
      for (int b = 0; a + b <= order_; ++b) c_[index(a, b)] -= o.coeff(a, b);
    return *this;
  }
  Jet& operator+=(double x) { c_[0] += x; return *this; }
  Jet& operator-=(double x) { c_[0] -= x; return *this; }
  Jet& operator*=(double x) {
    for (auto& y : c_) y *= x;
    return *this;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }
  Jet& operator/=(double x) { return *this *= 1.0 / x; }

  friend Jet operator*(const Jet& x, const Jet& y) {
    Jet r;
    r.order_ = x.order_ < y.order_ ? x.order_ : y.order_;
    const int p = r.order_;
    for (int a = 0; a <= p; ++a) {
      for (int b = 0; a + b <= p; ++b) {
        const double xab = x.coeff(a, b);
        if (xab == 0.0) continue;
        const int rest = p - a - b;
        for (int c = 0; c <= rest; ++c)
          for (int d = 0; c + d <= rest; ++d)
            r.c_[index(a + c, b + d)] += xab * y.coeff(c, d);
      }
    }
    return r;
  }
  friend Jet operator/(const Jet& x, const Jet& y) { return x * reciprocal(y); }
  friend Jet operator+(Jet x, const Jet& y) { return x += y; }
  friend Jet operator-(Jet x, const Jet& y) { return x -= y; }
  friend Jet operator+(Jet x, double y) { return x += y; }
  friend Jet operator+(double y, Jet x) { return x += y; }
  friend Jet operator-(Jet x, double y) { return x -= y; }
  friend Jet operator-(double y, const Jet& x) { return -x + y; }
  friend Jet operator*(Jet x, double y) { return x *= y; }
  friend Jet operator*(double y, Jet x) { return x *= y; }
  friend Jet operator/(Jet x, double y) { return x /= y; }
  friend Jet operator/(double y, const Jet& x) { return reciprocal(x) * y; }

  /// f(g) for a univariate f given its scaled Taylor coefficients
  /// taylor[k] = f^(k)(g(0)) / k!, k = 0..order.
  friend Jet compose(const Jet& g, std::span<const double> taylor) {
    const int p = g.order_;
    Jet result(taylor[0], p);
    if (p == 0) return result;
    Jet delta = g;
    delta.c_[0] = 0.0;
    Jet power = delta;
    for (int k = 1; k <= p; ++k) {
      Jet term = power;
      term *= taylor[k];
      result += term;
      if (k < p) power = power * delta;
    }
    return result;
  }

  friend Jet reciprocal(const Jet& g) {
    std::array<double, kSide> t{};
    const double x = g.value();
    if (x == 0.0) throw std::domain_error("Jet reciprocal of zero");
    double p = 1.0 / x;
    for (int k = 0; k <= g.order_; ++k) {
      t[k] = p;
      p *= -1.0 / x;
    }
    return compose(g, std::span<const double>(t.data(), g.order_ + 1));
  }
  friend Jet exp(const Jet& g) {
    std::array<double, kSide> t{};
    const double e = std::exp(g.value());
    for (int k = 0; k <= g.order_; ++k) t[k] = e / factorial(k);
    return compose(g, std::span<const double>(t.data(), g.order_ + 1));
  }
  friend Jet log(const Jet& g) {
    const double x = g.value();
    if (!(x > 0.0)) throw std::domain_error("Jet log of non-positive value");
    std::array<double, kSide> t{};
    t[0] = std::log(x);
    for (int k = 1; k <= g.order_; ++k)
      t[k] = ((k % 2) ? 1.0 : -1.0) / (k * std::pow(x, k));
    return compose(g, std::span<const double>(t.data(), g.order_ + 1));
  }
  friend Jet pow(const Jet& g, double exponent) {
    const double x = g.value();
    std::array<double, kSide> t{};
    double binom = 1.0;
    for (int k = 0; k <= g.order_; ++k) {
      t[k] = binom * std::pow(x, exponent - k);
      binom *= (exponent - k) / (k + 1);
    }
    return compose(g, std::span<const double>(t.data(), g.order_ + 1));
  }
  friend Jet sqrt(const Jet& g) {
    if (g.order_ > 0 && !(g.value() > 0.0))
      throw std::domain_error("Jet sqrt at non-positive value");
    if (g.order_ == 0) return Jet(std::sqrt(g.value()), 0);
    return pow(g, 0.5);
  }
  friend Jet sin(const Jet& g) { return trig(g, false); }
  friend Jet cos(const Jet& g) { return trig(g, true); }
  friend Jet cosh(const Jet& g) { return 0.5 * (exp(g) + exp(-g)); }
  friend Jet sinh(const Jet& g) { return 0.5 * (exp(g) - exp(-g)); }
  friend Jet tanh(const Jet& g) { return sinh(g) / cosh(g); }

 private:
  static void check_order(int order) {
    if (order < 0 || order > kMaxOrder) throw std::out_of_range("Jet order out of range");
  }
  static constexpr double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  }
  void lower_to(int order) {
    if (order < order_) *this = truncated(order);
  }
  static Jet trig(const Jet& g, bool cosine) {
    const double s = std::sin(g.value()), c = std::cos(g.value());
    // derivatives of sin: sin, cos, -sin, -cos; of cos: cos, -sin, -cos, sin
    const double cyc_sin[4] = {s, c, -s, -c};
    const double cyc_cos[4] = {c, -s, -c, s};
    std::array<double, kSide> t{};
    for (int k = 0; k <= g.order_; ++k)
      t[k] = (cosine ? cyc_cos[k % 4] : cyc_sin[k % 4]) / factorial(k);
    return compose(g, std::span<const double>(t.data(), g.order_ + 1));
  }

  std::array<double, kSide * kSide> c_{};
  int order_ = 0;
};

}  // namespace bicons
