#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <concepts>
#include <span>
#include <string>

namespace pcl {

using Rational = mpq_class;
using Complex = std::complex<double>;

/// Default relative tolerance of the floating backends.
inline constexpr double kDefaultEps = 1e-9;

/// Exact element u + v*theta of a quadratic extension of Q, where
/// theta^2 = P + Q*theta.
template <int P, int Q>
class QuadraticRational {
 public:
  QuadraticRational() = default;
  QuadraticRational(long v) : re_(v), im_(0) {}  // NOLINT(google-explicit-constructor)
  QuadraticRational(Rational re) : re_(std::move(re)), im_(0) {}  // NOLINT
  QuadraticRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

  static QuadraticRational theta() { return {Rational(0), Rational(1)}; }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }

  QuadraticRational conj() const {
    // the other root of x^2 - Q x - P is Q - theta
    return {Rational(re_ + im_ * Q), Rational(-im_)};
  }
  Rational norm() const { return re_ * re_ + re_ * im_ * Q - im_ * im_ * P; }

  friend QuadraticRational operator+(const QuadraticRational& a, const QuadraticRational& b) {
    return {Rational(a.re_ + b.re_), Rational(a.im_ + b.im_)};
  }
  friend QuadraticRational operator-(const QuadraticRational& a, const QuadraticRational& b) {
    return {Rational(a.re_ - b.re_), Rational(a.im_ - b.im_)};
  }
  friend QuadraticRational operator-(const QuadraticRational& a) {
    return {Rational(-a.re_), Rational(-a.im_)};
  }
  friend QuadraticRational operator*(const QuadraticRational& a, const QuadraticRational& b) {
    Rational vv = a.im_ * b.im_;
    return {Rational(a.re_ * b.re_ + vv * P), Rational(a.re_ * b.im_ + a.im_ * b.re_ + vv * Q)};
  }
  friend QuadraticRational operator/(const QuadraticRational& a, const QuadraticRational& b) {
    Rational n = b.norm();
    QuadraticRational num = a * b.conj();
    return {Rational(num.re_ / n), Rational(num.im_ / n)};
  }
  QuadraticRational& operator+=(const QuadraticRational& o) { return *this = *this + o; }
  QuadraticRational& operator-=(const QuadraticRational& o) { return *this = *this - o; }
  QuadraticRational& operator*=(const QuadraticRational& o) { return *this = *this * o; }
  QuadraticRational& operator/=(const QuadraticRational& o) { return *this = *this / o; }

  friend bool operator==(const QuadraticRational& a, const QuadraticRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  /// Numerical value, taking theta as the root with positive imaginary part.
  Complex to_complex() const {
    const double disc = static_cast<double>(Q) * Q + 4.0 * P;  // negative for our fields
    const Complex th(Q / 2.0, std::sqrt(-disc) / 2.0);
    return re_.get_d() + im_.get_d() * th;
  }

 private:
  Rational re_{0};
  Rational im_{0};
};

/// Q(i): i^2 = -1.
using GaussianRational = QuadraticRational<-1, 0>;
/// Q(omega): omega^2 = -1 - omega, omega a primitive cube root of unity.
using EisensteinRational = QuadraticRational<-1, -1>;

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr bool ordered = true;
  static Rational from_int(long v) { return Rational(v); }
  static bool is_zero(const Rational& x, double /*scale*/ = 1.0, double /*eps*/ = kDefaultEps) {
    return sgn(x) == 0;
  }
  static double magnitude(const Rational& x) { return std::fabs(x.get_d()); }
  static std::string to_string(const Rational& x) { return x.get_str(); }

  /// Reduce to a primitive integer vector with positive first nonzero entry.
  static void normalize(std::span<Rational> v) {
    mpz_class lcm = 1;
    for (const auto& x : v) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
    mpz_class g = 0;
    for (auto& x : v) {
      x *= lcm;
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_num_mpz_t());
    }
    if (g == 0) return;
    int first_sign = 0;
    for (const auto& x : v) {
      if (sgn(x) != 0) {
        first_sign = sgn(x);
        break;
      }
    }
    if (first_sign < 0) g = -g;
    for (auto& x : v) x /= g;
  }
};

template <int P, int Q>
struct ScalarTraits<QuadraticRational<P, Q>> {
  using T = QuadraticRational<P, Q>;
  static constexpr bool exact = true;
  static constexpr bool ordered = false;
  static T from_int(long v) { return T(v); }
  static bool is_zero(const T& x, double = 1.0, double = kDefaultEps) { return x.is_zero(); }
  static double magnitude(const T& x) { return std::abs(x.to_complex()); }
  static std::string to_string(const T& x) {
    return x.re().get_str() + (sgn(x.im()) < 0 ? "" : "+") + x.im().get_str() + "*" +
           (Q == 0 ? "i" : "w");
  }
  /// Divide by the first nonzero entry.
  static void normalize(std::span<T> v) {
    for (const auto& x : v) {
      if (!x.is_zero()) {
        const T pivot = x;
        for (auto& y : v) y = y / pivot;
        return;
      }
    }
  }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr bool ordered = true;
  static double from_int(long v) { return static_cast<double>(v); }
  static bool is_zero(double x, double scale = 1.0, double eps = kDefaultEps) {
    return std::fabs(x) <= eps * scale;
  }
  static double magnitude(double x) { return std::fabs(x); }
  static std::string to_string(double x);
  /// Divide by the entry of largest magnitude, giving unit max-norm.
  static void normalize(std::span<double> v) {
    double best = 0.0;
    for (double x : v)
      if (std::fabs(x) > std::fabs(best)) best = x;
    if (best == 0.0) return;
    for (auto& x : v) x /= best;
  }
};

template <>
struct ScalarTraits<Complex> {
  static constexpr bool exact = false;
  static constexpr bool ordered = false;
  static Complex from_int(long v) { return {static_cast<double>(v), 0.0}; }
  static bool is_zero(const Complex& x, double scale = 1.0, double eps = kDefaultEps) {
    return std::abs(x) <= eps * scale;
  }
  static double magnitude(const Complex& x) { return std::abs(x); }
  static std::string to_string(const Complex& x);
  static void normalize(std::span<Complex> v) {
    Complex best = 0.0;
    for (const auto& x : v)
      if (std::abs(x) > std::abs(best)) best = x;
    if (best == 0.0) return;
    for (auto& x : v) x /= best;
  }
};

template <class T>
concept Scalar = requires { ScalarTraits<T>::exact; };

template <class T>
concept ExactScalar = Scalar<T> && ScalarTraits<T>::exact;

template <class T>
bool is_zero(const T& x, double scale = 1.0, double eps = kDefaultEps) {
  return ScalarTraits<T>::is_zero(x, scale, eps);
}

template <class T>
double magnitude(const T& x) {
  return ScalarTraits<T>::magnitude(x);
}

template <class T>
std::string scalar_to_string(const T& x) {
  return ScalarTraits<T>::to_string(x);
}

/// Sign of an ordered scalar; floating values within eps*scale count as zero.
template <class T>
int sign_of(const T& x, double scale = 1.0, double eps = kDefaultEps) {
  if (is_zero(x, scale, eps)) return 0;
  if constexpr (std::same_as<T, Rational>) {
    return sgn(x);
  } else {
    return x < 0 ? -1 : 1;
  }
}

std::string format_double(double x);

}  // namespace pcl
