#pragma once

#include <span>
#include <vector>

#include "pcl/projective.hpp"

namespace pcl {

/// Conic as a symmetric coefficient matrix up to scale: p^T m p = 0.
template <class T>
struct Conic {
  Matrix3<T> m{};

  T eval(const Vec3<T>& p) const { return dot(p, mul(m, p)); }
  T eval(const Point<T>& p) const { return eval(p.coords()); }

  /// Value of the dual conic adj(m) on a line; zero iff the line is tangent.
  T eval_dual(const Vec3<T>& l) const { return dot(l, mul(adjugate(m), l)); }

  bool contains(const Vec3<T>& p, double eps = kDefaultEps) const {
    const double s = max_norm(m) * max_norm(p) * max_norm(p);
    return is_zero(eval(p), s, eps);
  }
  bool contains(const Point<T>& p, double eps = kDefaultEps) const { return contains(p.coords(), eps); }

  /// Dual conic: the conic of tangent lines, matrix adj(m).
  Conic dual() const { return {adjugate(m)}; }
};

/// Standard conic x^2 + y^2 - z^2 = 0.
template <class T>
Conic<T> unit_circle() {
  Conic<T> c{identity3<T>()};
  c.m[2][2] = ScalarTraits<T>::from_int(-1);
  return c;
}

/// Row (x^2, xy, y^2, xz, yz, z^2) of the conic incidence system.
template <class T>
std::vector<T> conic_monomials(const Vec3<T>& p) {
  return {T(p[0] * p[0]), T(p[0] * p[1]), T(p[1] * p[1]), T(p[0] * p[2]), T(p[1] * p[2]),
          T(p[2] * p[2])};
}

template <class T>
Conic<T> conic_from_coefficients(const std::vector<T>& k) {
  const T two = ScalarTraits<T>::from_int(2);
  Conic<T> c;
  c.m[0][0] = k[0];
  c.m[1][1] = k[2];
  c.m[2][2] = k[5];
  c.m[0][1] = c.m[1][0] = T(k[1] / two);
  c.m[0][2] = c.m[2][0] = T(k[3] / two);
  c.m[1][2] = c.m[2][1] = T(k[4] / two);
  return c;
}

/// The unique conic through five points: kernel of the 5x6 incidence system.
template <class T>
Conic<T> conic_through_five(std::span<const Vec3<T>> pts, double eps = kDefaultEps) {
  if (pts.size() != 5) fail(ErrorKind::InvalidArgument, "conic_through_five needs 5 points");
  std::vector<std::vector<T>> rows;
  for (const auto& p : pts) {
    Vec3<T> q = p;
    if constexpr (!ScalarTraits<T>::exact) {
      const double s = max_norm(q);
      for (auto& x : q) x = x / T(s);
    }
    rows.push_back(conic_monomials(q));
  }
  auto ns = null_space(rows, eps);
  if (ns.rank < 5 || ns.kernel.empty())
    fail(ErrorKind::UnderdeterminedConic, "incidence system rank " + std::to_string(ns.rank));
  if constexpr (ScalarTraits<T>::exact) ScalarTraits<T>::normalize(std::span<T>(ns.kernel));
  return conic_from_coefficients(ns.kernel);
}

template <class T>
Conic<T> conic_through_five(const std::vector<Point<T>>& pts, double eps = kDefaultEps) {
  std::vector<Vec3<T>> raw;
  for (const auto& p : pts) raw.push_back(p.coords());
  return conic_through_five(std::span<const Vec3<T>>(raw), eps);
}

template <class T>
bool is_degenerate(const Conic<T>& c, double eps = kDefaultEps) {
  const double s = max_norm(c.m);
  return is_zero(det(c.m), s * s * s, eps);
}

/// Polar line m*p.
template <class T>
Line<T> polar(const Point<T>& p, const Conic<T>& c) {
  return Line<T>(mul(c.m, p.coords()));
}

/// Pole adj(m)*l; requires a nondegenerate conic.
template <class T>
Point<T> pole(const Line<T>& l, const Conic<T>& c, double eps = kDefaultEps) {
  if (is_degenerate(c, eps)) fail(ErrorKind::DegenerateConic, "pole w.r.t. degenerate conic");
  return Point<T>(mul(adjugate(c.m), l.coords()));
}

/// Point (1 - t^2 : 2t : 1 + t^2) of x^2 + y^2 = z^2.
template <class T>
Point<T> rational_conic_point(const T& t) {
  const T one = ScalarTraits<T>::from_int(1);
  const T two = ScalarTraits<T>::from_int(2);
  return Point<T>(T(one - t * t), T(two * t), T(one + t * t));
}

/// Tangent line to x^2 + y^2 = z^2 at rational_conic_point(t).
template <class T>
Line<T> tangent_at(const T& t) {
  return polar(rational_conic_point(t), unit_circle<T>());
}

/// Image of a conic under the point map v -> a v: matrix adj(a)^T m adj(a).
template <class T>
Conic<T> transform_conic(const Conic<T>& c, const Matrix3<T>& a) {
  const Matrix3<T> inv = adjugate(a);
  return {mul(transpose(inv), mul(c.m, inv))};
}

}  // namespace pcl
