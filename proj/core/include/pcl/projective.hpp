#pragma once

#include <ostream>
#include <string>

#include "pcl/errors.hpp"
#include "pcl/linalg.hpp"

namespace pcl {

/// Which plane a coordinate triple lives in.
enum class Space { Plane, Dual };

inline Space opposite(Space s) { return s == Space::Plane ? Space::Dual : Space::Plane; }

struct PointTag {};
struct LineTag {};

/// Homogeneous coordinate triple, stored normalized so that equality of
/// projective objects is equality of the stored triples (exact backends) or
/// proportionality within tolerance (floating backends).
template <class T, class Tag>
class Hom {
 public:
  Hom() = default;
  explicit Hom(Vec3<T> coords) : v_(normalized(std::move(coords))) {
    if (is_zero_vec(v_, 1.0, 0.0)) fail(ErrorKind::InvalidArgument, "zero coordinate triple");
  }
  Hom(const T& x, const T& y, const T& z) : Hom(Vec3<T>{x, y, z}) {}

  const Vec3<T>& coords() const { return v_; }
  const T& operator[](std::size_t i) const { return v_[i]; }

  /// Projective equality (proportional coordinates).
  bool same(const Hom& o, double eps = kDefaultEps) const { return proportional(v_, o.v_, eps); }

  friend bool operator==(const Hom& a, const Hom& b) {
    if constexpr (ScalarTraits<T>::exact) {
      return a.v_ == b.v_;
    } else {
      return a.same(b);
    }
  }

 private:
  Vec3<T> v_{};
};

template <class T>
using Point = Hom<T, PointTag>;
template <class T>
using Line = Hom<T, LineTag>;

template <class T>
Line<T> join(const Point<T>& p, const Point<T>& q, double eps = kDefaultEps) {
  const Vec3<T> l = cross(p.coords(), q.coords());
  if (is_zero_vec(l, max_norm(p.coords()) * max_norm(q.coords()), eps))
    fail(ErrorKind::CoincidentPoints, "join of proportional points");
  return Line<T>(l);
}

template <class T>
Point<T> meet(const Line<T>& l, const Line<T>& m, double eps = kDefaultEps) {
  const Vec3<T> p = cross(l.coords(), m.coords());
  if (is_zero_vec(p, max_norm(l.coords()) * max_norm(m.coords()), eps))
    fail(ErrorKind::CoincidentLines, "meet of proportional lines");
  return Point<T>(p);
}

/// Raw incidence value dot(p, l); zero iff p lies on l.
template <class T>
T incidence(const Point<T>& p, const Line<T>& l) {
  return dot(p.coords(), l.coords());
}

template <class T>
bool incident(const Point<T>& p, const Line<T>& l, double eps = kDefaultEps) {
  return is_zero(incidence(p, l), max_norm(p.coords()) * max_norm(l.coords()), eps);
}

/// Determinant of three triples, scaled tolerance check for collinearity
/// (points) or concurrency (lines).
template <class T>
bool dependent(const Vec3<T>& a, const Vec3<T>& b, const Vec3<T>& c, double eps = kDefaultEps) {
  return is_zero(det3(a, b, c), max_norm(a) * max_norm(b) * max_norm(c), eps);
}

template <class T>
bool collinear(const Point<T>& a, const Point<T>& b, const Point<T>& c, double eps = kDefaultEps) {
  return dependent(a.coords(), b.coords(), c.coords(), eps);
}

template <class T>
bool concurrent(const Line<T>& a, const Line<T>& b, const Line<T>& c, double eps = kDefaultEps) {
  return dependent(a.coords(), b.coords(), c.coords(), eps);
}

/// Cross-ratio (a,b;c,d) = |ac||bd| / (|bc||ad|) of four dependent triples
/// (collinear points or concurrent lines). The 2x2 brackets use the two
/// coordinates complementary to the dominant coordinate of the common span.
template <class T>
T cross_ratio(const Vec3<T>& a, const Vec3<T>& b, const Vec3<T>& c, const Vec3<T>& d,
              double eps = kDefaultEps) {
  const Vec3<T>* pts[4] = {&a, &b, &c, &d};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (proportional(*pts[i], *pts[j], eps)) fail(ErrorKind::RepeatedPoint);
  const Vec3<T> span = cross(a, b);
  if (!dependent(a, b, c, eps) || !dependent(a, b, d, eps)) fail(ErrorKind::NotCollinear);
  std::size_t drop = 0;
  for (std::size_t k = 1; k < 3; ++k)
    if (magnitude(span[k]) > magnitude(span[drop])) drop = k;
  const std::size_t i = drop == 0 ? 1 : 0;
  const std::size_t j = drop == 2 ? 1 : 2;
  auto bracket = [&](const Vec3<T>& x, const Vec3<T>& y) { return T(x[i] * y[j] - x[j] * y[i]); };
  return T(bracket(a, c) * bracket(b, d) / (bracket(b, c) * bracket(a, d)));
}

template <class T, class Tag>
T cross_ratio(const Hom<T, Tag>& a, const Hom<T, Tag>& b, const Hom<T, Tag>& c,
              const Hom<T, Tag>& d, double eps = kDefaultEps) {
  return cross_ratio(a.coords(), b.coords(), c.coords(), d.coords(), eps);
}

template <class T>
std::string to_string(const Vec3<T>& v) {
  return "(" + scalar_to_string(v[0]) + ":" + scalar_to_string(v[1]) + ":" +
         scalar_to_string(v[2]) + ")";
}

template <class T, class Tag>
std::ostream& operator<<(std::ostream& os, const Hom<T, Tag>& h) {
  return os << to_string(h.coords());
}

}  // namespace pcl
