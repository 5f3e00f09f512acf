#pragma once

#include <array>
#include <cstdint>
#include <concepts>
#include <vector>

#include "pcl/projective.hpp"
#include "pcl/random.hpp"

namespace pcl {

template <class T>
using Triple = std::array<Point<T>, 3>;
template <class T>
using LineTriple = std::array<Line<T>, 3>;

/// Permutation of {0,1,2} as the image list s(0), s(1), s(2).
using Perm3 = std::array<int, 3>;

inline constexpr Perm3 kIdentity{0, 1, 2};
inline constexpr Perm3 kSigma{1, 2, 0};
inline constexpr Perm3 kTau{1, 0, 2};

inline Perm3 compose(const Perm3& s, const Perm3& t) { return {s[t[0]], s[t[1]], s[t[2]]}; }

inline bool is_even(const Perm3& s) {
  int inversions = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) inversions += s[i] > s[j];
  return inversions % 2 == 0;
}

/// The six permutations in the order e, σ, σ², τ, τσ, τσ².
inline std::array<Perm3, 6> steiner_perms() {
  const Perm3 s2 = compose(kSigma, kSigma);
  return {kIdentity, kSigma, s2, kTau, compose(kTau, kSigma), compose(kTau, s2)};
}

/// s(B)_i = B_{s^-1(i)}.
template <class X>
std::array<X, 3> permute(const Perm3& s, const std::array<X, 3>& b) {
  std::array<X, 3> out = b;
  for (int i = 0; i < 3; ++i) out[s[i]] = b[i];
  return out;
}

namespace detail {

template <class T>
double residual_scale(const Vec3<T>& a, const Vec3<T>& b, const Vec3<T>& c) {
  return max_norm(a) * max_norm(b) * max_norm(c);
}

/// Pappus construction on homogeneous triples; works verbatim for its dual.
/// Returns the carrier of the three output objects.
template <class T>
Vec3<T> pappus_carrier(const std::array<Vec3<T>, 3>& a, const std::array<Vec3<T>, 3>& b, double eps) {
  const Vec3<T> la = cross(a[0], a[1]);
  const Vec3<T> lb = cross(b[0], b[1]);
  if (is_zero_vec(la, max_norm(a[0]) * max_norm(a[1]), eps) || is_zero_vec(lb, max_norm(b[0]) * max_norm(b[1]), eps))
    fail(ErrorKind::DegenerateInput, "repeated entry in a triple");
  if (!is_zero(det3(a[0], a[1], a[2]), residual_scale(a[0], a[1], a[2]), eps) ||
      !is_zero(det3(b[0], b[1], b[2]), residual_scale(b[0], b[1], b[2]), eps))
    fail(ErrorKind::DegenerateInput, "triple is not on a common carrier");
  for (int i = 0; i < 3; ++i) {
    if (is_zero(dot(a[i], lb), max_norm(a[i]) * max_norm(lb), eps) ||
        is_zero(dot(b[i], la), max_norm(b[i]) * max_norm(la), eps))
      fail(ErrorKind::DegenerateInput, "entry incident with the other carrier");
    for (int j = i + 1; j < 3; ++j)
      if (proportional(a[i], a[j], eps) || proportional(b[i], b[j], eps))
        fail(ErrorKind::DegenerateInput, "repeated entry in a triple");
  }
  std::array<Vec3<T>, 3> c;
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (int k = 0; k < 3; ++k) {
    const auto [i, j] = pairs[k];
    const Vec3<T> l1 = cross(a[i], b[j]);
    const Vec3<T> l2 = cross(a[j], b[i]);
    c[k] = cross(l1, l2);
    if (is_zero_vec(c[k], max_norm(l1) * max_norm(l2), eps)) fail(ErrorKind::DegenerateInput, "Pappus lines coincide");
    c[k] = normalized(c[k]);
  }
  Vec3<T> carrier = cross(c[0], c[1]);
  if (is_zero_vec(carrier, 1.0, eps)) carrier = cross(c[0], c[2]);
  if (is_zero_vec(carrier, 1.0, eps)) fail(ErrorKind::DegenerateInput, "Pappus points coincide");
  if (!is_zero(det3(c[0], c[1], c[2]), 1.0, eps))
    fail(ErrorKind::DegenerateInput, "Pappus points not collinear");
  return normalized(carrier);
}

template <class T, class Tag>
std::array<Vec3<T>, 3> coords_of(const std::array<Hom<T, Tag>, 3>& h) {
  return {h[0].coords(), h[1].coords(), h[2].coords()};
}

}  // namespace detail

/// Carrier line of a collinear triple.
template <class T>
Line<T> carrier(const Triple<T>& a, double eps = kDefaultEps) {
  return join(a[0], a[1], eps);
}

/// Line through the three Pappus points of A and B.
template <class T>
Line<T> pappus_line(const Triple<T>& a, const Triple<T>& b, double eps = kDefaultEps) {
  return Line<T>(detail::pappus_carrier(detail::coords_of(a), detail::coords_of(b), eps));
}

/// Common point of the three dual Pappus lines of two concurrent triples.
template <class T>
Point<T> dual_pappus_point(const LineTriple<T>& alpha, const LineTriple<T>& beta, double eps = kDefaultEps) {
  return Point<T>(detail::pappus_carrier(detail::coords_of(alpha), detail::coords_of(beta), eps));
}

template <class T>
struct SteinerLines {
  LineTriple<T> phi, psi;
  Point<T> even_point, odd_point;  // concurrency points of phi and psi
};

template <class T>
Point<T> concurrency_point(const LineTriple<T>& l, double eps) {
  const Vec3<T> p = cross(l[0].coords(), l[1].coords());
  if (is_zero_vec(p, 1.0, eps)) fail(ErrorKind::DegenerateInput, "coincident Pappus lines");
  if (!is_zero(dot(p, l[2].coords()), max_norm(p), eps))
    fail(ErrorKind::DegenerateInput, "Pappus lines not concurrent");
  return Point<T>(p);
}

template <class T>
SteinerLines<T> steiner_lines(const Triple<T>& a, const Triple<T>& b, double eps = kDefaultEps) {
  const auto perms = steiner_perms();
  SteinerLines<T> out;
  for (int k = 0; k < 3; ++k) {
    out.phi[k] = pappus_line(a, permute(perms[k], b), eps);
    out.psi[k] = pappus_line(a, permute(perms[k + 3], b), eps);
  }
  out.even_point = concurrency_point(out.phi, eps);
  out.odd_point = concurrency_point(out.psi, eps);
  return out;
}

template <class T>
struct RigbyPoint {
  Perm3 perm;
  bool even;
  Point<T> point;
};

/// The six points l*(phi, s(psi)) in the order of steiner_perms(); even ones
/// are checked to lie on the carrier of A, odd ones on the carrier of B.
template <class T>
std::array<RigbyPoint<T>, 6> rigby_points(const Triple<T>& a, const Triple<T>& b, double eps = kDefaultEps) {
  const auto lines = steiner_lines(a, b, eps);
  const Line<T> la = carrier(a, eps);
  const Line<T> lb = carrier(b, eps);
  const auto perms = steiner_perms();
  std::array<RigbyPoint<T>, 6> out;
  for (int k = 0; k < 6; ++k) {
    const bool even = is_even(perms[k]);
    const Point<T> p = dual_pappus_point(lines.phi, permute(perms[k], lines.psi), eps);
    if (!incident(p, even ? la : lb, eps))
      fail(ErrorKind::DegenerateInput, "Rigby point off its carrier");
    out[k] = {perms[k], even, p};
  }
  return out;
}

/// S_O(A) computed with the auxiliary triple B; O is the meet of the two
/// carriers.
template <class T>
Triple<T> steiner_map_with(const Triple<T>& a, const Triple<T>& b, double eps = kDefaultEps) {
  const auto lines = steiner_lines(a, b, eps);
  const Perm3 s2 = compose(kSigma, kSigma);
  Triple<T> out{dual_pappus_point(lines.phi, lines.psi, eps),
                dual_pappus_point(lines.phi, permute(s2, lines.psi), eps),
                dual_pappus_point(lines.phi, permute(kSigma, lines.psi), eps)};
  const Line<T> la = carrier(a, eps);
  for (const auto& p : out)
    if (!incident(p, la, eps)) fail(ErrorKind::DegenerateInput, "image point off the carrier");
  return out;
}

namespace detail {

/// Auxiliary triples on lines through O, deterministic and varied.
template <class T>
std::vector<Triple<T>> auxiliary_triples(const Point<T>& o) {
  const long dirs[][3] = {{1, 2, 3}, {-3, 1, 2}, {2, -5, 1}, {1, 1, -4}, {7, 3, 5}, {-2, 9, 4}};
  const long params[][3] = {{1, 2, -3}, {3, -1, 5}, {-2, 4, 7}, {5, 1, -6}};
  std::vector<Triple<T>> out;
  int k = 0;
  for (const auto& d : dirs) {
    const Vec3<T> dir = from_ints<T>(d[0], d[1], d[2]);
    const auto& t = params[k++ % 4];
    Triple<T> b;
    bool ok = true;
    for (int i = 0; i < 3 && ok; ++i) {
      const Vec3<T> v = o.coords() + scaled(dir, T(ScalarTraits<T>::from_int(t[i]) * T(max_norm(o.coords()))));
      if (is_zero_vec(v, 1.0, 0.0)) ok = false;
      else b[i] = Point<T>(v);
    }
    if (ok) out.push_back(b);
  }
  return out;
}

}  // namespace detail

/// Steiner map of a triple on a line a, for a point O on a. The image is
/// computed with two independent auxiliary triples and the results are
/// required to agree.
template <class T>
Triple<T> steiner_map(const Triple<T>& a, const Point<T>& o, double eps = kDefaultEps) {
  const Line<T> la = carrier(a, eps);
  if (!incident(o, la, eps)) fail(ErrorKind::DegenerateInput, "O is not on the carrier");
  for (const auto& p : a)
    if (p.same(o, eps)) fail(ErrorKind::DegenerateInput, "O coincides with a point of the triple");
  std::vector<Triple<T>> images;
  for (const auto& b : detail::auxiliary_triples(o)) {
    try {
      images.push_back(steiner_map_with(a, b, eps));
    } catch (const GeometryError&) {
      continue;
    }
    if (images.size() == 2) break;
  }
  if (images.size() < 2) fail(ErrorKind::DegenerateInput, "no admissible auxiliary triple");
  for (int k = 0; k < 3; ++k)
    if (!images[0][k].same(images[1][k], eps))
      fail(ErrorKind::DegenerateInput, "image depends on the auxiliary triple");
  return images[0];
}

// ---- binary cubics ---------------------------------------------------------

/// Coordinates on a line: X = s*origin + t*infinity has chart value t/s.
template <class T>
struct LineChart {
  Vec3<T> origin, infinity;

  /// Homogeneous chart value (t, s), so the affine value is first/second.
  std::array<T, 2> coordinate(const Point<T>& x, double eps = kDefaultEps) const {
    const Vec3<T> w = cross(origin, infinity);
    const Vec3<T> ws = cross(x.coords(), infinity);
    const Vec3<T> wt = cross(origin, x.coords());
    std::size_t k = 0;
    for (std::size_t i = 1; i < 3; ++i)
      if (magnitude(w[i]) > magnitude(w[k])) k = i;
    if (is_zero(w[k], max_norm(origin) * max_norm(infinity), eps))
      fail(ErrorKind::DegenerateInput, "chart points coincide");
    return {T(wt[k] / w[k]), T(ws[k] / w[k])};
  }

  Point<T> point(const std::array<T, 2>& ts) const { return Point<T>(scaled(origin, ts[1]) + scaled(infinity, ts[0])); }
};

/// Chart on the carrier of a with O at 0; the point at infinity is a fixed
/// choice, which the secant coordinate does not depend on.
template <class T>
LineChart<T> chart_at(const Line<T>& a, const Point<T>& o, double eps = kDefaultEps) {
  for (int k = 0; k < 3; ++k) {
    Vec3<T> e = from_ints<T>(k == 0, k == 1, k == 2);
    const Vec3<T> v = cross(a.coords(), e);
    if (is_zero_vec(v, max_norm(a.coords()), eps) || proportional(v, o.coords(), eps)) continue;
    return {o.coords(), normalized(v)};
  }
  fail(ErrorKind::DegenerateInput, "no chart on the line");
}

/// Binary cubic c0 Z^3 + c1 Z^2 W + c2 Z W^2 + c3 W^3, up to scale.
template <class T>
struct BinaryCubic {
  std::array<T, 4> c;

  T eval(const std::array<T, 2>& zw) const {
    const T& z = zw[0];
    const T& w = zw[1];
    return ((c[0] * z + c[1] * w) * z + c[2] * w * w) * z + c[3] * w * w * w;
  }

  friend bool operator==(const BinaryCubic& f, const BinaryCubic& g) {
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (!is_zero(T(f.c[i] * g.c[j] - f.c[j] * g.c[i]), max_norm(f.c) * max_norm(g.c), 1e-9)) return false;
    return true;
  }
};

/// Product of the linear forms s Z - t W of three points (t : s).
template <class T>
BinaryCubic<T> cubic_from_roots(const std::array<std::array<T, 2>, 3>& r) {
  // (s1 Z - t1 W)(s2 Z - t2 W)(s3 Z - t3 W)
  const T& t1 = r[0][0];
  const T& s1 = r[0][1];
  const T& t2 = r[1][0];
  const T& s2 = r[1][1];
  const T& t3 = r[2][0];
  const T& s3 = r[2][1];
  BinaryCubic<T> f{{T(s1 * s2 * s3), T(-(t1 * s2 * s3 + s1 * t2 * s3 + s1 * s2 * t3)),
                    T(t1 * t2 * s3 + t1 * s2 * t3 + s1 * t2 * t3), T(-(t1 * t2 * t3))}};
  ScalarTraits<T>::normalize(std::span<T>(f.c));
  return f;
}

template <class T>
BinaryCubic<T> triple_to_cubic(const Triple<T>& a, const LineChart<T>& chart, double eps = kDefaultEps) {
  return cubic_from_roots<T>({chart.coordinate(a[0], eps), chart.coordinate(a[1], eps), chart.coordinate(a[2], eps)});
}

/// Roots (t : s) of a complex cubic, roots at infinity included.
std::array<std::array<Complex, 2>, 3> cubic_roots(const BinaryCubic<Complex>& f);

inline Triple<Complex> cubic_to_triple(const BinaryCubic<Complex>& f, const LineChart<Complex>& chart) {
  const auto r = cubic_roots(f);
  return {chart.point(r[0]), chart.point(r[1]), chart.point(r[2])};
}

/// Hessian (A, B, C) of f, the quadratic A Z^2 + B Z W + C W^2.
template <class T>
std::array<T, 3> hessian(const BinaryCubic<T>& f) {
  const T three = ScalarTraits<T>::from_int(3);
  const T a = f.c[0];
  const T b = f.c[1] / three;
  const T c = f.c[2] / three;
  const T d = f.c[3];
  return {T(a * c - b * b), T(a * d - b * c), T(b * d - c * c)};
}

/// Same Hessian up to scale, i.e. the same secant of the twisted cubic.
template <class T>
bool same_secant(const BinaryCubic<T>& f, const BinaryCubic<T>& g, double eps = kDefaultEps) {
  const auto hf = hessian(f);
  const auto hg = hessian(g);
  return proportional(Vec3<T>{hf[0], hf[1], hf[2]}, Vec3<T>{hg[0], hg[1], hg[2]}, eps);
}

template <class T>
BinaryCubic<T> to_complex_cubic(const BinaryCubic<T>& f) {
  return f;
}

inline BinaryCubic<Complex> to_complex_cubic(const BinaryCubic<Rational>& f) {
  return {{Complex(f.c[0].get_d()), Complex(f.c[1].get_d()), Complex(f.c[2].get_d()), Complex(f.c[3].get_d())}};
}

/// Point x on the secant through p^3 and q^3 (Hessian roots, in chart
/// values (t : s)): p -> 0, q -> infinity, cubics with a root at the chart
/// origin -> -1. A cubic on the twisted cubic reports x = 0 with p = q.
struct SecantCoordinate {
  std::array<Complex, 2> p, q;
  Complex x;
  bool on_curve = false;
};

SecantCoordinate secant_coordinate(const BinaryCubic<Complex>& f, double eps = 1e-12);

/// Rational cubic with known rational roots (t : s): the Hessian and its
/// discriminant are formed exactly and f is evaluated in product form.
SecantCoordinate secant_coordinate(const BinaryCubic<Rational>& f, const std::array<std::array<Rational, 2>, 3>& roots,
                                   double eps = 1e-12);
SecantCoordinate secant_coordinate(const BinaryCubic<GaussianRational>& f,
                                   const std::array<std::array<GaussianRational, 2>, 3>& roots, double eps = 1e-12);

/// The same with p and q exchanged (x -> 1/x).
inline SecantCoordinate swapped(const SecantCoordinate& s) {
  return {s.q, s.p, Complex(1.0) / s.x, s.on_curve};
}

struct SquareLawResult {
  Complex x, image_x;
  double residual = 0.0;         // |x(S) - x^2| relative to max(1, |x|^2)
  double secant_residual = 0.0;  // mismatch of the Hessian roots
};

/// Compares the secant coordinates of a cubic and of its Steiner image:
/// same endpoints, image coordinate the square.
SquareLawResult square_law(const SecantCoordinate& f, const SecantCoordinate& image);

template <class T>
SecantCoordinate secant_coordinate_of(const Triple<T>& a, const LineChart<T>& chart, double eps = kDefaultEps) {
  if constexpr (std::same_as<T, Rational> || std::same_as<T, GaussianRational>) {
    const std::array<std::array<T, 2>, 3> r{chart.coordinate(a[0], eps), chart.coordinate(a[1], eps),
                                            chart.coordinate(a[2], eps)};
    return secant_coordinate(cubic_from_roots<T>(r), r);
  } else {
    return secant_coordinate(to_complex_cubic(triple_to_cubic(a, chart, eps)));
  }
}

template <class T>
SquareLawResult verify_square_law(const Triple<T>& a, const Point<T>& o, double eps = kDefaultEps) {
  const auto image = steiner_map(a, o, eps);
  const auto chart = chart_at(carrier(a, eps), o, eps);
  return square_law(secant_coordinate_of(a, chart, eps), secant_coordinate_of(image, chart, eps));
}

/// Angle t in [0, 1) of a unimodular secant coordinate x = exp(2 pi i t).
double circle_parameter(const Complex& x);

// ---- sampling --------------------------------------------------------------

/// Random triple on a random line with a point O on it, all distinct.
struct RationalSample {
  Triple<Rational> a;
  Point<Rational> o;
};

RationalSample random_rational_sample(Rng& rng, long bound = 50);

struct ComplexSample {
  Triple<Complex> a;
  Point<Complex> o;
};

ComplexSample random_complex_sample(Rng& rng);

/// Complex sample with Gaussian rational coordinates, so constructions on it
/// stay exact.
struct GaussianSample {
  Triple<GaussianRational> a;
  Point<GaussianRational> o;
};

GaussianSample random_gaussian_sample(Rng& rng, long bound = 20);

/// Random auxiliary triple on a random line through O.
Triple<Rational> random_auxiliary(Rng& rng, const Point<Rational>& o, long bound = 50);

struct DoublingResult {
  double t = 0.0, image_t = 0.0;
  double residual = 0.0;  // circular distance between image_t and 2t mod 1
};

/// Real triple: the secant coordinates are unimodular and S_O doubles the angle.
DoublingResult verify_doubling(const Triple<Rational>& a, const Point<Rational>& o);

}  // namespace pcl
