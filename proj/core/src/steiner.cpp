#include "pcl/steiner.hpp"

#include <cmath>
#include <numbers>

#include "pcl/numeric.hpp"

namespace pcl {

namespace {

using Root = std::array<Complex, 2>;

double root_distance(const Root& a, const Root& b) {
  const double na = std::hypot(std::abs(a[0]), std::abs(a[1]));
  const double nb = std::hypot(std::abs(b[0]), std::abs(b[1]));
  return std::abs(a[0] * b[1] - a[1] * b[0]) / (na * nb);
}

double scale_of(const BinaryCubic<Complex>& f) {
  double m = 0.0;
  for (const auto& c : f.c) m = std::max(m, std::abs(c));
  return m;
}

/// Roots of a Z^2 + b Z W + c W^2 as (t : s).
std::array<Root, 2> quadratic_form_roots(Complex a, Complex b, Complex c, double eps) {
  const double m = std::max({std::abs(a), std::abs(b), std::abs(c)});
  if (std::abs(a) <= eps * m) return {Root{1.0, 0.0}, Root{-c, b}};
  const auto z = quadratic_roots(a, b, c);
  return {Root{z[0], 1.0}, Root{z[1], 1.0}};
}

}  // namespace

std::array<std::array<Complex, 2>, 3> cubic_roots(const BinaryCubic<Complex>& f) {
  const double m = scale_of(f);
  if (m == 0.0) fail(ErrorKind::InvalidArgument, "zero cubic");
  constexpr double tiny = 1e-13;
  if (std::abs(f.c[0]) > tiny * m) {
    const auto z = polynomial_roots({f.c[0], f.c[1], f.c[2], f.c[3]});
    return {Root{z[0], 1.0}, Root{z[1], 1.0}, Root{z[2], 1.0}};
  }
  const auto r = quadratic_form_roots(f.c[1], f.c[2], f.c[3], tiny);
  return {Root{1.0, 0.0}, r[0], r[1]};
}

namespace {

/// Roots of A Z^2 + B Z W + C W^2 given its discriminant, as unit (t : s).
std::array<Root, 2> roots_with_disc(Complex a, Complex b, Complex c, Complex disc, double eps) {
  const double m = std::max({std::abs(a), std::abs(b), std::abs(c)});
  std::array<Root, 2> r;
  if (std::abs(a) <= eps * m) {
    r = {Root{1.0, 0.0}, Root{-c, b}};
  } else {
    Complex sq = std::sqrt(disc);
    if (std::real(std::conj(b) * sq) < 0.0) sq = -sq;
    const Complex q = -0.5 * (b + sq);
    r = {Root{q, a}, Root{c, q}};
  }
  for (auto& root : r) {
    const double n = std::hypot(std::abs(root[0]), std::abs(root[1]));
    root = {root[0] / n, root[1] / n};
  }
  return r;
}

template <class Eval>
SecantCoordinate secant_core(const std::array<Complex, 3>& h, Complex disc, Eval f, double eps) {
  SecantCoordinate out;
  const double hm = std::max({std::abs(h[0]), std::abs(h[1]), std::abs(h[2])});
  if (std::abs(disc) <= eps * hm * hm) fail(ErrorKind::CoincidentHessianRoots, "cubic on the tangent developable");
  const auto pq = roots_with_disc(h[0], h[1], h[2], disc, eps);
  out.p = pq[0];
  out.q = pq[1];
  if (std::abs(out.p[0]) <= eps || std::abs(out.q[0]) <= eps)
    fail(ErrorKind::SecantThroughOrigin, "secant passes through the cube of the origin");
  const Complex fp = f(out.p);
  const Complex fq = f(out.q);
  if (std::abs(fq) == 0.0) fail(ErrorKind::CoincidentHessianRoots, "cubic at the far secant endpoint");
  const Complex ratio = out.q[0] / out.p[0];
  out.x = -fp / fq * ratio * ratio * ratio;
  return out;
}

Complex to_complex(const Rational& r, const Rational& scale) { return Complex(Rational(r / scale).get_d()); }

Rational magnitude(const Rational& r) { return abs(r); }
Rational magnitude(const GaussianRational& z) { return std::max(abs(z.re()), abs(z.im())); }

Complex to_complex(const GaussianRational& z, const Rational& scale) {
  return {Rational(z.re() / scale).get_d(), Rational(z.im() / scale).get_d()};
}

template <class T>
SecantCoordinate exact_secant(const BinaryCubic<T>& f, const std::array<std::array<T, 2>, 3>& roots, double eps) {
  std::array<Root, 3> r;
  for (int i = 0; i < 3; ++i) {
    const Rational m = std::max(magnitude(roots[i][0]), magnitude(roots[i][1]));
    r[i] = {to_complex(roots[i][0], m), to_complex(roots[i][1], m)};
  }
  const auto h = hessian(f);
  const Rational hm = std::max({magnitude(h[0]), magnitude(h[1]), magnitude(h[2])});
  if (sgn(hm) == 0) {
    SecantCoordinate out;
    out.p = out.q = r[0];
    out.x = 0.0;
    out.on_curve = true;
    return out;
  }
  const T disc = h[1] * h[1] - T(4) * h[0] * h[2];
  if (disc == T(0)) fail(ErrorKind::CoincidentHessianRoots, "cubic on the tangent developable");
  const std::array<Complex, 3> hc{to_complex(h[0], hm), to_complex(h[1], hm), to_complex(h[2], hm)};
  auto eval = [&](const Root& p) {
    Complex v = 1.0;
    for (const auto& ri : r) v *= ri[1] * p[0] - ri[0] * p[1];
    return v;
  };
  return secant_core(hc, to_complex(disc, Rational(hm * hm)), eval, eps);
}

}  // namespace

SecantCoordinate secant_coordinate(const BinaryCubic<Complex>& f, double eps) {
  const double m = scale_of(f);
  if (m == 0.0) fail(ErrorKind::InvalidArgument, "zero cubic");
  BinaryCubic<Complex> g = f;
  for (auto& c : g.c) c /= m;
  const auto h = hessian(g);
  const double hm = std::max({std::abs(h[0]), std::abs(h[1]), std::abs(h[2])});
  if (hm <= eps) {
    SecantCoordinate out;
    out.p = out.q = cubic_roots(g)[0];
    out.x = 0.0;
    out.on_curve = true;
    return out;
  }
  return secant_core(h, h[1] * h[1] - 4.0 * h[0] * h[2], [&](const Root& r) { return g.eval(r); }, eps);
}

SecantCoordinate secant_coordinate(const BinaryCubic<Rational>& f, const std::array<std::array<Rational, 2>, 3>& roots,
                                   double eps) {
  return exact_secant(f, roots, eps);
}

SecantCoordinate secant_coordinate(const BinaryCubic<GaussianRational>& f,
                                   const std::array<std::array<GaussianRational, 2>, 3>& roots, double eps) {
  return exact_secant(f, roots, eps);
}

SquareLawResult square_law(const SecantCoordinate& sf, const SecantCoordinate& image) {
  SecantCoordinate sg = image;
  SquareLawResult out;
  out.x = sf.x;
  if (sf.on_curve) {
    out.image_x = sg.x;
    out.residual = std::abs(sg.x);
    out.secant_residual = root_distance(sf.p, sg.p);
    return out;
  }
  const double direct = root_distance(sf.p, sg.p) + root_distance(sf.q, sg.q);
  const double crossed = root_distance(sf.p, sg.q) + root_distance(sf.q, sg.p);
  if (crossed < direct) sg = swapped(sg);
  out.image_x = sg.x;
  out.secant_residual = std::min(direct, crossed);
  out.residual = std::abs(sg.x - sf.x * sf.x) / std::max(1.0, std::norm(sf.x));
  return out;
}

double circle_parameter(const Complex& x) {
  double t = std::arg(x) / (2.0 * std::numbers::pi);
  if (t < 0.0) t += 1.0;
  return t >= 1.0 ? 0.0 : t;
}

RationalSample random_rational_sample(Rng& rng, long bound) {
  for (;;) {
    const Vec3<Rational> p = from_ints<Rational>(rng.nonzero_int(bound), rng.uniform_int(-bound, bound),
                                                 rng.uniform_int(-bound, bound));
    const Vec3<Rational> q = from_ints<Rational>(rng.uniform_int(-bound, bound), rng.nonzero_int(bound),
                                                 rng.uniform_int(-bound, bound));
    if (proportional(p, q)) continue;
    std::array<Rational, 3> k{rng.rational(bound), rng.rational(bound), rng.rational(bound)};
    if (sgn(k[0]) == 0 || sgn(k[1]) == 0 || sgn(k[2]) == 0 || k[0] == k[1] || k[0] == k[2] || k[1] == k[2]) continue;
    RationalSample s;
    s.o = Point<Rational>(p);
    for (int i = 0; i < 3; ++i) s.a[i] = Point<Rational>(p + scaled(q, k[i]));
    return s;
  }
}

ComplexSample random_complex_sample(Rng& rng) {
  auto c = [&] { return Complex(rng.uniform(-1, 1), rng.uniform(-1, 1)); };
  for (;;) {
    const Vec3<Complex> p{c(), c(), c()};
    const Vec3<Complex> q{c(), c(), c()};
    if (std::abs(cross(p, q)[0]) + std::abs(cross(p, q)[1]) + std::abs(cross(p, q)[2]) < 0.1) continue;
    std::array<Complex, 3> k{2.0 * c(), 2.0 * c(), 2.0 * c()};
    bool ok = true;
    for (int i = 0; i < 3; ++i) {
      if (std::abs(k[i]) < 0.1) ok = false;
      for (int j = i + 1; j < 3; ++j)
        if (std::abs(k[i] - k[j]) < 0.1) ok = false;
    }
    if (!ok) continue;
    ComplexSample s;
    s.o = Point<Complex>(p);
    for (int i = 0; i < 3; ++i) s.a[i] = Point<Complex>(p + scaled(q, k[i]));
    return s;
  }
}

GaussianSample random_gaussian_sample(Rng& rng, long bound) {
  auto g = [&] { return GaussianRational(rng.rational(bound), rng.rational(bound)); };
  for (;;) {
    const Vec3<GaussianRational> p{g(), g(), g()};
    const Vec3<GaussianRational> q{g(), g(), g()};
    if (proportional(p, q)) continue;
    std::array<GaussianRational, 3> k{g(), g(), g()};
    if (k[0].is_zero() || k[1].is_zero() || k[2].is_zero() || k[0] == k[1] || k[0] == k[2] || k[1] == k[2]) continue;
    GaussianSample s;
    s.o = Point<GaussianRational>(p);
    for (int i = 0; i < 3; ++i) s.a[i] = Point<GaussianRational>(p + scaled(q, k[i]));
    return s;
  }
}

Triple<Rational> random_auxiliary(Rng& rng, const Point<Rational>& o, long bound) {
  for (;;) {
    const Vec3<Rational> d = from_ints<Rational>(rng.uniform_int(-bound, bound), rng.uniform_int(-bound, bound),
                                                 rng.uniform_int(-bound, bound));
    if (is_zero_vec(d) || proportional(d, o.coords())) continue;
    std::array<Rational, 3> k{rng.rational(bound), rng.rational(bound), rng.rational(bound)};
    if (sgn(k[0]) == 0 || sgn(k[1]) == 0 || sgn(k[2]) == 0 || k[0] == k[1] || k[0] == k[2] || k[1] == k[2]) continue;
    Triple<Rational> b;
    for (int i = 0; i < 3; ++i) b[i] = Point<Rational>(o.coords() + scaled(d, k[i]));
    return b;
  }
}

DoublingResult verify_doubling(const Triple<Rational>& a, const Point<Rational>& o) {
  const auto law = verify_square_law(a, o);
  DoublingResult out;
  out.t = circle_parameter(law.x);
  out.image_t = circle_parameter(law.image_x);
  double expected = std::fmod(2.0 * out.t, 1.0);
  double d = std::fabs(out.image_t - expected);
  d = std::min(d, 1.0 - d);
  out.residual = std::max({d, std::fabs(std::abs(law.x) - 1.0), std::fabs(std::abs(law.image_x) - 1.0)});
  return out;
}

}  // namespace pcl
