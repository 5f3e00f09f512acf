#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pcl/lie_skewer.hpp"

using namespace pcl;
using Q = Rational;
using G = GaussianRational;

namespace {

Vec3<Q> rvec(Rng& rng) {
  return {rng.rational(30), rng.rational(30), rng.rational(30)};
}

SL2Element<Q> rsl2(Rng& rng) { return {rng.rational(20), rng.rational(20), rng.rational(20)}; }

EllipticLine<Q> rline(Rng& rng) { return {rvec(rng), rvec(rng)}; }

G rg(Rng& rng) { return {Q(rng.uniform_int(-9, 9)), Q(rng.uniform_int(-9, 9))}; }

HypLine<G> rform(Rng& rng) { return {rg(rng), rg(rng), rg(rng)}; }

/// Form (y - p x)(y - q x).
HypLine<Complex> form_of(Complex p, Complex q) { return {p * q, -(p + q) / 2.0, Complex(1.0)}; }

/// Endpoints: roots of a + 2b m + c m^2 = 0 in m = y/x.
std::array<Complex, 2> endpoints(const HypLine<Complex>& f) {
  const Complex disc = std::sqrt(f.b * f.b - f.a * f.c);
  return {(-f.b + disc) / f.c, (-f.b - disc) / f.c};
}

Complex cross_ratio(Complex a, Complex b, Complex c, Complex d) { return ((a - c) * (b - d)) / ((a - d) * (b - c)); }

HypLine<Complex> to_complex(const HypLine<G>& f) { return {f.a.to_complex(), f.b.to_complex(), f.c.to_complex()}; }

double norm3(const Vec3<double>& v) { return std::sqrt(dot(v, v)); }

}  // namespace

TEST_CASE("jacobi and spherical altitudes") {
  const auto e1 = from_ints<Q>(1, 0, 0), e2 = from_ints<Q>(0, 1, 0), e3 = from_ints<Q>(0, 0, 1);
  CHECK(is_zero_vec(jacobi_residual(e1, e2, e3)));
  Rng rng(31);
  for (int t = 0; t < 100; ++t) {
    const auto a = rvec(rng), b = rvec(rng), c = rvec(rng);
    CHECK(is_zero_vec(jacobi_residual(a, b, c)));
    CHECK(is_zero_vec(jacobi_residual(a, a, c)));
  }
  // the cross product is not associative, so the cyclic sum is not vacuous
  CHECK_FALSE(is_zero_vec(cross(cross(e1, e1 + e2), e2 + e3) - cross(e1, cross(e1 + e2, e2 + e3))));

  for (int t = 0; t < 100; ++t) {
    const auto a = rvec(rng), b = rvec(rng), c = rvec(rng);
    if (sgn(det3(a, b, c)) == 0) continue;
    CHECK(sgn(altitude_determinant(a, b, c)) == 0);
    CHECK(spherical_altitudes_check(a, b, c));
    // the altitude from C is the great circle through C and the pole of AB
    const auto alt = cross(cross(a, b), c);
    CHECK(sgn(dot(alt, c)) == 0);
    CHECK(sgn(dot(alt, cross(a, b))) == 0);
  }
  CHECK(spherical_altitudes_check(from_ints<Q>(2, 1, 1), from_ints<Q>(1, 2, 1), from_ints<Q>(1, 1, 2)));
  try {
    spherical_altitudes_check(e1, e2, e1 + e2);
    FAIL("expected DegenerateTriangle");
  } catch (const GeometryError& e) {
    CHECK(e.kind() == ErrorKind::DegenerateTriangle);
  }
}

TEST_CASE("tomihisa identity in sl2") {
  using S = SL2Element<Q>;
  const S e = S::e(), f = S::f(), h = S::h();
  // structure constants [h,e] = 2e, [h,f] = -2f, [e,f] = h
  CHECK(bracket(h, e) == S{Q(0), Q(2), Q(0)});
  CHECK(bracket(h, f) == S{Q(0), Q(0), Q(-2)});
  CHECK(bracket(e, f) == h);
  CHECK(tomihisa_residual(e, f, h, e, f).is_zero());
  Rng rng(32);
  const S x = rsl2(rng);
  CHECK(tomihisa_residual(x, x, x, x, x).is_zero());
  for (int t = 0; t < 100; ++t)
    CHECK(tomihisa_residual(rsl2(rng), rsl2(rng), rsl2(rng), rsl2(rng), rsl2(rng)).is_zero());
  // one term alone does not vanish
  CHECK_FALSE(bracket(e, bracket(bracket(f, h), bracket(e, f))).is_zero());
  // complex rational entries
  using SG = SL2Element<G>;
  for (int t = 0; t < 20; ++t) {
    auto r = [&] { return SG{rg(rng), rg(rng), rg(rng)}; };
    CHECK(tomihisa_residual(r(), r(), r(), r(), r()).is_zero());
  }
}

TEST_CASE("elliptic skewers") {
  const EllipticLine<Q> x{from_ints<Q>(1, 0, 0), from_ints<Q>(1, 0, 0)};
  const EllipticLine<Q> y{from_ints<Q>(0, 1, 0), from_ints<Q>(0, 1, 0)};
  const auto z = skewer_elliptic(x, y);
  CHECK(z.minus == from_ints<Q>(0, 0, 1));
  CHECK(z.plus == from_ints<Q>(0, 0, 1));
  const EllipticLine<Q> flipped{-x.minus, x.plus};
  CHECK(proportional(skewer_elliptic(flipped, y).minus, z.minus));

  Rng rng(33);
  for (int t = 0; t < 50; ++t) {
    const auto l = rline(rng), m = rline(rng);
    const auto s = skewer_elliptic(l, m);
    CHECK(sgn(dot(s.minus, l.minus)) == 0);
    CHECK(sgn(dot(s.minus, m.minus)) == 0);
    CHECK(sgn(dot(s.plus, l.plus)) == 0);
    CHECK(sgn(dot(s.plus, m.plus)) == 0);
  }
  const auto l = rline(rng);
  EllipticLine<Q> half{l.minus, rvec(rng)};
  try {
    skewer_elliptic(l, half);
    FAIL("expected NoUniqueSkewer");
  } catch (const GeometryError& e) {
    CHECK(e.kind() == ErrorKind::NoUniqueSkewer);
  }

  // three members of N_s share s; a random triple does not
  for (int t = 0; t < 20; ++t) {
    const auto s = rline(rng);
    std::array<EllipticLine<Q>, 3> a;
    for (auto& v : a) v = {cross(s.minus, rvec(rng)), cross(s.plus, rvec(rng))};
    CHECK(share_skewer_elliptic(a[0], a[1], a[2]));
    const auto d = skewer_determinants(a[0], a[1], a[2]);
    CHECK(share_skewer_elliptic(a[0], a[1], a[2]) == (sgn(d[0]) == 0 && sgn(d[1]) == 0));
    const auto b = rline(rng), c = rline(rng), e = rline(rng);
    CHECK_FALSE(share_skewer_elliptic(b, c, e));
    // a triple sharing a skewer on one sphere only
    const EllipticLine<Q> mixed{a[2].minus, e.plus};
    CHECK_FALSE(share_skewer_elliptic(a[0], a[1], mixed));
    CHECK(sgn(skewer_determinants(a[0], a[1], mixed)[0]) == 0);
  }
  const auto b = rline(rng), c = rline(rng);
  CHECK(share_skewer_elliptic(b, b, c));
  CHECK(skewer_triple_degenerate(b, b, c));
  CHECK_FALSE(skewer_triple_degenerate(b, c, rline(rng)));
}

TEST_CASE("orientation and duality leave shared skewers unchanged") {
  Rng rng(34);
  for (int t = 0; t < 20; ++t) {
    const auto a = rline(rng), b = rline(rng), c = rline(rng);
    auto conclusion = [](const EllipticLine<Q>& p, const EllipticLine<Q>& q, const EllipticLine<Q>& r) {
      return share_skewer_elliptic(skewer_elliptic(skewer_elliptic(p, q), r), skewer_elliptic(skewer_elliptic(q, r), p),
                                   skewer_elliptic(skewer_elliptic(r, p), q));
    };
    CHECK(conclusion(a, b, c));
    const EllipticLine<Q> dual{a.minus, -a.plus}, reversed{-a.minus, -a.plus};
    CHECK(conclusion(dual, b, c));
    CHECK(conclusion(reversed, b, c));
    const EllipticLine<Q> s{-b.minus, b.plus};
    CHECK(share_skewer_elliptic(a, s, c) == share_skewer_elliptic(a, b, c));
  }
}

TEST_CASE("cayley rotations and axial congruences") {
  Rng rng(35);
  for (int t = 0; t < 10; ++t) {
    const auto axis = rvec(rng);
    const Q s = rng.rational(10);
    const auto r = cayley_rotation(axis, s);
    const auto rt = transpose(r);
    CHECK(mul(rt, r) == identity3<Q>());
    CHECK(det3(r[0], r[1], r[2]) == Q(1));
    CHECK(mul(r, axis) == axis);
  }
  for (int t = 0; t < 10; ++t) {
    const RationalCongruence cong{rline(rng), rline(rng)};
    const auto num = cong.numeric();
    std::array<EllipticLine<double>, 3> x;
    const std::array<std::pair<long, long>, 3> params{{{-1, 2}, {1, -3}, {3, 5}}};
    for (std::size_t i = 0; i < 3; ++i) {
      auto& v = x[i];
      const auto sample = cong.sample(Q(params[i].first) / 2, Q(params[i].second) / 3);
      // exact: the angle to the axis is kept
      CHECK(dot(sample.minus, cong.axis.minus) == dot(cong.base.minus, cong.axis.minus));
      CHECK(dot(sample.plus, sample.plus) == dot(cong.base.plus, cong.base.plus));
      v = to_double(sample);
      CHECK(num.residual(v) < 1e-12);
    }
    const auto back = through_three(x[0], x[1], x[2]);
    const double axis_err = std::min(norm3(back.axis.minus - num.axis.minus), norm3(back.axis.minus + num.axis.minus));
    const double radius_err = std::min(std::fabs(back.c_minus - num.c_minus), std::fabs(back.c_minus + num.c_minus - std::numbers::pi));
    CHECK(axis_err < 1e-9);
    CHECK(radius_err < 1e-9);
    CHECK(back.residual(num.sample(0.4, 2.2)) < 1e-9);
  }
  // congruences through a common line meet in it and one line differing on both spheres
  for (int t = 0; t < 10; ++t) {
    const auto l0 = rline(rng);
    const auto c1 = RationalCongruence{rline(rng), l0}.numeric(), c2 = RationalCongruence{rline(rng), l0}.numeric();
    const auto u = unit(to_double(l0));
    const auto all = shared_lines(c1, c2);
    REQUIRE(all.size() == 4);
    int hits = 0;
    for (const auto& l : all) {
      CHECK(c1.residual(l) < 1e-9);
      CHECK(c2.residual(l) < 1e-9);
      if (norm3(l.minus - u.minus) + norm3(l.plus - u.plus) < 1e-9) ++hits;
    }
    CHECK(hits == 1);
    const auto other = other_shared_line(c1, c2, u);
    CHECK(norm3(other.minus - u.minus) > 1e-6);
    CHECK(norm3(other.plus - u.plus) > 1e-6);
    CHECK(c1.residual(other) < 1e-9);
  }
  const AxialCongruence inner{{{0, 0, 1}, {0, 0, 1}}, 0.3, 0.3}, outer{{{0, 0, 1}, {0, 0, 1}}, 0.9, 0.9};
  CHECK_THROWS_AS(shared_lines(inner, outer), GeometryError);
  try {
    shared_lines(inner, outer);
  } catch (const GeometryError& e) {
    CHECK(e.kind() == ErrorKind::NoSharedLine);
  }
  const EllipticLine<double> p{{1, 0, 0}, {1, 0, 0}}, q{{0, 1, 0}, {0, 1, 0}}, r{{1, 0, 0}, {0, 0, 1}};
  CHECK_THROWS_AS(through_three(p, q, r), GeometryError);
}

TEST_CASE("hyperbolic forms") {
  using C = Complex;
  const HypLine<Q> f1{Q(1), Q(0), Q(-1)}, f2{Q(0), Q(1), Q(0)}, f3{Q(1), Q(0), Q(1)};
  CHECK(right_angle_hyp(f1, f2));
  const auto axis = skewer_hyp(f1, f3);
  CHECK(sgn(axis.a) == 0);
  CHECK(sgn(axis.c) == 0);
  CHECK(sgn(axis.b) != 0);

  Rng rng(36);
  for (int t = 0; t < 50; ++t) {
    const auto f = rform(rng), g = rform(rng);
    if (f.discriminant().is_zero() || g.discriminant().is_zero() || f.c.is_zero() || g.c.is_zero()) continue;
    const auto s = skewer_hyp(f, g);
    if (s.c.is_zero()) continue;
    CHECK(right_angle_hyp(f, s));
    CHECK(right_angle_hyp(g, s));
    // independent oracle: the skewer's endpoints separate each input's harmonically
    const auto es = endpoints(to_complex(s)), ef = endpoints(to_complex(f)), eg = endpoints(to_complex(g));
    CHECK(std::abs(cross_ratio(es[0], es[1], ef[0], ef[1]) + 1.0) < 1e-8);
    CHECK(std::abs(cross_ratio(es[0], es[1], eg[0], eg[1]) + 1.0) < 1e-8);
  }
  // endpoints +-1 and +-2 are nested, not harmonic
  CHECK_FALSE(right_angle_hyp(form_of(C(1), C(-1)), form_of(C(2), C(-2))));
  CHECK(right_angle_hyp(form_of(C(1), C(-1)), form_of(C(0, 1), C(0, -1))));

  const HypLine<Q> shared1{Q(6), Q(Q(-5) / 2), Q(1)}, shared2{Q(8), Q(-3), Q(1)};  // endpoints {2,3} and {2,4}
  try {
    skewer_hyp(shared1, shared2);
    FAIL("expected BracketOnDiagonal");
  } catch (const GeometryError& e) {
    CHECK(e.kind() == ErrorKind::BracketOnDiagonal);
  }

  for (int t = 0; t < 20; ++t) {
    const auto a = rform(rng), b = rform(rng), c = rform(rng);
    try {
      const auto x = skewer_hyp(skewer_hyp(a, b), c), y = skewer_hyp(skewer_hyp(b, c), a),
                 z = skewer_hyp(skewer_hyp(c, a), b);
      CHECK(share_skewer_hyp(x, y, z));
      // the sl2 Jacobi identity: the three rows sum to zero
      CHECK((x.a + y.a + z.a).is_zero());
      CHECK((x.c + y.c + z.c).is_zero());
    } catch (const GeometryError&) {
    }
    CHECK_FALSE(share_skewer_hyp(a, b, c));
    CHECK(share_skewer_hyp(a, a, c));
  }
}

TEST_CASE("geodesics of the upper half-space") {
  using C = Complex;
  const auto v = h3_line_through_points({C(0), 1.0}, {C(0), 2.0});
  CHECK(std::abs(v.a) < 1e-15);
  CHECK(std::abs(v.c) < 1e-15);
  CHECK(std::abs(v.b) > 0.1);

  const double eps = 0.01;
  const auto f = h3_line_through_points({C(-1), eps}, {C(1), eps});
  const double r2 = 1.0 + eps * eps;
  CHECK(std::abs(f.a / f.c + r2) < 1e-12);
  CHECK(std::abs(f.b / f.c) < 1e-12);

  Rng rng(37);
  for (int t = 0; t < 30; ++t) {
    const H3Point p{C(rng.uniform(-2, 2), rng.uniform(-2, 2)), rng.uniform(0.1, 2)};
    const H3Point q{C(rng.uniform(-2, 2), rng.uniform(-2, 2)), rng.uniform(0.1, 2)};
    const auto e = endpoints(h3_line_through_points(p, q));
    // both points on the sphere over the segment of the endpoints
    const C centre = (e[0] + e[1]) / 2.0;
    const double radius = std::abs(e[0] - e[1]) / 2.0;
    CHECK(std::fabs(std::norm(p.z - centre) + p.t * p.t - radius * radius) < 1e-9);
    CHECK(std::fabs(std::norm(q.z - centre) + q.t * q.t - radius * radius) < 1e-9);
    const auto g = h3_geodesic_point(e[0], e[1], 1.1);
    CHECK(std::fabs(std::norm(g.z - centre) + g.t * g.t - radius * radius) < 1e-9);
  }
  CHECK_THROWS_AS(h3_line_through_points({C(1), 1.0}, {C(1), 1.0}), GeometryError);
}

TEST_CASE("euclidean skewers") {
  const auto x = EucLine::through({0, 0, 0}, {1, 0, 0});
  const auto m = EucLine::through({0, 0, 1}, {0, 1, 0});
  const auto s = skewer_euclidean(x, m);
  CHECK(std::fabs(std::fabs(s.d[2]) - 1.0) < 1e-15);
  CHECK(std::hypot(s.p[0], s.p[1]) < 1e-15);

  const auto a = EucLine::through({1, 2, 3}, {1, 1, 0});
  const auto b = EucLine::through({1, 2, 3}, {0, 1, 1});
  const auto sab = skewer_euclidean(a, b);
  CHECK(norm3(cross(sab.p - Vec3<double>{1, 2, 3}, sab.d)) < 1e-12);
  CHECK(norm3(cross(sab.d, cross(a.d, b.d))) < 1e-12);

  Rng rng(38);
  for (int t = 0; t < 50; ++t) {
    const auto l = random_euclidean_lines(2, rng);
    const auto k = skewer_euclidean(l[0], l[1]);
    CHECK(right_angle_residual(k, l[0]) < 1e-12);
    CHECK(right_angle_residual(k, l[1]) < 1e-12);
    // the skewer realizes the distance of the lines
    const auto n = cross(l[0].d, l[1].d);
    const double dist = std::fabs(dot(l[1].p - l[0].p, n)) / norm3(n);
    const auto meet = [&](const EucLine& line) {
      // point of line closest to k
      const auto w = cross(k.d, cross(line.d, k.d));
      return line.at(dot(k.p - line.p, w) / dot(line.d, w));
    };
    CHECK(std::fabs(norm3(meet(l[0]) - meet(l[1])) - dist) < 1e-10);
  }
  try {
    skewer_euclidean(x, EucLine::through({0, 1, 0}, {-2, 0, 0}));
    FAIL("expected ParallelLines");
  } catch (const GeometryError& e) {
    CHECK(e.kind() == ErrorKind::ParallelLines);
  }
}

TEST_CASE("skewer theorem drivers") {
  for (const auto& th : skewer_theorems()) {
    CAPTURE(th.id);
    const auto r = run_skewer_theorem(th.id, 20, 11);
    CHECK(r.verdict == Verdict::Verified);
    CHECK(r.trials_completed == 20);
    if (th.exact) CHECK(r.max_residual_text() == "0");
    else CHECK(r.max_residual() <= th.tolerance);
  }
  CHECK_THROWS_AS(run_skewer_theorem("sk-menelaus-E", 1, 0), GeometryError);

  // negative control: the Pappus construction on lines with no common skewer
  Rng rng(39);
  int falsified = 0;
  for (int t = 0; t < 10; ++t) {
    std::array<EllipticLine<Q>, 6> l;
    for (auto& v : l) v = rline(rng);
    auto at = [&](int i, int j) {
      return skewer_elliptic(skewer_elliptic(l[i], l[3 + j]), skewer_elliptic(l[j], l[3 + i]));
    };
    if (!share_skewer_elliptic(at(0, 1), at(0, 2), at(1, 2))) ++falsified;
  }
  CHECK(falsified == 10);
}

TEST_CASE("hesse configuration") {
  using E = EisensteinRational;
  const auto literal = hesse_forms(identity3<Q>());
  CHECK(literal[0].discriminant() == E(-1L));
  // the pair (0:1:-1), (1:0:-1) has (1:-1:0) as its third line
  const auto s = skewer_hyp(literal[0], literal[3]);
  int thirds = 0;
  for (int k = 0; k < 9; ++k)
    if (k != 0 && k != 3 && delta_pairing(s, literal[k]).is_zero()) ++thirds;
  CHECK(thirds == 1);
  CHECK(delta_pairing(s, literal[6]).is_zero());

  const auto lit = hesse_sylvester_check(identity3<Q>());
  CHECK(lit.nondegenerate);
  CHECK(lit.diagonal_pairs == 6);
  CHECK(lit.rank == 3);

  const auto r = hesse_sylvester_check();
  CHECK(r.nondegenerate);
  CHECK(r.sylvester);
  CHECK(r.diagonal_pairs == 0);
  CHECK(r.rank == 3);
  CHECK(r.counterexample());
  CHECK(r.triples.size() == 36);
  // every line of the configuration holds exactly three of the nine
  for (const auto& t : r.triples) {
    int count = 0;
    const auto sk = skewer_hyp(r.forms[t[0]], r.forms[t[1]]);
    for (const auto& f : r.forms)
      if (delta_pairing(sk, f).is_zero()) ++count;
    CHECK(count == 3);
  }
  CHECK(hesse_sylvester_report(r).verified());
}

TEST_CASE("skewer pentagram orbits") {
  Rng rng(40);
  const auto lines = random_euclidean_lines(7, rng);
  const auto image = skewer_pentagram_step(lines);
  for (std::size_t i = 0; i < 7; ++i) {
    const auto a = skewer_euclidean(lines[i], lines[(i + 2) % 7]);
    const auto b = skewer_euclidean(lines[(i + 1) % 7], lines[(i + 3) % 7]);
    CHECK(right_angle_residual(image[i], a) < 1e-9);
    CHECK(right_angle_residual(image[i], b) < 1e-9);
  }
  const auto orbit = skewer_pentagram_orbit(lines, 1000);
  CHECK(orbit.iterations_completed == 1000);
  CHECK_FALSE(orbit.truncated);
  REQUIRE(orbit.steps.size() == 1000);
  CHECK(orbit.steps.back().distances.size() == 7);

  // lines in one plane: every first skewer is normal to the plane
  std::vector<EucLine> planar;
  for (int i = 0; i < 7; ++i) planar.push_back(EucLine::through({rng.uniform(-1, 1), 0.0, 0.0}, {std::cos(i), std::sin(i), 0.0}));
  const auto flat = skewer_pentagram_orbit(planar, 10);
  CHECK(flat.truncated);
  CHECK(flat.truncation == "ParallelEncountered");
  CHECK(flat.iterations_completed == 0);

  CHECK_THROWS_AS(skewer_pentagram_step(random_euclidean_lines(4, rng)), GeometryError);
}
