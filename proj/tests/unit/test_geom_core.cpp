#include <vector>

#include "doctest.h"
#include "pcl/collineation.hpp"
#include "pcl/conic.hpp"
#include "pcl/numeric.hpp"
#include "pcl/random.hpp"

using namespace pcl;
using Q = Rational;
using P = Point<Q>;
using L = Line<Q>;

namespace {

P pt(long x, long y, long z) { return P(from_ints<Q>(x, y, z)); }

// Independent oracle: affine cross-ratio on the x-axis, ((c-a)(d-b))/((c-b)(d-a)).
Q affine_cr(Q a, Q b, Q c, Q d) { return (c - a) * (d - b) / ((c - b) * (d - a)); }

P random_point(Rng& rng) {
  return P(Q(rng.uniform_int(-50, 50)), Q(rng.uniform_int(-50, 50)), Q(rng.uniform_int(1, 50)));
}

}  // namespace

TEST_CASE("join and meet") {
  CHECK(join(pt(1, 0, 0), pt(0, 1, 0)) == L(from_ints<Q>(0, 0, 1)));
  CHECK(join(pt(1, 0, 1), pt(0, 1, 1)) == L(from_ints<Q>(-1, -1, 1)));
  CHECK_THROWS_AS(join(pt(1, 2, 3), pt(2, 4, 6)), GeometryError);
  CHECK(meet(L(from_ints<Q>(0, 0, 1)), L(from_ints<Q>(0, 1, 0))) == pt(1, 0, 0));
  const L l(from_ints<Q>(3, -1, 2));
  try {
    meet(l, l);
    FAIL("expected CoincidentLines");
  } catch (const GeometryError& e) {
    CHECK(e.kind() == ErrorKind::CoincidentLines);
  }

  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    const P p = random_point(rng), q = random_point(rng), r = random_point(rng);
    if (collinear(p, q, r)) continue;
    const L pq = join(p, q);
    CHECK(incidence(p, pq) == 0);
    CHECK(incidence(q, pq) == 0);
    CHECK(meet(pq, join(p, r)) == p);
  }
}

TEST_CASE("cross ratio") {
  auto on_axis = [](long x) { return pt(x, 0, 1); };
  CHECK(cross_ratio(on_axis(0), on_axis(2), on_axis(1), on_axis(3)) == Q(-1, 3));
  CHECK(affine_cr(0, 2, 1, 3) == Q(-1, 3));
  CHECK(cross_ratio(on_axis(0), pt(1, 0, 0), on_axis(1), on_axis(-1)) == Q(-1));
  CHECK(cross_ratio(on_axis(0), on_axis(1), on_axis(2), on_axis(3)) > 0);
  CHECK(cross_ratio(on_axis(0), on_axis(1), on_axis(2), on_axis(3)) ==
        affine_cr(0, 1, 2, 3));
  CHECK_THROWS_AS(cross_ratio(on_axis(0), on_axis(1), pt(0, 1, 1), on_axis(3)), GeometryError);
  CHECK_THROWS_AS(cross_ratio(on_axis(0), on_axis(0), on_axis(2), on_axis(3)), GeometryError);

  // invariance under a random collineation
  Rng rng(11);
  Matrix3<Q> m{};
  for (auto& row : m)
    for (auto& x : row) x = Q(rng.uniform_int(-9, 9));
  m[0][0] += 20;
  m[1][1] += 20;
  m[2][2] += 20;
  const P a = pt(1, 2, 1), b = pt(3, 4, 1), c = pt(5, 6, 1), d = pt(-7, -6, 1);
  auto img = [&](const P& p) { return P(mul(m, p.coords())); };
  CHECK(cross_ratio(a, b, c, d) == cross_ratio(img(a), img(b), img(c), img(d)));
}

TEST_CASE("collineation from frames") {
  std::array<Vec3<Q>, 4> std_frame{from_ints<Q>(1, 0, 0), from_ints<Q>(0, 1, 0),
                                   from_ints<Q>(0, 0, 1), from_ints<Q>(1, 1, 1)};
  auto id = collineation_from_frames<Q>(std_frame, std_frame);
  CHECK(proportional(id.m, identity3<Q>()));

  Matrix3<Q> m{};
  m[0] = from_ints<Q>(2, 1, 0);
  m[1] = from_ints<Q>(-1, 3, 4);
  m[2] = from_ints<Q>(5, 0, 1);
  std::array<Vec3<Q>, 4> src{from_ints<Q>(1, 2, 3), from_ints<Q>(-2, 1, 1),
                             from_ints<Q>(0, 5, -1), from_ints<Q>(4, 4, 7)};
  std::array<Vec3<Q>, 4> dst;
  for (int i = 0; i < 4; ++i) dst[i] = mul(m, src[i]);
  CHECK(proportional(collineation_from_frames<Q>(src, dst).m, m));

  std::array<Vec3<Q>, 4> bad{from_ints<Q>(0, 0, 1), from_ints<Q>(1, 0, 1), from_ints<Q>(2, 0, 1),
                             from_ints<Q>(0, 1, 1)};
  CHECK_THROWS_AS(collineation_from_frames<Q>(bad, std_frame), GeometryError);
}

TEST_CASE("find_equivalence") {
  std::vector<Vec3<Q>> ps{from_ints<Q>(1, 0, 1), from_ints<Q>(0, 1, 1), from_ints<Q>(-1, 2, 1),
                          from_ints<Q>(3, 4, 5), from_ints<Q>(7, -2, 3)};
  auto same = find_equivalence(ps, Space::Plane, ps, Space::Plane);
  REQUIRE(same);
  CHECK(proportional(same->map.m, identity3<Q>()));

  // regular pentagon, numerically, against its side lines
  std::vector<Vec3<double>> pent, sides;
  for (int k = 0; k < 5; ++k)
    pent.push_back({std::cos(2 * M_PI * k / 5), std::sin(2 * M_PI * k / 5), 1.0});
  for (int k = 0; k < 5; ++k) sides.push_back(cross(pent[k], pent[(k + 1) % 5]));
  EquivalenceOptions opts;
  opts.allow_cyclic_shift = true;
  opts.allow_reflection = true;
  auto dual = find_equivalence(pent, Space::Plane, sides, Space::Dual, opts);
  REQUIRE(dual);
  CHECK(dual->map.target == Space::Dual);

  Rng rng(3);
  int unrelated = 0;
  for (int t = 0; t < 10; ++t) {
    std::vector<Vec3<Q>> a, b;
    for (int i = 0; i < 6; ++i) a.push_back(random_point(rng).coords());
    for (int i = 0; i < 6; ++i) b.push_back(random_point(rng).coords());
    if (!find_equivalence(a, Space::Plane, b, Space::Plane)) ++unrelated;
  }
  CHECK(unrelated == 10);

  std::vector<Vec3<Q>> three(ps.begin(), ps.begin() + 3);
  CHECK_THROWS_AS(find_equivalence(three, Space::Plane, three, Space::Plane), GeometryError);
}

TEST_CASE("conic through five points") {
  std::vector<P> circle{pt(1, 0, 1), pt(0, 1, 1), pt(-1, 0, 1), pt(0, -1, 1), pt(3, 4, 5)};
  const Conic<Q> c = conic_through_five(circle);
  CHECK(proportional(c.m, unit_circle<Q>().m));
  for (const auto& p : circle) CHECK(c.eval(p) == 0);
  CHECK_FALSE(is_degenerate(c));

  std::vector<P> two_lines{pt(0, 0, 1), pt(1, 0, 1), pt(2, 0, 1), pt(0, 1, 1), pt(5, 3, 1)};
  const Conic<Q> d = conic_through_five(two_lines);
  CHECK(is_degenerate(d));
  CHECK(det(d.m) == 0);
  CHECK(d.eval(pt(7, 0, 1)) == 0);

  std::vector<P> four_on_line{pt(0, 0, 1), pt(1, 0, 1), pt(2, 0, 1), pt(3, 0, 1), pt(0, 1, 1)};
  CHECK_THROWS_AS(conic_through_five(four_on_line), GeometryError);

  Conic<Q> axes;
  axes.m[0][1] = axes.m[1][0] = Q(1, 2);
  CHECK(is_degenerate(axes));
}

TEST_CASE("polarity") {
  const auto c = unit_circle<Q>();
  CHECK(polar(pt(0, 0, 1), c) == L(from_ints<Q>(0, 0, 1)));
  const P on = rational_conic_point(Q(2, 3));
  const L tangent = polar(on, c);
  CHECK(incidence(on, tangent) == 0);
  CHECK(tangent == tangent_at(Q(2, 3)));
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const P p = random_point(rng);
    CHECK(pole(polar(p, c), c) == p);
  }
  Conic<Q> degenerate;
  degenerate.m[0][0] = 1;
  CHECK_THROWS_AS(pole(L(from_ints<Q>(1, 2, 3)), degenerate), GeometryError);
}

TEST_CASE("rational conic points") {
  CHECK(rational_conic_point(Q(0)) == pt(1, 0, 1));
  CHECK(rational_conic_point(Q(1)) == pt(0, 1, 1));
  const auto c = unit_circle<Q>();
  Rng rng(9);
  std::vector<P> seen;
  for (int t = 0; t < 30; ++t) {
    const Q s = rng.rational(1000);
    const P p = rational_conic_point(s);
    CHECK(c.eval(p) == 0);
  }
  CHECK_FALSE(rational_conic_point(Q(1, 2)) == rational_conic_point(Q(1, 3)));
}

TEST_CASE("float backend predicates") {
  using D = double;
  const Point<D> p(1.0, 2.0, 3.0);
  const Point<D> q(1.0 + 1e-13, 2.0, 3.0);
  CHECK(p == q);
  const Point<D> far(1.0, 2.0, 3.1);
  CHECK_FALSE(p == far);
  CHECK(incident(p, join(p, far)));
}

TEST_CASE("quadratic extensions") {
  const EisensteinRational w = EisensteinRational::theta();
  CHECK(w * w == EisensteinRational(-1) - w);
  CHECK(w * w * w == EisensteinRational(1));
  const GaussianRational i = GaussianRational::theta();
  CHECK(i * i == GaussianRational(-1));
  const EisensteinRational x(Q(3, 2), Q(-5, 7));
  CHECK(x / x == EisensteinRational(1));
  CHECK(std::abs(w.to_complex() - std::polar(1.0, 2 * M_PI / 3)) < 1e-15);
}

TEST_CASE("polynomial roots") {
  std::vector<Complex> cubic{1.0, -6.0, 11.0, -6.0};
  auto r = polynomial_roots(cubic);
  std::sort(r.begin(), r.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
  CHECK(std::abs(r[0] - 1.0) < 1e-12);
  CHECK(std::abs(r[1] - 2.0) < 1e-12);
  CHECK(std::abs(r[2] - 3.0) < 1e-12);
  std::vector<Complex> quartic{Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(0, 0),
                               Complex(-1, 0)};
  for (const auto& z : polynomial_roots(quartic)) CHECK(std::abs(std::pow(z, 4) - 1.0) < 1e-12);
}
