#include "doctest.h"
#include "pcl/marked_box.hpp"
#include "pcl/random.hpp"

using namespace pcl;
using Q = Rational;
using Box = MarkedBox<Q>;

namespace {

Matrix3<Q> random_matrix(Rng& rng) {
  Matrix3<Q> m;
  do {
    for (auto& row : m)
      for (auto& x : row) x = Q(rng.uniform_int(-20, 20));
  } while (sgn(det(m)) == 0);
  return m;
}

Q open_unit(Rng& rng) {
  Q q(rng.uniform_int(1, 99), 100);
  q.canonicalize();
  return q;
}

// Random convex box: unit-square box moved by a random collineation.
Box random_box(Rng& rng, Q* x = nullptr, Q* y = nullptr) {
  const Q bx = open_unit(rng), by = open_unit(rng);
  if (x) *x = bx;
  if (y) *y = by;
  const Box sq = box_from_coords(bx, by);
  const Collineation<Q> c{random_matrix(rng), Space::Plane};
  return map_box(c, sq);
}

BoxCoords<Q> oracle_action(const BoxCoords<Q>& c) { return canonical_coords<Q>(Q(1 - c.y), c.x); }

}  // namespace

TEST_CASE("make_box validation") {
  const Box mid = box_from_coords(Q(1, 2), Q(1, 2));
  CHECK(box_coords(mid) == BoxCoords<Q>{Q(1, 2), Q(1, 2)});
  const auto z = from_ints<Q>(0, 0, 1);
  CHECK_THROWS_AS(make_box<Q>(from_ints<Q>(0, 1, 1), from_ints<Q>(1, 1, 1), from_ints<Q>(1, 0, 1), z,
                              from_ints<Q>(2, 1, 1), from_ints<Q>(1, 2, 0)),
                  GeometryError);
  try {
    make_box<Q>(from_ints<Q>(0, 1, 1), from_ints<Q>(1, 1, 1), from_ints<Q>(1, 0, 1), z, from_ints<Q>(2, 1, 1),
                from_ints<Q>(1, 0, 2));
    FAIL("expected NotConvex");
  } catch (const GeometryError& e) {
    CHECK(e.kind() == ErrorKind::NotConvex);
  }
  try {
    make_box<Q>(from_ints<Q>(0, 1, 1), from_ints<Q>(1, 1, 1), from_ints<Q>(1, 0, 1), z, from_ints<Q>(1, 3, 2),
                from_ints<Q>(1, 0, 2));
    FAIL("expected NotIncident");
  } catch (const GeometryError& e) {
    CHECK(e.kind() == ErrorKind::NotIncident);
  }
}

TEST_CASE("group relations hold exactly") {
  Rng rng(1);
  for (int t = 0; t < 30; ++t) {
    const Box b = random_box(rng);
    REQUIRE(is_convex(b));
    CHECK(same_box(op_i(op_i(b)), b));
    CHECK(same_box(apply_word(b, "t1 i t2"), op_i(b)));
    CHECK(same_box(apply_word(b, "t2 i t1"), op_i(b)));
    CHECK(same_box(apply_word(b, "t1 i t1"), op_tau2(b)));
    CHECK(same_box(apply_word(b, "t2 i t2"), op_tau1(b)));
    CHECK(same_box(apply_word(b, "i t2 i t1"), b));
    for (const auto& g : {op_i(b), op_tau1(b), op_tau2(b)}) CHECK(is_convex(g));
  }
}

TEST_CASE("coordinate action") {
  const Box b = box_from_coords(Q(1, 3), Q(1, 4));
  CHECK(box_coords(b) == BoxCoords<Q>{Q(1, 3), Q(1, 4)});
  CHECK(box_coords(op_tau1(b)) == BoxCoords<Q>{Q(1, 4), Q(2, 3)});
  Rng rng(2);
  for (int t = 0; t < 30; ++t) {
    const Box r = random_box(rng);
    const auto c = box_coords(r);
    for (const auto& g : {op_i(r), op_tau1(r), op_tau2(r)}) CHECK(box_coords(g) == oracle_action(c));
  }
}

TEST_CASE("round trip through coordinates") {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    Q x, y;
    const Box b = random_box(rng, &x, &y);
    CHECK(box_coords(b) == canonical_coords<Q>(x, y));
    const auto c = box_coords(b);
    CHECK(box_coords(box_from_coords(c.x, c.y)) == c);
  }
}

TEST_CASE("dual box") {
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const Box b = random_box(rng);
    const Box d = dual_box(b);
    CHECK(d.space == Space::Dual);
    CHECK(is_convex(d));
    CHECK(det3(d.a1, d.a3, d.a2) == 0);
    CHECK(det3(d.b1, d.b3, d.b2) == 0);
    CHECK(same_box(dual_box(d), b));
  }
  const Box sq = box_from_coords(Q(1, 2), Q(1, 2));
  const Box d = dual_box(sq);
  // A2 = (1/2,1), B1 = (0,0): join is the line 2x - y = 0
  CHECK(d.a1 == from_ints<Q>(2, -1, 0));
  CHECK(d.a2 == from_ints<Q>(0, 1, -1));
  CHECK(d.b2 == from_ints<Q>(0, 1, 0));
}

TEST_CASE("projective symmetries") {
  Rng rng(5);
  for (int t = 0; t < 15; ++t) {
    const Box b = random_box(rng);
    const auto m = order3_symmetry(b);
    CHECK(proportional(mul(m.m, mul(m.m, m.m)), identity3<Q>()));
    CHECK_FALSE(proportional(m.m, identity3<Q>()));
    CHECK(same_box(map_box(m, op_i(b)), op_tau1(b)));
    CHECK(same_box(map_box(m, op_tau1(b)), op_tau2(b)));
    CHECK(same_box(map_box(m, op_tau2(b)), op_i(b)));
    CHECK(box_coords(op_i(b)) == box_coords(op_tau1(b)));
    CHECK(box_coords(op_tau1(b)) == box_coords(op_tau2(b)));

    const auto arc_i = seed_arc_points(op_i(b), 3);
    const auto arc_t = seed_arc_points(op_tau1(b), 3);
    for (std::size_t k = 0; k < arc_i.size(); ++k) CHECK(proportional(m.apply(arc_i[k]), arc_t[k]));

    const auto p = duality_symmetry(b);
    CHECK(p.target == Space::Dual);
    const auto img = map_box(p, op_i(b));
    CHECK(same_box(img, dual_box(b)));
    const auto twice = p.compose(p);
    CHECK(twice.target == Space::Plane);
  }
  const Box sym = box_from_coords(Q(1, 2), Q(1, 2));
  CHECK_NOTHROW(order3_symmetry(sym));
  CHECK_NOTHROW(duality_symmetry(sym));
}

TEST_CASE("orbit and curve points") {
  const Box sym = box_from_coords(Q(1, 2), Q(1, 2));
  const auto d0 = curve_points(sym, 0);
  REQUIRE(d0.size() == 2);
  CHECK(d0[0] == sym.a2);
  CHECK(d0[1] == sym.b2);
  const auto pts = curve_points(sym, 6);
  CHECK(pts.size() == 128);
  for (const auto& p : pts) CHECK(det3(pts[0], pts[64], p) == 0);

  const auto nodes = orbit_to_depth(sym, 3);
  CHECK(nodes.size() == 2 * (1 + 2 + 4 + 8));
  CHECK(nodes[2].word == "t1");
  CHECK(nodes[5].word == "t2 i");
  CHECK(nodes.back().address == "1111");
  for (const auto& n : nodes) CHECK(same_box(apply_word(sym, n.word), n.box));
  CHECK_THROWS_AS(orbit_to_depth(sym, 21), GeometryError);

  // nesting in the unit-square chart
  Rng rng(6);
  const Box b = box_from_coords(Q(3, 10), Q(1, 5));
  auto inside = [](const Box& parent, const Vec3<Q>& p) {
    const std::array<Vec3<Q>, 4> quad{parent.a1, parent.a3, parent.b3, parent.b1};
    int sign = 0;
    for (int k = 0; k < 4; ++k) {
      const auto& u = quad[k];
      const auto& v = quad[(k + 1) % 4];
      // orientation of (u, v, p) in the affine chart z = 1
      const Q o = (v[0] / v[2] - u[0] / u[2]) * (p[1] / p[2] - u[1] / u[2]) -
                  (v[1] / v[2] - u[1] / u[2]) * (p[0] / p[2] - u[0] / u[2]);
      const int s = sgn(o);
      if (s == 0) continue;
      if (sign == 0) sign = s;
      if (s != sign) return false;
    }
    return true;
  };
  const auto tree = orbit_to_depth(b, 4);
  for (std::size_t k = 2; k < tree.size(); ++k) {
    if (tree[k].address[0] != '0') continue;
    const std::string parent_addr = tree[k].address.substr(0, tree[k].address.size() - 1);
    const auto parent = std::find_if(tree.begin(), tree.end(), [&](const auto& n) { return n.address == parent_addr; });
    REQUIRE(parent != tree.end());
    for (const auto& p : tree[k].box.points()) CHECK(inside(parent->box, p));
  }
}

TEST_CASE("box dimension on known sets") {
  std::vector<std::array<double, 2>> segment, square;
  for (int k = 0; k < 4096; ++k) segment.push_back({k / 4095.0, 0.3 * k / 4095.0});
  for (int i = 0; i < 256; ++i)
    for (int j = 0; j < 256; ++j) square.push_back({i / 255.0, j / 255.0});
  CHECK(box_dimension(segment, 2, 8).dimension == doctest::Approx(1.0).epsilon(0.05));
  CHECK(box_dimension(square, 2, 7).dimension == doctest::Approx(2.0).epsilon(0.05));
  CHECK_THROWS_AS(box_dimension(std::vector<std::array<double, 2>>(10), 2, 5), GeometryError);
  CHECK_THROWS_AS(box_dimension(segment, 5, 5), GeometryError);
}

TEST_CASE("pappus curve dimension and transversality") {
  CurveDimensionOptions opts;
  opts.depth = 12;
  const auto line = pappus_curve_dimension(0.5, 0.5, opts);
  CHECK(line.dimension == doctest::Approx(1.0).epsilon(0.05));
  const auto fractal = pappus_curve_dimension(0.3, 0.2, opts);
  CHECK(fractal.dimension > 1.0);
  CHECK(fractal.dimension <= 1.3);
  opts.chart = DimensionChart::Elliptic;
  const auto elliptic = pappus_curve_dimension(0.3, 0.2, opts);
  CHECK(elliptic.dimension > 0.9);

  for (int c : transversality_crossings(0.3, 0.2, 12, 4)) CHECK(c == 1);
}
