#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pcl/errors.hpp"
#include "pcl/linalg.hpp"
#include "pcl/report.hpp"

namespace pcl {

// ---------------------------------------------------------------------------
// Lie algebra identities

/// (A x B) x C + (B x C) x A + (C x A) x B.
template <class T>
Vec3<T> jacobi_residual(const Vec3<T>& a, const Vec3<T>& b, const Vec3<T>& c) {
  return cross(cross(a, b), c) + cross(cross(b, c), a) + cross(cross(c, a), b);
}

/// Determinant of the three altitude vectors (A x B) x C, (B x C) x A,
/// (C x A) x B of a spherical triangle.
template <class T>
T altitude_determinant(const Vec3<T>& a, const Vec3<T>& b, const Vec3<T>& c) {
  if (is_zero(det3(a, b, c), max_norm(a) * max_norm(b) * max_norm(c)))
    fail(ErrorKind::DegenerateTriangle, "triangle vertices are dependent");
  return det3(cross(cross(a, b), c), cross(cross(b, c), a), cross(cross(c, a), b));
}

/// Concurrency of the altitudes of the spherical triangle ABC.
template <class T>
bool spherical_altitudes_check(const Vec3<T>& a, const Vec3<T>& b, const Vec3<T>& c) {
  const T d = altitude_determinant(a, b, c);
  const double scale = std::pow(max_norm(a) * max_norm(b) * max_norm(c), 3);
  return is_zero(d, scale);
}

/// Traceless 2x2 matrix [[a, b], [c, -a]].
template <class T>
struct SL2Element {
  T a{}, b{}, c{};

  static SL2Element e() { return {T(0L), T(1L), T(0L)}; }
  static SL2Element f() { return {T(0L), T(0L), T(1L)}; }
  static SL2Element h() { return {T(1L), T(0L), T(0L)}; }

  std::array<std::array<T, 2>, 2> matrix() const { return {{{a, b}, {c, T(-a)}}}; }
  bool is_zero() const { return pcl::is_zero(a) && pcl::is_zero(b) && pcl::is_zero(c); }

  friend SL2Element operator+(const SL2Element& x, const SL2Element& y) {
    return {T(x.a + y.a), T(x.b + y.b), T(x.c + y.c)};
  }
  friend bool operator==(const SL2Element& x, const SL2Element& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c;
  }
};

/// Commutator FG - GF from the full matrix products.
template <class T>
SL2Element<T> bracket(const SL2Element<T>& f, const SL2Element<T>& g) {
  const auto x = f.matrix(), y = g.matrix();
  std::array<std::array<T, 2>, 2> m{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m[i][j] = T(x[i][0] * y[0][j] + x[i][1] * y[1][j] - y[i][0] * x[0][j] - y[i][1] * x[1][j]);
  return {m[0][0], m[0][1], m[1][0]};
}

/// [F1,[[F2,F3],[F4,F5]]] + [F3,[[F2,F5],[F4,F1]]] + [F5,[[F2,F1],[F4,F3]]].
template <class T>
SL2Element<T> tomihisa_residual(const SL2Element<T>& f1, const SL2Element<T>& f2, const SL2Element<T>& f3,
                                const SL2Element<T>& f4, const SL2Element<T>& f5) {
  return bracket(f1, bracket(bracket(f2, f3), bracket(f4, f5))) +
         bracket(f3, bracket(bracket(f2, f5), bracket(f4, f1))) +
         bracket(f5, bracket(bracket(f2, f1), bracket(f4, f3)));
}

// ---------------------------------------------------------------------------
// Elliptic space: an oriented line is a pair of points on S^2_- x S^2_+

template <class T>
struct EllipticLine {
  Vec3<T> minus{};
  Vec3<T> plus{};

  friend bool operator==(const EllipticLine& x, const EllipticLine& y) = default;
};

template <class T>
EllipticLine<T> skewer_elliptic(const EllipticLine<T>& l, const EllipticLine<T>& m) {
  EllipticLine<T> s{cross(l.minus, m.minus), cross(l.plus, m.plus)};
  if (is_zero_vec(s.minus, max_norm(l.minus) * max_norm(m.minus)) ||
      is_zero_vec(s.plus, max_norm(l.plus) * max_norm(m.plus)))
    fail(ErrorKind::NoUniqueSkewer, "a component pair is proportional");
  return s;
}

/// Per-sphere determinants det(l-, m-, n-) and det(l+, m+, n+).
template <class T>
std::array<T, 2> skewer_determinants(const EllipticLine<T>& l, const EllipticLine<T>& m, const EllipticLine<T>& n) {
  return {det3(l.minus, m.minus, n.minus), det3(l.plus, m.plus, n.plus)};
}

template <class T>
bool share_skewer_elliptic(const EllipticLine<T>& l, const EllipticLine<T>& m, const EllipticLine<T>& n,
                           double eps = kDefaultEps) {
  const auto d = skewer_determinants(l, m, n);
  const double sm = max_norm(l.minus) * max_norm(m.minus) * max_norm(n.minus);
  const double sp = max_norm(l.plus) * max_norm(m.plus) * max_norm(n.plus);
  return is_zero(d[0], sm, eps) && is_zero(d[1], sp, eps);
}

/// Two of the three lines agree on a sphere, so the predicate holds
/// without content.
template <class T>
bool skewer_triple_degenerate(const EllipticLine<T>& l, const EllipticLine<T>& m, const EllipticLine<T>& n) {
  auto same = [](const Vec3<T>& x, const Vec3<T>& y) { return proportional(x, y); };
  return same(l.minus, m.minus) || same(m.minus, n.minus) || same(n.minus, l.minus) || same(l.plus, m.plus) ||
         same(m.plus, n.plus) || same(n.plus, l.plus);
}

/// Rotation about axis by the Cayley parameter t (angle 2 atan(t |axis|)).
Matrix3<Rational> cayley_rotation(const Vec3<Rational>& axis, const Rational& t);

/// Axial congruence in the product model: the lines whose components lie on
/// the circle of angular radius c_minus around axis.minus and c_plus around
/// axis.plus. Axis components are unit vectors.
struct AxialCongruence {
  EllipticLine<double> axis;
  double c_minus = 0.0;
  double c_plus = 0.0;

  /// Largest distance of a component from its circle, in angle.
  double residual(const EllipticLine<double>& line) const;
  EllipticLine<double> sample(double t_minus, double t_plus) const;
};

/// Orbit of a rational base line under rational rotations about a rational
/// axis; every sample is exact.
struct RationalCongruence {
  EllipticLine<Rational> axis;
  EllipticLine<Rational> base;

  EllipticLine<Rational> sample(const Rational& t_minus, const Rational& t_plus) const;
  AxialCongruence numeric() const;
};

EllipticLine<double> to_double(const EllipticLine<Rational>& l);
EllipticLine<double> unit(const EllipticLine<double>& l);

/// Unique congruence through three lines: circumcircles on both spheres.
AxialCongruence through_three(const EllipticLine<double>& l1, const EllipticLine<double>& l2,
                              const EllipticLine<double>& l3, double eps = 1e-9);

/// Points of S^2 on both circles, 0..2 of them.
std::vector<Vec3<double>> circle_meet(const Vec3<double>& n1, double c1, const Vec3<double>& n2, double c2,
                                      double eps = 1e-9);

/// Every line of both congruences: the componentwise products of the circle
/// meets. The first two pair the meets with the same orientation sign
/// det(n1, n2, x) on both spheres.
std::vector<EllipticLine<double>> shared_lines(const AxialCongruence& c1, const AxialCongruence& c2,
                                               double eps = 1e-9);

/// The shared line differing from known on both spheres.
EllipticLine<double> other_shared_line(const AxialCongruence& c1, const AxialCongruence& c2,
                                       const EllipticLine<double>& known, double eps = 1e-9);

// ---------------------------------------------------------------------------
// Hyperbolic space: a line is the binary quadratic form a x^2 + 2 b xy + c y^2
// vanishing at its two endpoints

template <class T>
struct HypLine {
  T a{}, b{}, c{};

  T discriminant() const { return T(a * c - b * b); }
  Vec3<T> row() const { return {a, b, c}; }
};

/// Delta-bilinear form a1 c2 - 2 b1 b2 + a2 c1.
template <class T>
T delta_pairing(const HypLine<T>& f, const HypLine<T>& g) {
  return T(f.a * g.c - T(2L) * f.b * g.b + g.a * f.c);
}

template <class T>
double hyp_scale(const HypLine<T>& f) {
  return max_norm(f.row());
}

template <class T>
bool right_angle_hyp(const HypLine<T>& f, const HypLine<T>& g, double eps = kDefaultEps) {
  return is_zero(delta_pairing(f, g), hyp_scale(f) * hyp_scale(g), eps);
}

/// Poisson bracket {f, g}; its xy coefficient a1 c2 - a2 c1 is 2b.
template <class T>
HypLine<T> skewer_hyp(const HypLine<T>& f, const HypLine<T>& g) {
  HypLine<T> s{T(f.a * g.b - g.a * f.b), T(T(f.a * g.c - g.a * f.c) / T(2L)), T(f.b * g.c - g.b * f.c)};
  const double scale = hyp_scale(f) * hyp_scale(g);
  if (is_zero(s.discriminant(), scale * scale)) fail(ErrorKind::BracketOnDiagonal, "lines share an endpoint");
  return s;
}

template <class T>
T skewer_determinant(const HypLine<T>& f, const HypLine<T>& g, const HypLine<T>& h) {
  return det3(f.row(), g.row(), h.row());
}

template <class T>
bool share_skewer_hyp(const HypLine<T>& f, const HypLine<T>& g, const HypLine<T>& h, double eps = kDefaultEps) {
  return is_zero(skewer_determinant(f, g, h), hyp_scale(f) * hyp_scale(g) * hyp_scale(h), eps);
}

/// Upper half-space point: boundary coordinate z = x + iy and height t > 0.
struct H3Point {
  Complex z;
  double t = 1.0;
};

/// Geodesic through two points as the form (y - p x)(y - q x) of its ideal
/// endpoints p, q; an endpoint at infinity contributes the factor x.
HypLine<Complex> h3_line_through_points(const H3Point& p1, const H3Point& p2);

/// Point of the geodesic with finite endpoints p, q at angle theta in (0, pi)
/// on its semicircle.
H3Point h3_geodesic_point(Complex p, Complex q, double theta);

/// Relative size of the skewer determinant of unit-normalized rows.
double hyp_share_residual(const HypLine<Complex>& f, const HypLine<Complex>& g, const HypLine<Complex>& h);

// ---------------------------------------------------------------------------
// Euclidean space

struct EucLine {
  Vec3<double> p{};
  Vec3<double> d{0.0, 0.0, 1.0};  // unit

  static EucLine through(const Vec3<double>& p, const Vec3<double>& d);
  Vec3<double> at(double s) const;
};

/// Common perpendicular; it passes through the closest points of the inputs.
EucLine skewer_euclidean(const EucLine& l1, const EucLine& l2, double eps = 1e-12);

/// Deviation of s from meeting l at right angle: |cos| of the angle plus the
/// distance between the lines.
double right_angle_residual(const EucLine& s, const EucLine& l);

/// Residual of l1, l2, l3 sharing a skewer: right_angle_residual of the
/// skewer of the first two against the third.
double euclidean_share_residual(const EucLine& l1, const EucLine& l2, const EucLine& l3);

// ---------------------------------------------------------------------------
// Theorem drivers

struct SkewerTheorem {
  std::string id;
  std::string statement;
  bool exact = true;
  double tolerance = 0.0;
};

const std::vector<SkewerTheorem>& skewer_theorems();
const SkewerTheorem& skewer_theorem(const std::string& id);

VerificationReport run_skewer_theorem(const std::string& id, std::size_t trials, std::uint64_t seed);

/// Hesse configuration of nine forms over Q(omega): the rows (0:1:-w^k),
/// (1:0:-w^k), (1:-w^k:0) mapped by frame.
std::vector<HypLine<EisensteinRational>> hesse_forms(const Matrix3<Rational>& frame);

/// Fixed integer frame in which no Hesse line touches the diagonal conic.
Matrix3<Rational> hesse_general_frame();

/// Nine lines of H^3 from the Hesse configuration: every skewer of a pair is
/// perpendicular to a third line of the set, yet the nine have no common
/// skewer.
struct HesseSylvesterResult {
  std::vector<HypLine<EisensteinRational>> forms;
  bool nondegenerate = false;  // every Delta nonzero
  bool sylvester = false;      // every pair has a third line
  std::vector<std::array<int, 3>> triples;  // (i, j, k) with k the third line of {i, j}, -1 if none
  std::size_t diagonal_pairs = 0;           // pairs whose bracket lies on Delta = 0
  std::size_t rank = 0;
  bool counterexample() const { return nondegenerate && sylvester && rank == 3; }
};

HesseSylvesterResult hesse_sylvester_check(const Matrix3<Rational>& frame);
/// In hesse_general_frame().
HesseSylvesterResult hesse_sylvester_check();
VerificationReport hesse_sylvester_report(const HesseSylvesterResult& r);

// ---------------------------------------------------------------------------
// Skewer pentagram map on cyclic tuples of Euclidean lines

/// i-th image S(S(L_i, L_{i+2}), S(L_{i+1}, L_{i+3})), indices mod n.
std::vector<EucLine> skewer_pentagram_step(const std::vector<EucLine>& lines, double eps = 1e-12);

struct SkewerPentagramStep {
  std::size_t iteration = 0;
  double scale = 1.0;                          // factor applied by renormalization
  std::vector<std::vector<double>> distances;  // pairwise line distances
  std::vector<std::vector<double>> gram;       // direction cosines
  double distance_ratio = 0.0;  // min/max nonzero distance
  double cos_product = 0.0;     // product of |d_i . d_{i+1}|
  double gram_det = 0.0;        // det of the first three directions' Gram matrix
  double min_sine = 0.0;        // smallest |d_i x d_j|
  double coaxial_residual = 0.0;  // against the axis, when one is given
};

struct SkewerPentagramOrbit {
  std::size_t n = 0;
  std::size_t iterations_requested = 0;
  std::size_t iterations_completed = 0;
  bool truncated = false;
  std::string truncation;
  std::vector<SkewerPentagramStep> steps;
  std::vector<EucLine> final_lines;
  double max_coaxial_residual = 0.0;
};

struct SkewerPentagramOptions {
  bool record_matrices = true;
  const EucLine* axis = nullptr;  // co-axial check: every line should meet it at right angle
};

/// Iterates the map, recentring and rescaling the tuple each step. A
/// parallel pair ends the orbit with truncation = "ParallelEncountered".
SkewerPentagramOrbit skewer_pentagram_orbit(std::vector<EucLine> lines, std::size_t iterations,
                                            const SkewerPentagramOptions& opts = {});

/// Random lines through a box, and random members of N_axis.
std::vector<EucLine> random_euclidean_lines(std::size_t n, Rng& rng);
std::vector<EucLine> coaxial_lines(const EucLine& axis, std::size_t n, Rng& rng);

}  // namespace pcl
