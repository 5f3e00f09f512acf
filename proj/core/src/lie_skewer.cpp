#include "pcl/lie_skewer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace pcl {

namespace {

using V = Vec3<double>;

double norm(const V& v) { return std::sqrt(dot(v, v)); }

V unit_vec(const V& v) {
  const double n = norm(v);
  if (n == 0.0) fail(ErrorKind::InvalidArgument, "zero vector");
  return scaled(v, 1.0 / n);
}

double clamp_cos(double c) { return std::clamp(c, -1.0, 1.0); }

/// Orthonormal e1, e2 completing the unit vector n.
std::array<V, 2> frame(const V& n) {
  const V seed = std::fabs(n[0]) < 0.6 ? V{1.0, 0.0, 0.0} : V{0.0, 1.0, 0.0};
  const V e1 = unit_vec(cross(n, seed));
  return {e1, cross(n, e1)};
}

V on_circle(const V& n, double radius, double t) {
  const auto [e1, e2] = frame(n);
  return scaled(n, std::cos(radius)) + scaled(scaled(e1, std::cos(t)) + scaled(e2, std::sin(t)), std::sin(radius));
}

/// Circumcircle of three unit vectors as (unit normal, angular radius).
std::pair<V, double> circumcircle(const V& p1, const V& p2, const V& p3, double eps) {
  V n = cross(p2 - p1, p3 - p1);
  const double size = norm(n);
  if (size <= eps * std::max({norm(p2 - p1), norm(p3 - p1), 1e-300}))
    fail(ErrorKind::DegenerateCircumcircle, "three points on a great circle through one point");
  n = scaled(n, 1.0 / size);
  double d = dot(n, p1);
  if (d < 0) {
    n = -n;
    d = -d;
  }
  return {n, std::acos(clamp_cos(d))};
}

double circle_residual(const V& n, double radius, const V& x) {
  return std::fabs(std::acos(clamp_cos(dot(n, unit_vec(x)))) - radius);
}

}  // namespace

// ---------------------------------------------------------------------------
// Elliptic model

Matrix3<Rational> cayley_rotation(const Vec3<Rational>& axis, const Rational& t) {
  const Vec3<Rational> w = scaled(axis, t);
  const Rational k = Rational(2) / (Rational(1) + dot(w, w));
  Matrix3<Rational> wx{};
  wx[0] = {Rational(0), Rational(-w[2]), w[1]};
  wx[1] = {w[2], Rational(0), Rational(-w[0])};
  wx[2] = {Rational(-w[1]), w[0], Rational(0)};
  const Matrix3<Rational> wx2 = mul(wx, wx);
  Matrix3<Rational> r = identity3<Rational>();
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) r[i][j] += k * (wx[i][j] + wx2[i][j]);
  return r;
}

double AxialCongruence::residual(const EllipticLine<double>& line) const {
  return std::max(circle_residual(axis.minus, c_minus, line.minus), circle_residual(axis.plus, c_plus, line.plus));
}

EllipticLine<double> AxialCongruence::sample(double t_minus, double t_plus) const {
  return {on_circle(axis.minus, c_minus, t_minus), on_circle(axis.plus, c_plus, t_plus)};
}

EllipticLine<Rational> RationalCongruence::sample(const Rational& t_minus, const Rational& t_plus) const {
  return {mul(cayley_rotation(axis.minus, t_minus), base.minus), mul(cayley_rotation(axis.plus, t_plus), base.plus)};
}

AxialCongruence RationalCongruence::numeric() const {
  const auto a = unit(to_double(axis));
  const auto b = unit(to_double(base));
  return {a, std::acos(clamp_cos(dot(a.minus, b.minus))), std::acos(clamp_cos(dot(a.plus, b.plus)))};
}

EllipticLine<double> to_double(const EllipticLine<Rational>& l) {
  auto conv = [](const Vec3<Rational>& v) { return V{v[0].get_d(), v[1].get_d(), v[2].get_d()}; };
  return {conv(l.minus), conv(l.plus)};
}

EllipticLine<double> unit(const EllipticLine<double>& l) { return {unit_vec(l.minus), unit_vec(l.plus)}; }

AxialCongruence through_three(const EllipticLine<double>& l1, const EllipticLine<double>& l2,
                              const EllipticLine<double>& l3, double eps) {
  const auto a = unit(l1), b = unit(l2), c = unit(l3);
  const auto [nm, rm] = circumcircle(a.minus, b.minus, c.minus, eps);
  const auto [np, rp] = circumcircle(a.plus, b.plus, c.plus, eps);
  return {{nm, np}, rm, rp};
}

std::vector<V> circle_meet(const V& n1, double c1, const V& n2, double c2, double eps) {
  const double g = dot(n1, n2);
  const double s2 = 1.0 - g * g;
  if (s2 <= eps) return {};
  const double h1 = std::cos(c1), h2 = std::cos(c2);
  const double alpha = (h1 - g * h2) / s2, beta = (h2 - g * h1) / s2;
  const V x0 = scaled(n1, alpha) + scaled(n2, beta);
  const double h = 1.0 - dot(x0, x0);
  if (h < -eps) return {};
  const V w = scaled(cross(n1, n2), 1.0 / std::sqrt(s2));
  if (h <= eps * eps) return {unit_vec(x0)};
  const double r = std::sqrt(h);
  return {x0 + scaled(w, r), x0 - scaled(w, r)};
}

std::vector<EllipticLine<double>> shared_lines(const AxialCongruence& c1, const AxialCongruence& c2, double eps) {
  const auto m = circle_meet(c1.axis.minus, c1.c_minus, c2.axis.minus, c2.c_minus, eps);
  const auto p = circle_meet(c1.axis.plus, c1.c_plus, c2.axis.plus, c2.c_plus, eps);
  if (m.empty() || p.empty()) fail(ErrorKind::NoSharedLine, "circles on one sphere do not meet");
  std::vector<EllipticLine<double>> out;
  for (std::size_t k = 0; k < std::min(m.size(), p.size()); ++k) out.push_back({m[k], p[k]});
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j)
      if (i != j) out.push_back({m[i], p[j]});
  return out;
}

EllipticLine<double> other_shared_line(const AxialCongruence& c1, const AxialCongruence& c2,
                                       const EllipticLine<double>& known, double eps) {
  const auto m = circle_meet(c1.axis.minus, c1.c_minus, c2.axis.minus, c2.c_minus, eps);
  const auto p = circle_meet(c1.axis.plus, c1.c_plus, c2.axis.plus, c2.c_plus, eps);
  if (m.size() < 2 || p.size() < 2) fail(ErrorKind::NoSharedLine, "circles on one sphere are tangent or disjoint");
  const auto k = unit(known);
  auto far = [](const std::vector<V>& xs, const V& x) {
    return norm(xs[0] - x) > norm(xs[1] - x) ? xs[0] : xs[1];
  };
  return {far(m, k.minus), far(p, k.plus)};
}

// ---------------------------------------------------------------------------
// Hyperbolic model

HypLine<Complex> h3_line_through_points(const H3Point& p1, const H3Point& p2) {
  const double gap = std::abs(p2.z - p1.z);
  const double size = 1.0 + std::abs(p1.z) + std::abs(p2.z) + p1.t + p2.t;
  if (p1.t <= 0.0 || p2.t <= 0.0) fail(ErrorKind::InvalidArgument, "point not above the boundary");
  if (gap <= 1e-14 * size && std::fabs(p1.t - p2.t) <= 1e-14 * size)
    fail(ErrorKind::CoincidentPoints, "geodesic through one point");
  if (gap <= 1e-14 * size) return {-p1.z, Complex(0.5), Complex(0.0)};
  const Complex u = (p2.z - p1.z) / gap;
  const double c = (gap * gap + p2.t * p2.t - p1.t * p1.t) / (2.0 * gap);
  const double r = std::hypot(c, p1.t);
  const Complex p = p1.z + (c - r) * u, q = p1.z + (c + r) * u;
  return {p * q, -(p + q) / 2.0, Complex(1.0)};
}

H3Point h3_geodesic_point(Complex p, Complex q, double theta) {
  const double len = std::abs(q - p);
  if (len == 0.0) fail(ErrorKind::CoincidentPoints, "geodesic endpoints coincide");
  const double r = len / 2.0;
  const Complex u = (q - p) / len;
  return {(p + q) / 2.0 - r * std::cos(theta) * u, r * std::sin(theta)};
}

double hyp_share_residual(const HypLine<Complex>& f, const HypLine<Complex>& g, const HypLine<Complex>& h) {
  auto unit_row = [](const HypLine<Complex>& x) {
    Vec3<Complex> r = x.row();
    const double n = std::sqrt(std::norm(r[0]) + std::norm(r[1]) + std::norm(r[2]));
    for (auto& v : r) v /= n;
    return r;
  };
  return std::abs(det3(unit_row(f), unit_row(g), unit_row(h)));
}

// ---------------------------------------------------------------------------
// Euclidean model

EucLine EucLine::through(const V& p, const V& d) { return {p, unit_vec(d)}; }

V EucLine::at(double s) const { return p + scaled(d, s); }

EucLine skewer_euclidean(const EucLine& l1, const EucLine& l2, double eps) {
  const V n = cross(l1.d, l2.d);
  const double s2 = dot(n, n);
  if (s2 <= eps * eps) fail(ErrorKind::ParallelLines, "lines are parallel");
  const V r = l1.p - l2.p;
  const double b = dot(l1.d, l2.d), d = dot(l1.d, r), e = dot(l2.d, r);
  const double s = (b * e - d) / s2;
  return EucLine::through(l1.at(s), n);
}

double right_angle_residual(const EucLine& s, const EucLine& l) {
  const V n = cross(s.d, l.d);
  const double nn = norm(n);
  const V r = l.p - s.p;
  const double dist = nn > 1e-12 ? std::fabs(dot(r, n)) / nn : norm(cross(r, s.d));
  return std::fabs(dot(s.d, l.d)) + dist;
}

double euclidean_share_residual(const EucLine& l1, const EucLine& l2, const EucLine& l3) {
  return right_angle_residual(skewer_euclidean(l1, l2), l3);
}

// ---------------------------------------------------------------------------
// Theorem drivers

const std::vector<SkewerTheorem>& skewer_theorems() {
  static const std::vector<SkewerTheorem> list{
      {"sk-pappus-E", "a_i in N_s, b_i in N_t: S(S(a_i,b_j),S(a_j,b_i)) share a skewer (elliptic)", true, 0.0},
      {"sk-pappus-H", "a_i in N_s, b_i in N_t: S(S(a_i,b_j),S(a_j,b_i)) share a skewer (hyperbolic)", true, 0.0},
      {"sk-desargues-E", "S(a_i,b_i) share a skewer => S(S(a_i,a_j),S(b_i,b_j)) share a skewer (elliptic)", true, 0.0},
      {"sk-desargues-H", "S(a_i,b_i) share a skewer => S(S(a_i,a_j),S(b_i,b_j)) share a skewer (hyperbolic)", true,
       0.0},
      {"petersen-morley-E", "S(S(a,b),c), S(S(b,c),a), S(S(c,a),b) share a skewer (elliptic)", true, 0.0},
      {"petersen-morley-H", "S(S(a,b),c), S(S(b,c),a), S(S(c,a),b) share a skewer (hyperbolic)", true, 0.0},
      {"petersen-morley-R3", "S(S(a,b),c), S(S(b,c),a), S(S(c,a),b) share a skewer (Euclidean)", false, 1e-9},
      {"sk-pascal-E", "A_1..A_6 in an axial congruence: S(S(A_i,A_i+1),S(A_i+3,A_i+4)) share a skewer", true, 0.0},
      {"clifford-1-E", "C_1..C_4 share a line: C_123, C_234, C_341, C_412 share a line", false, 1e-8},
      {"clifford-2-E", "C_1..C_5 share a line: the five lines of the 4-subsets lie in an axial congruence", false,
       1e-8},
      {"other-pappus-H3", "A_i on l, B_j on m: S((A_1B_2),(A_2B_1)), S((A_2B_3),(A_3B_2)), S((A_3B_1),(A_1B_3)) "
                          "share a skewer",
       false, 1e-8},
  };
  return list;
}

const SkewerTheorem& skewer_theorem(const std::string& id) {
  for (const auto& th : skewer_theorems())
    if (th.id == id) return th;
  fail(ErrorKind::NotFound, "unknown skewer theorem '" + id + "'");
}

namespace {

constexpr long kBound = 9;

Vec3<Rational> random_vec(Rng& rng) {
  Vec3<Rational> v;
  do {
    v = from_ints<Rational>(rng.uniform_int(-kBound, kBound), rng.uniform_int(-kBound, kBound),
                            rng.uniform_int(-kBound, kBound));
  } while (is_zero_vec(v));
  return v;
}

Rational nonzero_rational(Rng& rng) {
  Rational r;
  do r = rng.rational(kBound);
  while (sgn(r) == 0);
  return r;
}

EllipticLine<Rational> random_elliptic(Rng& rng) { return {random_vec(rng), random_vec(rng)}; }

/// Member of N_s: both components orthogonal to those of s.
EllipticLine<Rational> normal_elliptic(const EllipticLine<Rational>& s, Rng& rng) {
  EllipticLine<Rational> l{cross(s.minus, random_vec(rng)), cross(s.plus, random_vec(rng))};
  if (is_zero_vec(l.minus) || is_zero_vec(l.plus)) fail(ErrorKind::DegenerateInput, "zero component");
  return l;
}

GaussianRational random_gaussian(Rng& rng) {
  return {Rational(rng.uniform_int(-kBound, kBound)), Rational(rng.uniform_int(-kBound, kBound))};
}

using GLine = HypLine<GaussianRational>;

GLine checked(GLine f) {
  if (f.discriminant().is_zero()) fail(ErrorKind::DegenerateInput, "form on the diagonal conic");
  return f;
}

GLine random_hyp(Rng& rng) { return checked({random_gaussian(rng), random_gaussian(rng), random_gaussian(rng)}); }

/// Member of N_s: Delta-orthogonal to s.
GLine normal_hyp(const GLine& s, Rng& rng) {
  const Vec3<GaussianRational> functional{s.c, GaussianRational(-2L) * s.b, s.a};
  const Vec3<GaussianRational> r{random_gaussian(rng), random_gaussian(rng), random_gaussian(rng)};
  const auto v = cross(functional, r);
  return checked({v[0], v[1], v[2]});
}

GLine combine(const GLine& f, const GLine& g, Rng& rng) {
  const GaussianRational x = random_gaussian(rng), y = random_gaussian(rng);
  return checked({x * f.a + y * g.a, x * f.b + y * g.b, x * f.c + y * g.c});
}

EllipticLine<Rational> combine(const EllipticLine<Rational>& f, const EllipticLine<Rational>& g, Rng& rng) {
  return {scaled(f.minus, nonzero_rational(rng)) + scaled(g.minus, nonzero_rational(rng)),
          scaled(f.plus, nonzero_rational(rng)) + scaled(g.plus, nonzero_rational(rng))};
}

template <class T>
std::string vec_text(const Vec3<T>& v) {
  return "(" + scalar_to_string(v[0]) + ":" + scalar_to_string(v[1]) + ":" + scalar_to_string(v[2]) + ")";
}

Witness line_witness(const std::vector<EllipticLine<Rational>>& lines, const std::string& prefix) {
  Witness w;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    w.emplace_back(prefix + std::to_string(i + 1) + "-", vec_text(lines[i].minus));
    w.emplace_back(prefix + std::to_string(i + 1) + "+", vec_text(lines[i].plus));
  }
  return w;
}

Witness line_witness(const std::vector<GLine>& lines, const std::string& prefix) {
  Witness w;
  for (std::size_t i = 0; i < lines.size(); ++i) w.emplace_back(prefix + std::to_string(i + 1), vec_text(lines[i].row()));
  return w;
}

TrialOutcome elliptic_outcome(const std::array<EllipticLine<Rational>, 3>& t) {
  if (skewer_triple_degenerate(t[0], t[1], t[2])) fail(ErrorKind::DegenerateInput, "conclusion lines coincide");
  const auto d = skewer_determinants(t[0], t[1], t[2]);
  TrialOutcome out;
  out.passed = sgn(d[0]) == 0 && sgn(d[1]) == 0;
  out.residual = std::max(std::fabs(d[0].get_d()), std::fabs(d[1].get_d()));
  out.residual_text = out.passed ? "0" : d[0].get_str() + "," + d[1].get_str();
  out.notes.emplace_back("det-", d[0].get_str());
  out.notes.emplace_back("det+", d[1].get_str());
  return out;
}

TrialOutcome hyp_outcome(const std::array<GLine, 3>& t) {
  for (int i = 0; i < 3; ++i)
    if (proportional(t[i].row(), t[(i + 1) % 3].row())) fail(ErrorKind::DegenerateInput, "conclusion lines coincide");
  const auto d = skewer_determinant(t[0], t[1], t[2]);
  TrialOutcome out;
  out.passed = d.is_zero();
  out.residual = magnitude(d);
  out.residual_text = out.passed ? "0" : scalar_to_string(d);
  out.notes.emplace_back("det", scalar_to_string(d));
  return out;
}

template <class L>
std::array<L, 3> pappus_conclusion(const std::array<L, 3>& a, const std::array<L, 3>& b, auto skewer) {
  auto at = [&](int i, int j) { return skewer(skewer(a[i], b[j]), skewer(a[j], b[i])); };
  return {at(0, 1), at(0, 2), at(1, 2)};
}

template <class L>
std::array<L, 3> desargues_conclusion(const std::array<L, 3>& a, const std::array<L, 3>& b, auto skewer) {
  auto at = [&](int i, int j) { return skewer(skewer(a[i], a[j]), skewer(b[i], b[j])); };
  return {at(0, 1), at(0, 2), at(1, 2)};
}

template <class L>
std::array<L, 3> morley_conclusion(const L& a, const L& b, const L& c, auto skewer) {
  return {skewer(skewer(a, b), c), skewer(skewer(b, c), a), skewer(skewer(c, a), b)};
}

auto ell_skewer = [](const EllipticLine<Rational>& l, const EllipticLine<Rational>& m) {
  return skewer_elliptic(l, m);
};
auto hyp_skewer = [](const GLine& f, const GLine& g) { return skewer_hyp(f, g); };
auto euc_skewer = [](const EucLine& l, const EucLine& m) { return skewer_euclidean(l, m, 1e-6); };

TrialOutcome trial_pappus_e(Rng& rng) {
  const auto s = random_elliptic(rng), t = random_elliptic(rng);
  std::array<EllipticLine<Rational>, 3> a, b;
  for (int i = 0; i < 3; ++i) a[i] = normal_elliptic(s, rng), b[i] = normal_elliptic(t, rng);
  auto out = elliptic_outcome(pappus_conclusion(a, b, ell_skewer));
  if (!out.passed) out.witness = line_witness({a[0], a[1], a[2], b[0], b[1], b[2]}, "L");
  return out;
}

TrialOutcome trial_pappus_h(Rng& rng) {
  const auto s = random_hyp(rng), t = random_hyp(rng);
  std::array<GLine, 3> a, b;
  for (int i = 0; i < 3; ++i) a[i] = normal_hyp(s, rng), b[i] = normal_hyp(t, rng);
  auto out = hyp_outcome(pappus_conclusion(a, b, hyp_skewer));
  if (!out.passed) out.witness = line_witness({a[0], a[1], a[2], b[0], b[1], b[2]}, "f");
  return out;
}

TrialOutcome trial_desargues_e(Rng& rng) {
  const auto s = random_elliptic(rng);
  std::array<EllipticLine<Rational>, 3> a, b;
  for (int i = 0; i < 3; ++i) a[i] = random_elliptic(rng), b[i] = combine(a[i], s, rng);
  auto out = elliptic_outcome(desargues_conclusion(a, b, ell_skewer));
  if (!out.passed) out.witness = line_witness({a[0], a[1], a[2], b[0], b[1], b[2]}, "L");
  return out;
}

TrialOutcome trial_desargues_h(Rng& rng) {
  const auto s = random_hyp(rng);
  std::array<GLine, 3> a, b;
  for (int i = 0; i < 3; ++i) a[i] = random_hyp(rng), b[i] = combine(a[i], s, rng);
  auto out = hyp_outcome(desargues_conclusion(a, b, hyp_skewer));
  if (!out.passed) out.witness = line_witness({a[0], a[1], a[2], b[0], b[1], b[2]}, "f");
  return out;
}

TrialOutcome trial_morley_e(Rng& rng) {
  const auto a = random_elliptic(rng), b = random_elliptic(rng), c = random_elliptic(rng);
  auto out = elliptic_outcome(morley_conclusion(a, b, c, ell_skewer));
  if (!out.passed) out.witness = line_witness({a, b, c}, "L");
  return out;
}

TrialOutcome trial_morley_h(Rng& rng) {
  const auto a = random_hyp(rng), b = random_hyp(rng), c = random_hyp(rng);
  auto out = hyp_outcome(morley_conclusion(a, b, c, hyp_skewer));
  if (!out.passed) out.witness = line_witness({a, b, c}, "f");
  return out;
}

TrialOutcome trial_morley_r3(Rng& rng, double tol) {
  const auto lines = random_euclidean_lines(3, rng);
  const auto t = morley_conclusion(lines[0], lines[1], lines[2], euc_skewer);
  const double r = std::max({euclidean_share_residual(t[0], t[1], t[2]), euclidean_share_residual(t[1], t[2], t[0]),
                             euclidean_share_residual(t[2], t[0], t[1])});
  return numeric_outcome(r, tol);
}

RationalCongruence random_congruence(Rng& rng, const EllipticLine<Rational>& base) {
  return {random_elliptic(rng), base};
}

TrialOutcome trial_pascal_e(Rng& rng) {
  const auto cong = random_congruence(rng, random_elliptic(rng));
  std::array<EllipticLine<Rational>, 6> a;
  for (auto& x : a) x = cong.sample(rng.rational(kBound), rng.rational(kBound));
  auto at = [&](int i) {
    return skewer_elliptic(skewer_elliptic(a[i], a[(i + 1) % 6]), skewer_elliptic(a[(i + 3) % 6], a[(i + 4) % 6]));
  };
  auto out = elliptic_outcome({at(0), at(1), at(2)});
  if (!out.passed) out.witness = line_witness(std::vector<EllipticLine<Rational>>(a.begin(), a.end()), "A");
  return out;
}

/// Line shared by C_i, C_j, C_k, C_l beyond the chain; residual of it on
/// the last two triple congruences.
struct CliffordLine {
  EllipticLine<double> line;
  double residual = 0.0;
};

EllipticLine<double> pair_line(const std::vector<AxialCongruence>& c, const EllipticLine<double>& l0, int i, int j) {
  return other_shared_line(c[i], c[j], l0);
}

CliffordLine clifford_line(const std::vector<AxialCongruence>& c, const EllipticLine<double>& l0,
                           const std::array<int, 4>& idx) {
  auto l = [&](int a, int b) { return pair_line(c, l0, idx[a], idx[b]); };
  auto triple = [&](int a, int b, int d) { return through_three(l(a, b), l(b, d), l(d, a)); };
  const auto c123 = triple(0, 1, 2), c234 = triple(1, 2, 3), c341 = triple(2, 3, 0), c412 = triple(3, 0, 1);
  CliffordLine out;
  out.line = other_shared_line(c123, c234, l(1, 2));
  out.residual = std::max(c341.residual(out.line), c412.residual(out.line));
  return out;
}

std::vector<AxialCongruence> congruences_through(const EllipticLine<Rational>& l0, int count, Rng& rng) {
  std::vector<AxialCongruence> c;
  for (int i = 0; i < count; ++i) c.push_back(random_congruence(rng, l0).numeric());
  return c;
}

TrialOutcome trial_clifford_1(Rng& rng, double tol) {
  const auto l0 = random_elliptic(rng);
  const auto c = congruences_through(l0, 4, rng);
  const auto x = clifford_line(c, unit(to_double(l0)), {0, 1, 2, 3});
  return numeric_outcome(x.residual, tol);
}

TrialOutcome trial_clifford_2(Rng& rng, double tol) {
  const auto l0 = random_elliptic(rng);
  const auto c = congruences_through(l0, 5, rng);
  const auto u0 = unit(to_double(l0));
  std::vector<EllipticLine<double>> x;
  double chain = 0.0;
  for (int skip = 0; skip < 5; ++skip) {
    std::array<int, 4> idx{};
    for (int i = 0, k = 0; i < 5; ++i)
      if (i != skip) idx[k++] = i;
    const auto cl = clifford_line(c, u0, idx);
    chain = std::max(chain, cl.residual);
    x.push_back(cl.line);
  }
  const auto cong = through_three(x[0], x[1], x[2]);
  const double r = std::max(cong.residual(x[3]), cong.residual(x[4]));
  auto out = numeric_outcome(std::max(r, chain), tol);
  out.notes.emplace_back("chain_residual", format_double(chain));
  return out;
}

TrialOutcome trial_other_pappus(Rng& rng, double tol) {
  auto endpoint = [&] { return Complex(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)); };
  const Complex p = endpoint(), q = endpoint(), p2 = endpoint(), q2 = endpoint();
  if (std::min({std::abs(p - q), std::abs(p2 - q2), std::abs(p - p2), std::abs(q - q2), std::abs(p - q2),
                std::abs(q - p2)}) < 0.2)
    fail(ErrorKind::DegenerateInput, "endpoints too close");
  std::array<H3Point, 3> a, b;
  for (int i = 0; i < 3; ++i) {
    a[i] = h3_geodesic_point(p, q, rng.uniform(0.3, 2.8));
    b[i] = h3_geodesic_point(p2, q2, rng.uniform(0.3, 2.8));
  }
  auto join = [&](int i, int j) { return h3_line_through_points(a[i], b[j]); };
  auto at = [&](int i, int j) { return skewer_hyp(join(i, j), join(j, i)); };
  const auto s1 = at(0, 1), s2 = at(1, 2), s3 = at(2, 0);
  return numeric_outcome(hyp_share_residual(s1, s2, s3), tol);
}

}  // namespace

VerificationReport run_skewer_theorem(const std::string& id, std::size_t trials, std::uint64_t seed) {
  const SkewerTheorem& th = skewer_theorem(id);
  const double tol = th.tolerance;
  std::function<TrialOutcome(Rng&)> trial;
  std::string model = "elliptic";
  if (id == "sk-pappus-E") {
    trial = trial_pappus_e;
  } else if (id == "sk-pappus-H") {
    trial = trial_pappus_h;
  } else if (id == "sk-desargues-E") {
    trial = trial_desargues_e;
  } else if (id == "sk-desargues-H") {
    trial = trial_desargues_h;
  } else if (id == "petersen-morley-E") {
    trial = trial_morley_e;
  } else if (id == "petersen-morley-H") {
    trial = trial_morley_h;
  } else if (id == "petersen-morley-R3") {
    trial = [tol](Rng& rng) { return trial_morley_r3(rng, tol); };
  } else if (id == "sk-pascal-E") {
    trial = trial_pascal_e;
  } else if (id == "clifford-1-E") {
    trial = [tol](Rng& rng) { return trial_clifford_1(rng, tol); };
  } else if (id == "clifford-2-E") {
    trial = [tol](Rng& rng) { return trial_clifford_2(rng, tol); };
  } else {
    trial = [tol](Rng& rng) { return trial_other_pappus(rng, tol); };
  }
  if (id.ends_with("-H")) model = "hyperbolic";
  if (id.ends_with("-R3")) model = "euclidean";
  if (id.ends_with("-H3")) model = "hyperbolic (numeric)";
  auto report = run_trials(id, trials, seed, th.exact, tol, trial);
  report.metadata.emplace_back("model", model);
  report.metadata.emplace_back("statement", th.statement);
  return report;
}

// ---------------------------------------------------------------------------
// Hesse configuration

std::vector<HypLine<EisensteinRational>> hesse_forms(const Matrix3<Rational>& frame) {
  using E = EisensteinRational;
  const E zero(0L), one(1L);
  std::array<E, 3> powers{one, E::theta(), E::theta() * E::theta()};
  std::vector<Vec3<E>> rows;
  for (const auto& wk : powers) rows.push_back({zero, one, -wk});
  for (const auto& wk : powers) rows.push_back({one, zero, -wk});
  for (const auto& wk : powers) rows.push_back({one, -wk, zero});
  std::vector<HypLine<E>> forms;
  for (const auto& r : rows) {
    Vec3<E> v{};
    for (std::size_t i = 0; i < 3; ++i) v[i] = E(frame[i][0]) * r[0] + E(frame[i][1]) * r[1] + E(frame[i][2]) * r[2];
    forms.push_back({v[0], v[1], v[2]});
  }
  return forms;
}

Matrix3<Rational> hesse_general_frame() {
  Matrix3<Rational> m{};
  const long entries[3][3] = {{1, 1, 0}, {0, 1, 2}, {1, -1, 1}};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) m[i][j] = entries[i][j];
  return m;
}

HesseSylvesterResult hesse_sylvester_check(const Matrix3<Rational>& frame) {
  using E = EisensteinRational;
  if (sgn(det3(frame[0], frame[1], frame[2])) == 0) fail(ErrorKind::InvalidArgument, "singular frame");
  HesseSylvesterResult r;
  r.forms = hesse_forms(frame);
  r.nondegenerate =
      std::all_of(r.forms.begin(), r.forms.end(), [](const auto& f) { return !f.discriminant().is_zero(); });
  r.sylvester = true;
  const int n = static_cast<int>(r.forms.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      int third = -1;
      try {
        const auto s = skewer_hyp(r.forms[i], r.forms[j]);
        for (int k = 0; k < n && third < 0; ++k)
          if (k != i && k != j && delta_pairing(s, r.forms[k]).is_zero()) third = k;
      } catch (const GeometryError& e) {
        if (e.kind() != ErrorKind::BracketOnDiagonal) throw;
        ++r.diagonal_pairs;
      }
      if (third < 0) r.sylvester = false;
      r.triples.push_back({i, j, third});
    }
  std::vector<std::vector<E>> rows;
  for (const auto& f : r.forms) rows.push_back({f.a, f.b, f.c});
  r.rank = rank_of(rows);
  return r;
}

HesseSylvesterResult hesse_sylvester_check() { return hesse_sylvester_check(hesse_general_frame()); }

VerificationReport hesse_sylvester_report(const HesseSylvesterResult& r) {
  VerificationReport rep;
  rep.theorem_id = "hesse-sylvester-H";
  rep.trials_requested = rep.trials_completed = 1;
  rep.exact = true;
  TrialResult t;
  t.passed = r.counterexample();
  t.residual = t.passed ? 0.0 : 1.0;
  t.residual_text = t.passed ? "0" : "1";
  t.notes.emplace_back("nondegenerate", r.nondegenerate ? "true" : "false");
  t.notes.emplace_back("sylvester", r.sylvester ? "true" : "false");
  t.notes.emplace_back("rank", std::to_string(r.rank));
  t.notes.emplace_back("diagonal_pairs", std::to_string(r.diagonal_pairs));
  rep.trials.push_back(t);
  rep.verdict = t.passed ? Verdict::Verified : Verdict::Falsified;
  rep.metadata.emplace_back("model", "hyperbolic over Q(omega)");
  rep.metadata.emplace_back("statement", "nine lines with the skewer Sylvester property and no common skewer");
  return rep;
}

// ---------------------------------------------------------------------------
// Skewer pentagram map

std::vector<EucLine> skewer_pentagram_step(const std::vector<EucLine>& lines, double eps) {
  const std::size_t n = lines.size();
  if (n < 5) fail(ErrorKind::InvalidArgument, "need at least five lines");
  std::vector<EucLine> inner(n);
  for (std::size_t i = 0; i < n; ++i) inner[i] = skewer_euclidean(lines[i], lines[(i + 2) % n], eps);
  std::vector<EucLine> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = skewer_euclidean(inner[i], inner[(i + 1) % n], eps);
  return out;
}

namespace {

double line_distance(const EucLine& a, const EucLine& b) {
  const V n = cross(a.d, b.d);
  const double nn = norm(n);
  const V r = b.p - a.p;
  return nn > 1e-12 ? std::fabs(dot(r, n)) / nn : norm(cross(r, a.d));
}

/// Foot of the perpendicular from the origin.
EucLine foot(const EucLine& l) { return {l.p - scaled(l.d, dot(l.p, l.d)), l.d}; }

}  // namespace

SkewerPentagramOrbit skewer_pentagram_orbit(std::vector<EucLine> lines, std::size_t iterations,
                                            const SkewerPentagramOptions& opts) {
  SkewerPentagramOrbit orbit;
  orbit.n = lines.size();
  orbit.iterations_requested = iterations;
  std::optional<EucLine> axis;
  if (opts.axis) axis = *opts.axis;
  const std::size_t n = lines.size();
  for (std::size_t it = 1; it <= iterations; ++it) {
    try {
      lines = skewer_pentagram_step(lines);
    } catch (const GeometryError& e) {
      if (e.kind() != ErrorKind::ParallelLines) throw;
      orbit.truncated = true;
      orbit.truncation = "ParallelEncountered";
      break;
    }
    V centre{};
    for (auto& l : lines) {
      l = foot(l);
      centre = centre + l.p;
    }
    centre = scaled(centre, 1.0 / static_cast<double>(n));
    double size = 0.0;
    for (auto& l : lines) {
      l.p = l.p - centre;
      size = std::max(size, norm(l.p));
    }
    const double k = size > 0.0 ? 1.0 / size : 1.0;
    for (auto& l : lines) l.p = scaled(l.p, k);
    if (axis) axis = EucLine{scaled(axis->p - centre, k), axis->d};
    if (!std::isfinite(size)) {
      orbit.truncated = true;
      orbit.truncation = "Overflow";
      break;
    }

    SkewerPentagramStep step;
    step.iteration = it;
    step.scale = k;
    double dmin = INFINITY, dmax = 0.0;
    step.min_sine = 1.0;
    step.cos_product = 1.0;
    if (opts.record_matrices) {
      step.distances.assign(n, std::vector<double>(n, 0.0));
      step.gram.assign(n, std::vector<double>(n, 1.0));
    }
    for (std::size_t i = 0; i < n; ++i) {
      step.cos_product *= std::fabs(dot(lines[i].d, lines[(i + 1) % n].d));
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dist = line_distance(lines[i], lines[j]);
        const double g = dot(lines[i].d, lines[j].d);
        step.min_sine = std::min(step.min_sine, norm(cross(lines[i].d, lines[j].d)));
        if (dist > 0.0) dmin = std::min(dmin, dist);
        dmax = std::max(dmax, dist);
        if (opts.record_matrices) {
          step.distances[i][j] = step.distances[j][i] = dist;
          step.gram[i][j] = step.gram[j][i] = g;
        }
      }
    }
    step.distance_ratio = dmax > 0.0 && std::isfinite(dmin) ? dmin / dmax : 0.0;
    step.gram_det = std::fabs(det3(lines[0].d, lines[1].d, lines[2].d));
    step.gram_det *= step.gram_det;
    if (axis) {
      for (const auto& l : lines) step.coaxial_residual = std::max(step.coaxial_residual, right_angle_residual(*axis, l));
      orbit.max_coaxial_residual = std::max(orbit.max_coaxial_residual, step.coaxial_residual);
    }
    orbit.steps.push_back(std::move(step));
    orbit.iterations_completed = it;
  }
  orbit.final_lines = lines;
  return orbit;
}

std::vector<EucLine> random_euclidean_lines(std::size_t n, Rng& rng) {
  std::vector<EucLine> out;
  while (out.size() < n) {
    const V p{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const V d{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    if (norm(d) < 0.2) continue;
    out.push_back(EucLine::through(p, d));
  }
  return out;
}

std::vector<EucLine> coaxial_lines(const EucLine& axis, std::size_t n, Rng& rng) {
  const auto [e1, e2] = frame(axis.d);
  std::vector<EucLine> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = rng.uniform(0.0, 2.0 * std::numbers::pi);
    out.push_back(EucLine::through(axis.at(rng.uniform(-1, 1)), scaled(e1, std::cos(t)) + scaled(e2, std::sin(t))));
  }
  return out;
}

}  // namespace pcl
