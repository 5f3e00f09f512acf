#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "pcl/collineation.hpp"
#include "pcl/projective.hpp"

namespace pcl {

/// Quadrilateral A1 A3 B3 B1 with a distinguished point A2 on the top side
/// a = A1A3 and B2 on the bottom side b = B1B3. In the dual plane the same
/// structure holds with lines in place of points.
template <class T>
struct MarkedBox {
  Vec3<T> a1, a3, b3, b1, a2, b2;
  Space space = Space::Plane;

  Vec3<T> line_a() const { return normalized(cross(a1, a3)); }
  Vec3<T> line_b() const { return normalized(cross(b1, b3)); }
  Vec3<T> apex() const { return normalized(cross(line_a(), line_b())); }

  std::array<Vec3<T>, 6> points() const { return {a1, a3, b3, b1, a2, b2}; }

  /// The same marked box with the other labeling (A3,A1,B1,B3;A2,B2).
  MarkedBox relabeled() const { return {a3, a1, b1, b3, a2, b2, space}; }
};

template <class T>
bool is_convex(const MarkedBox<T>& m, double eps = kDefaultEps) {
  const Vec3<T> o = m.apex();
  const int sa = sign_of(cross_ratio(m.a1, m.a3, m.a2, o, eps), 1.0, ScalarTraits<T>::exact ? 0.0 : eps);
  const int sb = sign_of(cross_ratio(m.b1, m.b3, m.b2, o, eps), 1.0, ScalarTraits<T>::exact ? 0.0 : eps);
  return sa < 0 && sb < 0;
}

/// Validated construction: A2 on A1A3, B2 on B1B3, convexity.
template <class T>
MarkedBox<T> make_box(const Vec3<T>& a1, const Vec3<T>& a3, const Vec3<T>& b3, const Vec3<T>& b1,
                      const Vec3<T>& a2, const Vec3<T>& b2, Space space = Space::Plane,
                      double eps = kDefaultEps) {
  MarkedBox<T> m{normalized(a1), normalized(a3), normalized(b3), normalized(b1), normalized(a2),
                 normalized(b2), space};
  if (!dependent(m.a1, m.a3, m.a2, eps) || !dependent(m.b1, m.b3, m.b2, eps))
    fail(ErrorKind::NotIncident, "marked point off its side");
  try {
    if (!is_convex(m, eps)) fail(ErrorKind::NotConvex, "marked points do not separate");
  } catch (const GeometryError& e) {
    if (e.kind() == ErrorKind::NotConvex) throw;
    fail(ErrorKind::NotConvex, std::string("degenerate side: ") + e.what());
  }
  return m;
}

/// Labeled equality of two boxes, with the involution applied to the second
/// if needed.
template <class T>
bool same_box(const MarkedBox<T>& p, const MarkedBox<T>& q, double eps = kDefaultEps) {
  if (p.space != q.space) return false;
  auto eq = [&](const MarkedBox<T>& x, const MarkedBox<T>& y) {
    const auto xs = x.points();
    const auto ys = y.points();
    for (std::size_t k = 0; k < 6; ++k)
      if (!proportional(xs[k], ys[k], eps)) return false;
    return true;
  };
  return eq(p, q) || eq(p, q.relabeled());
}

/// Pappus points, labeled so that C1 lies on the A1 B1 side:
/// C1 = (A1 B2) ^ (A2 B1), C2 = (A1 B3) ^ (A3 B1), C3 = (A2 B3) ^ (A3 B2).
template <class T>
std::array<Vec3<T>, 3> pappus_points(const MarkedBox<T>& m, double eps = kDefaultEps) {
  auto c = [&](const Vec3<T>& ai, const Vec3<T>& bj, const Vec3<T>& aj, const Vec3<T>& bi) {
    const Vec3<T> l1 = cross(ai, bj);
    const Vec3<T> l2 = cross(aj, bi);
    const Vec3<T> p = cross(l1, l2);
    if (is_zero_vec(p, max_norm(l1) * max_norm(l2), eps))
      fail(ErrorKind::DegeneratePappus, "Pappus lines coincide");
    return normalized(p);
  };
  return {c(m.a1, m.b2, m.a2, m.b1), c(m.a1, m.b3, m.a3, m.b1), c(m.a2, m.b3, m.a3, m.b2)};
}

template <class T>
MarkedBox<T> op_tau1(const MarkedBox<T>& m, double eps = kDefaultEps) {
  const auto c = pappus_points(m, eps);
  return {m.a1, m.a3, c[2], c[0], m.a2, c[1], m.space};
}

template <class T>
MarkedBox<T> op_tau2(const MarkedBox<T>& m, double eps = kDefaultEps) {
  const auto c = pappus_points(m, eps);
  return {c[0], c[2], m.b3, m.b1, c[1], m.b2, m.space};
}

template <class T>
MarkedBox<T> op_i(const MarkedBox<T>& m) {
  return {m.b1, m.b3, m.a1, m.a3, m.b2, m.a2, m.space};
}

/// Apply a word over {i, t1, t2}, written as a composition (rightmost first),
/// e.g. "t1 i t2".
template <class T>
MarkedBox<T> apply_word(const MarkedBox<T>& m, const std::string& word, double eps = kDefaultEps) {
  std::vector<std::string> letters;
  std::string cur;
  for (char ch : word + " ") {
    if (ch == ' ') {
      if (!cur.empty()) letters.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  MarkedBox<T> r = m;
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
    if (*it == "i")
      r = op_i(r);
    else if (*it == "t1")
      r = op_tau1(r, eps);
    else if (*it == "t2")
      r = op_tau2(r, eps);
    else
      fail(ErrorKind::InvalidArgument, "unknown letter '" + *it + "'");
  }
  return r;
}

/// Class [x, y] under (x, y) ~ (1 - x, 1 - y), stored canonically.
template <class T>
struct BoxCoords {
  T x, y;

  friend bool operator==(const BoxCoords& p, const BoxCoords& q) {
    if constexpr (ScalarTraits<T>::exact) {
      return p.x == q.x && p.y == q.y;
    } else {
      return std::abs(p.x - q.x) <= 1e-9 && std::abs(p.y - q.y) <= 1e-9;
    }
  }
};

/// Canonical representative: x < 1/2, or x = 1/2 and y <= 1/2.
template <class T>
BoxCoords<T> canonical_coords(const T& x, const T& y) {
  const T half = ScalarTraits<T>::from_int(1) / ScalarTraits<T>::from_int(2);
  const T one = ScalarTraits<T>::from_int(1);
  const double tie = ScalarTraits<T>::exact ? 0.0 : 1e-12;
  const T dx = x - half;
  const int sx = sign_of(dx, 1.0, tie);
  const bool keep = sx < 0 || (sx == 0 && sign_of(T(y - half), 1.0, tie) <= 0);
  if (keep) return {x, y};
  return {T(one - x), T(one - y)};
}

/// Unit-square representative: A1 = (0,1), A3 = (1,1), B3 = (1,0),
/// B1 = (0,0), A2 = (x,1), B2 = (y,0).
template <class T>
MarkedBox<T> box_from_coords(const T& x, const T& y) {
  const T zero = ScalarTraits<T>::from_int(0);
  const T one = ScalarTraits<T>::from_int(1);
  return make_box<T>({zero, one, one}, {one, one, one}, {one, zero, one}, {zero, zero, one}, {x, one, one},
                     {y, zero, one});
}

/// Collineation taking the quadrilateral of m onto the unit square.
template <class T>
Collineation<T> unit_square_chart(const MarkedBox<T>& m, double eps = kDefaultEps) {
  const T zero = ScalarTraits<T>::from_int(0);
  const T one = ScalarTraits<T>::from_int(1);
  std::array<Vec3<T>, 4> src{m.a1, m.a3, m.b3, m.b1};
  std::array<Vec3<T>, 4> dst{Vec3<T>{zero, one, one}, Vec3<T>{one, one, one}, Vec3<T>{one, zero, one},
                             Vec3<T>{zero, zero, one}};
  return collineation_from_frames<T>(src, dst, Space::Plane, eps);
}

template <class T>
BoxCoords<T> box_coords(const MarkedBox<T>& m, double eps = kDefaultEps) {
  const auto chart = unit_square_chart(m, eps);
  const Vec3<T> a2 = mul(chart.m, m.a2);
  const Vec3<T> b2 = mul(chart.m, m.b2);
  return canonical_coords<T>(T(a2[0] / a2[2]), T(b2[0] / b2[2]));
}

/// Dual box (A2B1, A2B3, A1B2, A3B2; a, b), living in the opposite plane.
template <class T>
MarkedBox<T> dual_box(const MarkedBox<T>& m) {
  return {normalized(cross(m.a2, m.b1)), normalized(cross(m.a2, m.b3)), normalized(cross(m.a1, m.b2)),
          normalized(cross(m.a3, m.b2)), m.line_a(), m.line_b(), opposite(m.space)};
}

namespace detail {

/// Map whose first four labeled points send p onto q (or q relabeled), and
/// which matches all six labels.
template <class T>
std::optional<Collineation<T>> box_map(const MarkedBox<T>& p, const MarkedBox<T>& q, double eps) {
  for (const auto& target : {q, q.relabeled()}) {
    std::array<Vec3<T>, 4> src{p.a1, p.a3, p.b3, p.b1};
    std::array<Vec3<T>, 4> dst{target.a1, target.a3, target.b3, target.b1};
    Collineation<T> c;
    try {
      c = collineation_from_frames<T>(src, dst, p.space == q.space ? Space::Plane : Space::Dual, eps);
    } catch (const GeometryError&) {
      continue;
    }
    const auto ps = p.points();
    const auto qs = target.points();
    bool ok = true;
    for (std::size_t k = 0; k < 6 && ok; ++k) ok = proportional(mul(c.m, ps[k]), qs[k], eps);
    if (ok) return c;
  }
  return std::nullopt;
}

template <class T>
MarkedBox<T> map_box(const Collineation<T>& c, const MarkedBox<T>& m) {
  const Space s = c.target == Space::Plane ? m.space : opposite(m.space);
  return {c.apply(m.a1), c.apply(m.a3), c.apply(m.b3), c.apply(m.b1), c.apply(m.a2), c.apply(m.b2), s};
}

}  // namespace detail

template <class T>
MarkedBox<T> map_box(const Collineation<T>& c, const MarkedBox<T>& m) {
  return detail::map_box(c, m);
}

/// Order-three collineation M with M(i(m)) = tau1(m) and M(tau1(m)) = tau2(m).
template <class T>
Collineation<T> order3_symmetry(const MarkedBox<T>& m, double eps = kDefaultEps) {
  const auto bi = op_i(m);
  const auto b1 = op_tau1(m, eps);
  const auto b2 = op_tau2(m, eps);
  const auto c = detail::box_map(bi, b1, eps);
  if (!c) fail(ErrorKind::NotFound, "no collineation i(box) -> tau1(box)");
  if (!same_box(detail::map_box(*c, b1), b2, eps)) fail(ErrorKind::NotFound, "M(tau1) != tau2");
  if (!proportional(mul(c->m, mul(c->m, c->m)), identity3<T>(), eps))
    fail(ErrorKind::NotFound, "M^3 is not scalar");
  return *c;
}

/// Correlation taking the six points of i(m) to the six lines of the dual box.
template <class T>
Collineation<T> duality_symmetry(const MarkedBox<T>& m, double eps = kDefaultEps) {
  const auto c = detail::box_map(op_i(m), dual_box(m), eps);
  if (!c) fail(ErrorKind::NotFound, "no correlation i(box) -> dual box");
  return *c;
}

template <class T>
struct OrbitNode {
  std::string word;     // composition applied to the seed, e.g. "t1 t2 i"
  std::string address;  // root bit (0 seed, 1 flipped) then 0 = tau1, 1 = tau2 per level
  MarkedBox<T> box;
  Vec3<T> top, bottom;
};

inline constexpr int kMaxOrbitDepth = 20;

/// Breadth-first orbit nodes down to depth d below the seed and its flip.
template <class T>
std::vector<OrbitNode<T>> orbit_to_depth(const MarkedBox<T>& seed, int d, double eps = kDefaultEps) {
  if (d < 0 || d > kMaxOrbitDepth) fail(ErrorKind::DepthTooLarge, "depth must be in [0, 20]");
  std::vector<OrbitNode<T>> out;
  out.push_back({"", "0", seed, seed.a2, seed.b2});
  const auto flipped = op_i(seed);
  out.push_back({"i", "1", flipped, flipped.a2, flipped.b2});
  std::size_t level_begin = 0;
  for (int level = 0; level < d; ++level) {
    const std::size_t level_end = out.size();
    for (std::size_t k = level_begin; k < level_end; ++k) {
      const OrbitNode<T> parent = out[k];
      const auto c1 = op_tau1(parent.box, eps);
      const auto c2 = op_tau2(parent.box, eps);
      auto prefix = [&](const char* letter) {
        return parent.word.empty() ? std::string(letter) : std::string(letter) + " " + parent.word;
      };
      out.push_back({prefix("t1"), parent.address + "0", c1, c1.a2, c1.b2});
      out.push_back({prefix("t2"), parent.address + "1", c2, c2.a2, c2.b2});
    }
    level_begin = level_end;
  }
  return out;
}

namespace detail {

template <class T>
std::array<Vec3<T>, 4> unit_square_corners() {
  const T zero = ScalarTraits<T>::from_int(0);
  const T one = ScalarTraits<T>::from_int(1);
  return {Vec3<T>{zero, one, one}, Vec3<T>{one, one, one}, Vec3<T>{one, zero, one}, Vec3<T>{zero, zero, one}};
}

/// Chart sending the unit square onto the quadrilateral of m, with the raw
/// (uncanonicalized) coordinates of the marked points.
template <class T>
void square_frame(const MarkedBox<T>& m, double eps, Matrix3<T>& frame, T& x, T& y) {
  const auto sq = unit_square_corners<T>();
  std::array<Vec3<T>, 4> corners{m.a1, m.a3, m.b3, m.b1};
  frame = collineation_from_frames<T>(sq, corners, Space::Plane, eps).m;
  const auto back = collineation_from_frames<T>(corners, sq, Space::Plane, eps).m;
  const Vec3<T> a2 = mul(back, m.a2);
  const Vec3<T> b2 = mul(back, m.b2);
  x = a2[0] / a2[2];
  y = b2[0] / b2[2];
}

template <class T>
Matrix3<T> rescaled(Matrix3<T> m) {
  T big = T(0);
  for (const auto& row : m)
    for (const auto& v : row) big = std::max(big, T(std::abs(v)));
  for (auto& row : m)
    for (auto& v : row) v /= big;
  return m;
}

/// Floating-point arc: each level is constructed inside the unit square of
/// its parent, and only the accumulated chart carries the small scale.
template <class T>
void chart_arc_tops(const Matrix3<T>& chart, const T& x, const T& y, int depth, double eps, std::vector<Vec3<T>>& out) {
  const T one = ScalarTraits<T>::from_int(1);
  if (depth == 0) {
    out.push_back(normalized(mul(chart, Vec3<T>{x, one, one})));
    return;
  }
  const auto sq = box_from_coords<T>(x, y);
  for (const auto& child : {op_tau1(sq, eps), op_tau2(sq, eps)}) {
    Matrix3<T> frame;
    T cx, cy;
    square_frame(child, eps, frame, cx, cy);
    chart_arc_tops(rescaled(mul(chart, frame)), cx, cy, depth - 1, eps, out);
  }
}

template <class T>
void arc_tops(const MarkedBox<T>& m, int depth, double eps, std::vector<Vec3<T>>& out) {
  if constexpr (!ScalarTraits<T>::exact) {
    Matrix3<T> frame;
    T x, y;
    square_frame(m, eps, frame, x, y);
    chart_arc_tops(rescaled(frame), x, y, depth, eps, out);
    return;
  }
  if (depth == 0) {
    out.push_back(m.a2);
    return;
  }
  arc_tops(op_tau1(m, eps), depth - 1, eps, out);
  arc_tops(op_tau2(m, eps), depth - 1, eps, out);
}

}  // namespace detail

/// Marked points of the arc from the seed top to the seed bottom: the tops of
/// the 2^d depth-d descendants in address order, then the seed bottom.
template <class T>
std::vector<Vec3<T>> seed_arc_points(const MarkedBox<T>& seed, int d, double eps = kDefaultEps) {
  if (d < 0 || d > kMaxOrbitDepth) fail(ErrorKind::DepthTooLarge, "depth must be in [0, 20]");
  std::vector<Vec3<T>> out;
  out.reserve((std::size_t{1} << d) + 1);
  detail::arc_tops(seed, d, eps, out);
  out.push_back(seed.b2);
  return out;
}

/// Closed approximation of the Pappus curve in circular order: 2^(d+1)
/// marked points, the seed arc followed by the arc of the flipped box.
template <class T>
std::vector<Vec3<T>> curve_points(const MarkedBox<T>& seed, int d, double eps = kDefaultEps) {
  if (d < 0 || d > kMaxOrbitDepth) fail(ErrorKind::DepthTooLarge, "depth must be in [0, 20]");
  std::vector<Vec3<T>> out;
  out.reserve(std::size_t{1} << (d + 1));
  detail::arc_tops(seed, d, eps, out);
  detail::arc_tops(op_i(seed), d, eps, out);
  return out;
}

// ---- dimension -------------------------------------------------------------

struct ScaleCount {
  int level = 0;  // epsilon = 2^-level of the normalized extent
  double epsilon = 0.0;
  std::size_t count = 0;
};

struct DimensionEstimate {
  double dimension = 0.0;
  std::vector<ScaleCount> scales;
  std::string chart;
};

/// Box-counting slope of log N(eps) against log(1/eps) over levels
/// [kmin, kmax], eps = 2^-k times the larger side of the bounding box.
DimensionEstimate box_dimension(const std::vector<std::array<double, 2>>& pts, int kmin, int kmax);
DimensionEstimate box_dimension(const std::vector<std::array<double, 3>>& pts, int kmin, int kmax);

enum class DimensionChart { Affine, Elliptic };

struct CurveDimensionOptions {
  int depth = 14;
  int kmin = 3;
  int kmax = 8;
  DimensionChart chart = DimensionChart::Affine;
};

/// Box dimension of the Pappus curve of the class [x, y]. Affine: the seed
/// arc in the unit-square chart. Elliptic: the closed curve on the unit
/// sphere of homogeneous coordinates.
DimensionEstimate pappus_curve_dimension(double x, double y, const CurveDimensionOptions& opts = {});

/// Sign changes of the top line of each sampled box along the seed arc; a
/// transverse line field gives exactly one per line.
std::vector<int> transversality_crossings(double x, double y, int depth, int sample_depth);

}  // namespace pcl
