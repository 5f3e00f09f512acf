#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pcl/collineation.hpp"
#include "pcl/conic.hpp"
#include "pcl/report.hpp"

namespace pcl {

/// Cyclically ordered points (space Plane) or lines (space Dual).
template <class T>
struct Polygon {
  std::vector<Vec3<T>> v;
  Space space = Space::Plane;

  std::size_t size() const { return v.size(); }
  const Vec3<T>& operator[](std::size_t i) const { return v[i % v.size()]; }

  friend bool operator==(const Polygon& a, const Polygon& b) {
    if (a.space != b.space || a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!proportional(a.v[i], b.v[i])) return false;
    return true;
  }
};

/// Diagonal word, applied right to left: {2, 1, 2} is T2 T1 T2.
using DiagonalWord = std::vector<int>;

/// Digits of a word such as "212" or "T3434343".
DiagonalWord parse_word(const std::string& text);
std::string word_name(const DiagonalWord& w);

/// Relabeling i -> i + s: entry i of the result is entry i + s of p.
template <class T>
Polygon<T> shifted(const Polygon<T>& p, std::size_t s) {
  Polygon<T> out{{}, p.space};
  for (std::size_t i = 0; i < p.size(); ++i) out.v.push_back(p[i + s]);
  return out;
}

/// T_k: entry i of the image is the join (or meet) of entries i and i + k.
template <class T>
Polygon<T> t_map(const Polygon<T>& p, int k, double eps = kDefaultEps) {
  const std::size_t n = p.size();
  if (n < 4) fail(ErrorKind::InvalidArgument, "diagonal maps need n >= 4");
  if (k < 1 || static_cast<std::size_t>(k) >= n) fail(ErrorKind::InvalidArgument, "need 1 <= k < n");
  Polygon<T> out{{}, opposite(p.space)};
  out.v.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3<T> l = cross(p[i], p[i + k]);
    if (is_zero_vec(l, max_norm(p[i]) * max_norm(p[i + k]), eps))
      fail(ErrorKind::DegenerateDiagonal, "entries " + std::to_string(i) + " and " + std::to_string((i + k) % n) +
                                              " coincide");
    out.v.push_back(normalized(l));
  }
  return out;
}

template <class T>
Polygon<T> t_word(const Polygon<T>& p, const DiagonalWord& w, double eps = kDefaultEps) {
  Polygon<T> r = p;
  for (auto it = w.rbegin(); it != w.rend(); ++it) r = t_map(r, *it, eps);
  return r;
}

namespace detail {

template <class T>
void check_params(const std::vector<T>& t) {
  if (t.size() < 3) fail(ErrorKind::InvalidArgument, "polygons need n >= 3");
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j)
      if (is_zero(T(t[i] - t[j]), 1.0, 1e-12)) fail(ErrorKind::RepeatedParam, "repeated conic parameter");
}

}  // namespace detail

/// Vertices rational_conic_point(t_i) on x^2 + y^2 = z^2.
template <class T>
Polygon<T> inscribed_ngon(const std::vector<T>& t) {
  detail::check_params(t);
  Polygon<T> out;
  for (const auto& ti : t) out.v.push_back(rational_conic_point(ti).coords());
  return out;
}

/// Sides tangent_at(t_i); vertex i is the meet of sides i and i + 1.
template <class T>
Polygon<T> circumscribed_ngon(const std::vector<T>& t) {
  detail::check_params(t);
  const std::size_t n = t.size();
  Polygon<T> out;
  for (std::size_t i = 0; i < n; ++i)
    out.v.push_back(meet(tangent_at(t[i]), tangent_at(t[(i + 1) % n])).coords());
  return out;
}

/// Entries of T_1(p): the sides of a polygon of points, the vertices of a
/// polygon of lines.
template <class T>
std::vector<Vec3<T>> sides(const Polygon<T>& p, double eps = kDefaultEps) {
  const std::size_t n = p.size();
  std::vector<Vec3<T>> out;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3<T> l = cross(p[i], p[i + 1]);
    if (is_zero_vec(l, max_norm(p[i]) * max_norm(p[i + 1]), eps))
      fail(ErrorKind::DegenerateDiagonal, "consecutive entries coincide");
    out.push_back(normalized(l));
  }
  return out;
}

/// Dimension of the space of conics through the given coordinates.
template <class T>
std::size_t conics_through(const std::vector<Vec3<T>>& pts, double eps = kDefaultEps) {
  std::vector<std::vector<T>> rows;
  for (auto q : pts) {
    if constexpr (!ScalarTraits<T>::exact) {
      const double s = max_norm(q);
      for (auto& x : q) x = x / T(s);
    }
    rows.push_back(conic_monomials(q));
  }
  return 6 - null_space(rows, eps).rank;
}

namespace detail {

template <class T>
bool on_conic(const std::vector<Vec3<T>>& pts, double eps) {
  if (pts.size() < 6) fail(ErrorKind::UnderdeterminedConic, "need at least six entries to decide");
  return conics_through(pts, eps) >= 1;
}

}  // namespace detail

/// Entries on a common conic (for a polygon of lines: tangent to one).
template <class T>
bool is_inscribed(const Polygon<T>& p, double eps = kDefaultEps) {
  return detail::on_conic(p.v, eps);
}

/// Sides on a common conic in the dual sense: for a polygon of points, the
/// side lines are tangent to one conic.
template <class T>
bool is_circumscribed(const Polygon<T>& p, double eps = kDefaultEps) {
  return detail::on_conic(sides(p, eps), eps);
}

/// Entries on a pair of lines (a conic of zero determinant).
template <class T>
bool is_inscribed_degenerate(const Polygon<T>& p, double eps = kDefaultEps) {
  std::vector<std::vector<T>> rows;
  for (const auto& q : p.v) rows.push_back(conic_monomials(q));
  const auto ns = null_space(rows, eps);
  const std::size_t nullity = 6 - ns.rank;
  if (nullity == 0) return false;
  // a pencil always has a real member of zero determinant
  if (nullity >= 2) return true;
  return is_degenerate(conic_from_coefficients(ns.kernel), eps);
}

/// Projective equivalence P ~ Q (collineation or correlation), searching
/// cyclic relabelings and reflections.
template <class T>
std::optional<Equivalence<T>> polygon_equivalence(const Polygon<T>& p, const Polygon<T>& q, double eps = kDefaultEps) {
  EquivalenceOptions opts;
  opts.allow_dual = true;
  opts.allow_cyclic_shift = true;
  opts.allow_reflection = true;
  opts.eps = eps;
  return find_equivalence(std::span<const Vec3<T>>(p.v), p.space, std::span<const Vec3<T>>(q.v), q.space, opts);
}

// ---- theorem drivers (exact rational backend) -------------------------------

enum class PolygonFamily { Inscribed, Circumscribed, Pentagon, TwoLines };
enum class PentagramClaim { Equivalent, Inscribed, Circumscribed, DegenerateInscribed, PentagonChain };

struct PentagramTheorem {
  std::string id;
  std::string statement;
  PolygonFamily family;
  int n;  // 0 for degen-4n, where n comes from the options
  DiagonalWord word;
  PentagramClaim claim;
};

const std::vector<PentagramTheorem>& pentagram_theorems();
const PentagramTheorem& pentagram_theorem(const std::string& id);

/// Word T1 T2 T1 ... T1 with 4n - 3 letters.
DiagonalWord degenerate_word(int n);

struct PentagramOptions {
  int degenerate_n = 2;  // the n of a 4n-gon on two lines
  long param_bound = 30;
};

/// Random polygon of the theorem's family with exact rational coordinates.
Polygon<Rational> sample_polygon(const PentagramTheorem& th, Rng& rng, const PentagramOptions& opts = {});

VerificationReport run_pentagram_theorem(const std::string& id, std::size_t trials, std::uint64_t seed,
                                         const PentagramOptions& opts = {});

}  // namespace pcl
