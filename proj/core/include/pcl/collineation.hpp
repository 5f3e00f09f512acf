#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pcl/projective.hpp"

namespace pcl {

/// Projective map given by an invertible matrix up to scale. When target is
/// Space::Dual the map is a correlation: it sends points of the source plane
/// to lines.
template <class T>
struct Collineation {
  Matrix3<T> m = identity3<T>();
  Space target = Space::Plane;

  Vec3<T> apply(const Vec3<T>& v) const { return normalized(mul(m, v)); }

  /// Composition (*this) after other.
  Collineation compose(const Collineation& other) const {
    return {mul(m, other.m), target == other.target ? Space::Plane : Space::Dual};
  }
};

/// Coefficients lambda with p3 = l0 p0 + l1 p1 + l2 p2, scaled into the
/// columns of a matrix sending the standard frame to (p0,p1,p2,p3).
template <class T>
Matrix3<T> frame_matrix(std::span<const Vec3<T>, 4> f, double eps = kDefaultEps) {
  const Matrix3<T> base = columns(f[0], f[1], f[2]);
  const T d = det(base);
  if (is_zero(d, max_norm(f[0]) * max_norm(f[1]) * max_norm(f[2]), eps))
    fail(ErrorKind::DegenerateFrame, "first three frame points dependent");
  const Vec3<T> lam = mul(adjugate(base), f[3]);  // = d * coefficients
  const double scale = max_norm(lam);
  for (const auto& x : lam)
    if (is_zero(x, scale, eps)) fail(ErrorKind::DegenerateFrame, "three frame points collinear");
  return columns(scaled(f[0], lam[0]), scaled(f[1], lam[1]), scaled(f[2], lam[2]));
}

/// Unique (up to scale) projective map with src[i] -> dst[i].
template <class T>
Collineation<T> collineation_from_frames(std::span<const Vec3<T>, 4> src,
                                         std::span<const Vec3<T>, 4> dst,
                                         Space target = Space::Plane, double eps = kDefaultEps) {
  const Matrix3<T> a = frame_matrix(src, eps);
  const Matrix3<T> b = frame_matrix(dst, eps);
  Matrix3<T> m = mul(b, adjugate(a));
  if constexpr (ScalarTraits<T>::exact) {
    // keep entries small: rescale the matrix like a homogeneous vector
    std::array<T, 9> flat{};
    for (int i = 0; i < 9; ++i) flat[i] = m[i / 3][i % 3];
    ScalarTraits<T>::normalize(std::span<T>(flat));
    for (int i = 0; i < 9; ++i) m[i / 3][i % 3] = flat[i];
  }
  return {m, target};
}

struct EquivalenceOptions {
  bool allow_dual = true;
  bool allow_cyclic_shift = false;
  bool allow_reflection = false;
  double eps = kDefaultEps;
};

/// Relabeling of the target list: target index for source i is
/// (reflected ? shift - i : shift + i) mod n.
struct Relabeling {
  std::size_t shift = 0;
  bool reflected = false;

  std::size_t operator()(std::size_t i, std::size_t n) const {
    return reflected ? (shift + n * n - i) % n : (shift + i) % n;
  }
};

template <class T>
struct Equivalence {
  Collineation<T> map;
  Relabeling labeling;
};

/// Indices of the first four entries in general position, if any.
template <class T>
std::optional<std::array<std::size_t, 4>> general_position_quad(std::span<const Vec3<T>> ps,
                                                                 double eps = kDefaultEps) {
  const std::size_t n = ps.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      if (proportional(ps[a], ps[b], eps)) continue;
      for (std::size_t c = b + 1; c < n; ++c) {
        if (dependent(ps[a], ps[b], ps[c], eps)) continue;
        for (std::size_t d = c + 1; d < n; ++d) {
          if (dependent(ps[a], ps[b], ps[d], eps) || dependent(ps[a], ps[c], ps[d], eps) ||
              dependent(ps[b], ps[c], ps[d], eps))
            continue;
          return std::array<std::size_t, 4>{a, b, c, d};
        }
      }
    }
  return std::nullopt;
}

/// Search for a projective map (collineation or correlation) taking ps to qs
/// under the permitted relabelings: identity first, then cyclic shifts, then
/// reflections. Every returned map has been checked on all points.
template <class T>
std::optional<Equivalence<T>> find_equivalence(std::span<const Vec3<T>> ps, Space ps_space,
                                               std::span<const Vec3<T>> qs, Space qs_space,
                                               const EquivalenceOptions& opts = {}) {
  const std::size_t n = ps.size();
  if (n < 4 || qs.size() != n) fail(ErrorKind::TooFewPoints, "need |ps| = |qs| >= 4");
  const Space target = ps_space == qs_space ? Space::Plane : Space::Dual;
  if (target == Space::Dual && !opts.allow_dual) return std::nullopt;
  const auto quad = general_position_quad(ps, opts.eps);
  if (!quad) return std::nullopt;

  std::vector<Relabeling> labelings{{0, false}};
  if (opts.allow_cyclic_shift)
    for (std::size_t s = 1; s < n; ++s) labelings.push_back({s, false});
  if (opts.allow_reflection)
    for (std::size_t s = 0; s < (opts.allow_cyclic_shift ? n : 1); ++s) labelings.push_back({s, true});

  for (const auto& lab : labelings) {
    std::array<Vec3<T>, 4> src, dst;
    for (std::size_t k = 0; k < 4; ++k) {
      src[k] = ps[(*quad)[k]];
      dst[k] = qs[lab((*quad)[k], n)];
    }
    Collineation<T> map;
    try {
      map = collineation_from_frames<T>(src, dst, target, opts.eps);
    } catch (const GeometryError&) {
      continue;
    }
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) ok = proportional(map.apply(ps[i]), qs[lab(i, n)], opts.eps);
    if (ok) return Equivalence<T>{map, lab};
  }
  return std::nullopt;
}

template <class T>
std::optional<Equivalence<T>> find_equivalence(const std::vector<Vec3<T>>& ps, Space ps_space,
                                               const std::vector<Vec3<T>>& qs, Space qs_space,
                                               const EquivalenceOptions& opts = {}) {
  return find_equivalence(std::span<const Vec3<T>>(ps), ps_space, std::span<const Vec3<T>>(qs),
                          qs_space, opts);
}

}  // namespace pcl
