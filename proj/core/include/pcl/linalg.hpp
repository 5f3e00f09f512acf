#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <vector>

#include "pcl/scalar.hpp"

namespace pcl {

template <class T>
using Vec3 = std::array<T, 3>;

template <class T>
using Matrix3 = std::array<std::array<T, 3>, 3>;

template <class T>
Vec3<T> cross(const Vec3<T>& a, const Vec3<T>& b) {
  return {T(a[1] * b[2] - a[2] * b[1]), T(a[2] * b[0] - a[0] * b[2]), T(a[0] * b[1] - a[1] * b[0])};
}

template <class T>
T dot(const Vec3<T>& a, const Vec3<T>& b) {
  return T(a[0] * b[0] + a[1] * b[1] + a[2] * b[2]);
}

template <class T>
T det3(const Vec3<T>& a, const Vec3<T>& b, const Vec3<T>& c) {
  return dot(a, cross(b, c));
}

template <class T>
Vec3<T> operator+(const Vec3<T>& a, const Vec3<T>& b) {
  return {T(a[0] + b[0]), T(a[1] + b[1]), T(a[2] + b[2])};
}

template <class T>
Vec3<T> operator-(const Vec3<T>& a, const Vec3<T>& b) {
  return {T(a[0] - b[0]), T(a[1] - b[1]), T(a[2] - b[2])};
}

template <class T>
Vec3<T> operator-(const Vec3<T>& a) {
  return {T(-a[0]), T(-a[1]), T(-a[2])};
}

template <class T>
Vec3<T> scaled(const Vec3<T>& a, const T& s) {
  return {T(a[0] * s), T(a[1] * s), T(a[2] * s)};
}

/// Largest entry magnitude (max-norm) as a double.
template <class T, std::size_t N>
double max_norm(const std::array<T, N>& a) {
  double m = 0.0;
  for (const auto& x : a) m = std::max(m, magnitude(x));
  return m;
}

template <class T, std::size_t N>
bool is_zero_vec(const std::array<T, N>& a, double scale = 1.0, double eps = kDefaultEps) {
  return std::all_of(a.begin(), a.end(), [&](const T& x) { return is_zero(x, scale, eps); });
}

/// Proportionality of homogeneous vectors: exact for exact scalars,
/// relative to the operand max-norms otherwise.
template <class T>
bool proportional(const Vec3<T>& a, const Vec3<T>& b, double eps = kDefaultEps) {
  return is_zero_vec(cross(a, b), max_norm(a) * max_norm(b), eps);
}

template <class T>
Vec3<T> normalized(Vec3<T> v) {
  ScalarTraits<T>::normalize(std::span<T>(v));
  return v;
}

template <class T>
Vec3<T> from_ints(long x, long y, long z) {
  return {ScalarTraits<T>::from_int(x), ScalarTraits<T>::from_int(y), ScalarTraits<T>::from_int(z)};
}

template <class T>
Vec3<double> to_double(const Vec3<T>& v) {
  if constexpr (std::same_as<T, double>) {
    return v;
  } else if constexpr (std::same_as<T, Rational>) {
    // scale before converting so huge integer coordinates stay finite
    Vec3<T> w = normalized(v);
    double m = 0.0;
    for (const auto& x : w) m = std::max(m, std::fabs(x.get_d()));
    if (m == 0.0 || std::isinf(m)) {
      // fall back to exact division by the largest entry
      std::size_t k = 0;
      for (std::size_t i = 1; i < 3; ++i)
        if (abs(w[i]) > abs(w[k])) k = i;
      Rational piv = abs(w[k]);
      return {Rational(w[0] / piv).get_d(), Rational(w[1] / piv).get_d(),
              Rational(w[2] / piv).get_d()};
    }
    return {w[0].get_d() / m, w[1].get_d() / m, w[2].get_d() / m};
  } else {
    static_assert(sizeof(T) == 0, "no real conversion");
  }
}

template <class T>
Matrix3<T> identity3() {
  Matrix3<T> m{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) m[i][j] = ScalarTraits<T>::from_int(i == j ? 1 : 0);
  return m;
}

template <class T>
Vec3<T> mul(const Matrix3<T>& m, const Vec3<T>& v) {
  return {dot(m[0], v), dot(m[1], v), dot(m[2], v)};
}

template <class T>
Matrix3<T> mul(const Matrix3<T>& a, const Matrix3<T>& b) {
  Matrix3<T> r{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      T s = ScalarTraits<T>::from_int(0);
      for (std::size_t k = 0; k < 3; ++k) s += a[i][k] * b[k][j];
      r[i][j] = s;
    }
  return r;
}

template <class T>
Matrix3<T> transpose(const Matrix3<T>& m) {
  Matrix3<T> r{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) r[i][j] = m[j][i];
  return r;
}

template <class T>
T det(const Matrix3<T>& m) {
  return det3(m[0], m[1], m[2]);
}

/// Adjugate (transpose of the cofactor matrix); m * adj(m) = det(m) * I.
template <class T>
Matrix3<T> adjugate(const Matrix3<T>& m) {
  Matrix3<T> cof{};
  cof[0] = cross(m[1], m[2]);
  cof[1] = cross(m[2], m[0]);
  cof[2] = cross(m[0], m[1]);
  return transpose(cof);
}

template <class T>
Matrix3<T> scaled(const Matrix3<T>& m, const T& s) {
  Matrix3<T> r = m;
  for (auto& row : r)
    for (auto& x : row) x = T(x * s);
  return r;
}

template <class T>
Matrix3<T> columns(const Vec3<T>& a, const Vec3<T>& b, const Vec3<T>& c) {
  Matrix3<T> r{};
  for (std::size_t i = 0; i < 3; ++i) {
    r[i][0] = a[i];
    r[i][1] = b[i];
    r[i][2] = c[i];
  }
  return r;
}

template <class T>
double max_norm(const Matrix3<T>& m) {
  return std::max({max_norm(m[0]), max_norm(m[1]), max_norm(m[2])});
}

/// Matrices equal up to a nonzero scalar factor.
template <class T>
bool proportional(const Matrix3<T>& a, const Matrix3<T>& b, double eps = kDefaultEps) {
  std::size_t pi = 0, pj = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (magnitude(a[i][j]) > best) {
        best = magnitude(a[i][j]);
        pi = i;
        pj = j;
      }
  if (is_zero(b[pi][pj], max_norm(b), eps)) return false;
  const double scale = max_norm(a) * max_norm(b);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      const T lhs = a[i][j] * b[pi][pj];
      const T rhs = b[i][j] * a[pi][pj];
      if (!is_zero(T(lhs - rhs), scale, eps)) return false;
    }
  return true;
}

/// Row-echelon null space of a dense matrix (rows x cols). Returns the rank
/// and, when the nullity is one, a spanning vector of the kernel.
template <class T>
struct NullSpaceResult {
  std::size_t rank = 0;
  std::vector<T> kernel;  // empty unless nullity == 1
};

template <class T>
NullSpaceResult<T> null_space(std::vector<std::vector<T>> a, double eps = kDefaultEps) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  double scale = 0.0;
  for (const auto& r : a)
    for (const auto& x : r) scale = std::max(scale, magnitude(x));
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t best = rows;
    double best_mag = -1.0;
    for (std::size_t i = r; i < rows; ++i) {
      if (is_zero(a[i][c], scale, eps)) continue;
      const double mag = magnitude(a[i][c]);
      if constexpr (ScalarTraits<T>::exact) {
        best = i;
        break;
      } else if (mag > best_mag) {
        best_mag = mag;
        best = i;
      }
    }
    if (best == rows) continue;
    std::swap(a[r], a[best]);
    const T piv = a[r][c];
    for (std::size_t j = c; j < cols; ++j) a[r][j] = a[r][j] / piv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || is_zero(a[i][c], 0.0, 0.0)) continue;
      const T f = a[i][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivot_cols.push_back(c);
    ++r;
  }
  NullSpaceResult<T> out;
  out.rank = r;
  if (cols - r != 1) return out;
  std::size_t free_col = 0;
  for (std::size_t c = 0, k = 0; c < cols; ++c) {
    if (k < pivot_cols.size() && pivot_cols[k] == c) {
      ++k;
      continue;
    }
    free_col = c;
    break;
  }
  out.kernel.assign(cols, ScalarTraits<T>::from_int(0));
  out.kernel[free_col] = ScalarTraits<T>::from_int(1);
  for (std::size_t k = 0; k < pivot_cols.size(); ++k) out.kernel[pivot_cols[k]] = -a[k][free_col];
  return out;
}

/// Rank of a dense matrix.
template <class T>
std::size_t rank_of(const std::vector<std::vector<T>>& a, double eps = kDefaultEps) {
  return null_space(a, eps).rank;
}

/// Determinant of a square dense matrix by elimination.
template <class T>
T determinant(std::vector<std::vector<T>> a, double eps = kDefaultEps) {
  const std::size_t n = a.size();
  double scale = 0.0;
  for (const auto& r : a)
    for (const auto& x : r) scale = std::max(scale, magnitude(x));
  T d = ScalarTraits<T>::from_int(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t best = n;
    double best_mag = -1.0;
    for (std::size_t i = c; i < n; ++i) {
      if (is_zero(a[i][c], scale, ScalarTraits<T>::exact ? 0.0 : eps * 1e-3)) continue;
      if constexpr (ScalarTraits<T>::exact) {
        best = i;
        break;
      } else if (magnitude(a[i][c]) > best_mag) {
        best_mag = magnitude(a[i][c]);
        best = i;
      }
    }
    if (best == n) return ScalarTraits<T>::from_int(0);
    if (best != c) {
      std::swap(a[c], a[best]);
      d = -d;
    }
    d *= a[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (is_zero(a[i][c], 0.0, 0.0)) continue;
      const T f = a[i][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return d;
}

}  // namespace pcl
