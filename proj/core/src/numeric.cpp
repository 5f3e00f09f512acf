#include "pcl/numeric.hpp"

#include <algorithm>
#include <cmath>

#include "pcl/errors.hpp"

namespace pcl {

Complex horner(const std::vector<Complex>& coeffs, Complex z) {
  Complex acc = 0.0;
  for (const auto& c : coeffs) acc = acc * z + c;
  return acc;
}

namespace {

Complex horner_derivative(const std::vector<Complex>& coeffs, Complex z) {
  const std::size_t d = coeffs.size() - 1;
  Complex acc = 0.0;
  for (std::size_t k = 0; k < d; ++k) acc = acc * z + coeffs[k] * static_cast<double>(d - k);
  return acc;
}

}  // namespace

std::array<Complex, 2> quadratic_roots(Complex a, Complex b, Complex c) {
  if (a == 0.0) fail(ErrorKind::InvalidArgument, "quadratic with zero leading coefficient");
  const Complex disc = std::sqrt(b * b - 4.0 * a * c);
  // pick the sign avoiding cancellation
  const Complex q = (std::real(std::conj(b) * disc) >= 0.0) ? -0.5 * (b + disc) : -0.5 * (b - disc);
  if (q == 0.0) return {Complex(0.0), Complex(0.0)};
  return {q / a, c / q};
}

std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs_in) {
  std::vector<Complex> coeffs = coeffs_in;
  if (coeffs.empty() || coeffs[0] == 0.0)
    fail(ErrorKind::InvalidArgument, "polynomial with zero leading coefficient");
  const std::size_t d = coeffs.size() - 1;
  if (d == 0) return {};
  for (auto& c : coeffs) c /= coeffs_in[0];
  if (d == 1) return {-coeffs[1]};
  if (d == 2) {
    auto r = quadratic_roots(1.0, coeffs[1], coeffs[2]);
    return {r[0], r[1]};
  }

  // Cauchy bound for the initial circle
  double bound = 0.0;
  for (std::size_t k = 1; k <= d; ++k) bound = std::max(bound, std::abs(coeffs[k]));
  const double radius = 1.0 + bound;
  std::vector<Complex> z(d);
  for (std::size_t k = 0; k < d; ++k) {
    const double ang = 2.0 * M_PI * (static_cast<double>(k) + 0.25) / static_cast<double>(d) + 0.4;
    z[k] = std::polar(0.5 * radius, ang);
  }

  for (int iter = 0; iter < 500; ++iter) {
    double max_step = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const Complex p = horner(coeffs, z[k]);
      if (p == 0.0) continue;
      const Complex ratio = p / horner_derivative(coeffs, z[k]);
      Complex repulsion = 0.0;
      for (std::size_t j = 0; j < d; ++j)
        if (j != k) repulsion += 1.0 / (z[k] - z[j]);
      const Complex step = ratio / (1.0 - ratio * repulsion);
      z[k] -= step;
      max_step = std::max(max_step, std::abs(step) / std::max(1.0, std::abs(z[k])));
    }
    if (max_step < 1e-16) break;
  }

  for (auto& r : z) {
    for (int it = 0; it < 3; ++it) {
      const Complex dp = horner_derivative(coeffs, r);
      if (dp == 0.0) break;
      const Complex next = r - horner(coeffs, r) / dp;
      if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) break;
      if (std::abs(horner(coeffs, next)) <= std::abs(horner(coeffs, r))) r = next;
    }
  }
  return z;
}

}  // namespace pcl
