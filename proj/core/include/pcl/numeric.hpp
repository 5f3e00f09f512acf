#pragma once

#include <array>
#include <vector>

#include "pcl/scalar.hpp"

namespace pcl {

/// All complex roots of c[0] z^d + c[1] z^(d-1) + ... + c[d], leading
/// coefficient nonzero. Aberth iteration followed by Newton polishing.
std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs);

/// Roots of a z^2 + b z + c (a != 0), numerically stable form.
std::array<Complex, 2> quadratic_roots(Complex a, Complex b, Complex c);

/// Horner evaluation, highest degree first.
Complex horner(const std::vector<Complex>& coeffs, Complex z);

}  // namespace pcl
