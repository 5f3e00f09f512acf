#include "pcl/scalar.hpp"

#include <cstdio>

namespace pcl {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string ScalarTraits<double>::to_string(double x) { return format_double(x); }

std::string ScalarTraits<Complex>::to_string(const Complex& x) {
  return format_double(x.real()) + (x.imag() < 0 ? "" : "+") + format_double(x.imag()) + "i";
}

}  // namespace pcl
