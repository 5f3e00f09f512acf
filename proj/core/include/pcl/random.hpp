#pragma once

#include <cstdint>
#include <random>

#include "pcl/scalar.hpp"

namespace pcl {

/// Seeded generator with platform-independent draws (std::mt19937_64 has a
/// fully specified output sequence; the distributions here avoid the
/// implementation-defined std:: distributions).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [lo, hi].
  long uniform_int(long lo, long hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<long>(x % span);
  }

  long nonzero_int(long bound) {
    long v = 0;
    while (v == 0) v = uniform_int(-bound, bound);
    return v;
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Rational p/q with |p| <= bound, 1 <= q <= bound.
  Rational rational(long bound) {
    const long num = uniform_int(-bound, bound);
    const long den = uniform_int(1, bound);
    Rational r{mpz_class(num), mpz_class(den)};
    r.canonicalize();
    return r;
  }

  /// Independent stream for a sub-task (e.g. trial index).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
    return mix(seed ^ mix(index + 0x9e3779b97f4a7c15ULL));
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace pcl
