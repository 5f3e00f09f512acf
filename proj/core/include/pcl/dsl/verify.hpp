#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "pcl/dsl/script.hpp"
#include "pcl/linalg.hpp"
#include "pcl/report.hpp"

namespace pcl::dsl {

/// Coordinates of one free object: a triple for points and lines, a
/// symmetric matrix for conics.
using Value = std::variant<Vec3<Rational>, Matrix3<Rational>>;

struct Instance {
  std::uint64_t seed = 0;
  std::size_t attempts = 1;  // samples drawn before the guards passed
  std::vector<std::pair<std::string, Value>> values;

  const Value* find(std::string_view name) const;
};

struct SampleOptions {
  long coord_range = 10000;     // free coordinates drawn from [-range, range]
  long conic_range = 100;       // entries of the random conic frame matrix
  std::size_t max_attempts = 100;
};

/// Draw a generic instance honoring every declared incidence exactly.
/// Throws GenericityExhausted when no sample passes the guards.
Instance sample_instance(const Script& s, std::uint64_t seed, const SampleOptions& opts = {});

struct AssertionResidual {
  std::string assertion;
  Rational value;
};

/// Exact residual of every assertion. Throws ConstructionDegenerate when a
/// join, meet or pole is undefined on this instance.
std::vector<AssertionResidual> evaluate(const Script& s, const Instance& inst);

/// Every free and constructed object of the instance, in evaluation order.
std::vector<std::pair<std::string, Value>> construct_all(const Script& s, const Instance& inst);

/// Floating-point evaluation on unit-normalized coordinates; residuals are
/// relative determinant / incidence values.
std::vector<double> evaluate_numeric(const Script& s, const Instance& inst);

enum class Backend { Rational, Float };

struct VerifyOptions {
  std::size_t trials = 20;
  std::uint64_t seed = 0;
  Backend backend = Backend::Rational;
  double tolerance = 1e-9;  // float backend only
  SampleOptions sampling;
};

VerificationReport verify(const Script& s, const VerifyOptions& opts = {});

/// Serialized form of an instance: coordinates as "p/q" strings.
Witness to_witness(const Instance& inst);
/// Inverse of to_witness; entries named "seed" or "attempts" are metadata.
Instance instance_from_witness(const Witness& w);

std::string format_value(const Value& v);
Value parse_value(std::string_view text);

}  // namespace pcl::dsl
