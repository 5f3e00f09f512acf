#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pcl {

enum class ErrorKind {
  CoincidentPoints,
  CoincidentLines,
  NotCollinear,
  RepeatedPoint,
  DegenerateFrame,
  TooFewPoints,
  UnderdeterminedConic,
  DegenerateConic,
  // config scripts
  SyntaxError,
  UndefinedIdentifier,
  CyclicDefinition,
  NoAssertion,
  TypeMismatch,
  UnsupportedConstraint,
  GenericityExhausted,
  ConstructionDegenerate,
  // marked boxes
  NotIncident,
  NotConvex,
  DegeneratePappus,
  NotFound,
  DepthTooLarge,
  DegenerateScaleRange,
  // steiner
  DegenerateInput,
  CoincidentHessianRoots,
  SecantThroughOrigin,
  // pentagram
  DegenerateDiagonal,
  RepeatedParam,
  // poncelet
  NoIntersection,
  TangentRay,
  NotBracketed,
  PointInsideInner,
  ResonantCaustic,
  InvalidArgument,
  // skewers
  DegenerateTriangle,
  NoUniqueSkewer,
  BracketOnDiagonal,
  ParallelLines,
  NoSharedLine,
  DegenerateCircumcircle,
  ParallelEncountered,
};

std::string_view to_string(ErrorKind kind);

/// All recoverable geometric failures are reported through this type; the
/// kind identifies the precondition that was violated.
class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  explicit GeometryError(ErrorKind kind)
      : std::runtime_error(std::string(to_string(kind))), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what = {}) {
  if (what.empty()) throw GeometryError(kind);
  throw GeometryError(kind, what);
}

}  // namespace pcl
