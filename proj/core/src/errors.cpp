#include "pcl/errors.hpp"

namespace pcl {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::CoincidentPoints: return "CoincidentPoints";
    case ErrorKind::CoincidentLines: return "CoincidentLines";
    case ErrorKind::NotCollinear: return "NotCollinear";
    case ErrorKind::RepeatedPoint: return "RepeatedPoint";
    case ErrorKind::DegenerateFrame: return "DegenerateFrame";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::UnderdeterminedConic: return "UnderdeterminedConic";
    case ErrorKind::DegenerateConic: return "DegenerateConic";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UndefinedIdentifier: return "UndefinedIdentifier";
    case ErrorKind::CyclicDefinition: return "CyclicDefinition";
    case ErrorKind::NoAssertion: return "NoAssertion";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::UnsupportedConstraint: return "UnsupportedConstraint";
    case ErrorKind::GenericityExhausted: return "GenericityExhausted";
    case ErrorKind::ConstructionDegenerate: return "ConstructionDegenerate";
    case ErrorKind::NotIncident: return "NotIncident";
    case ErrorKind::NotConvex: return "NotConvex";
    case ErrorKind::DegeneratePappus: return "DegeneratePappus";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::DepthTooLarge: return "DepthTooLarge";
    case ErrorKind::DegenerateScaleRange: return "DegenerateScaleRange";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::CoincidentHessianRoots: return "CoincidentHessianRoots";
    case ErrorKind::SecantThroughOrigin: return "SecantThroughOrigin";
    case ErrorKind::DegenerateDiagonal: return "DegenerateDiagonal";
    case ErrorKind::RepeatedParam: return "RepeatedParam";
    case ErrorKind::NoIntersection: return "NoIntersection";
    case ErrorKind::TangentRay: return "TangentRay";
    case ErrorKind::NotBracketed: return "NotBracketed";
    case ErrorKind::PointInsideInner: return "PointInsideInner";
    case ErrorKind::ResonantCaustic: return "ResonantCaustic";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorKind::NoUniqueSkewer: return "NoUniqueSkewer";
    case ErrorKind::BracketOnDiagonal: return "BracketOnDiagonal";
    case ErrorKind::ParallelLines: return "ParallelLines";
    case ErrorKind::NoSharedLine: return "NoSharedLine";
    case ErrorKind::DegenerateCircumcircle: return "DegenerateCircumcircle";
    case ErrorKind::ParallelEncountered: return "ParallelEncountered";
  }
  return "Unknown";
}

}  // namespace pcl
