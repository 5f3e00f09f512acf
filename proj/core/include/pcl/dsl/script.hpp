#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pcl::dsl {

enum class Kind { Point, Line, Conic };

std::string_view to_string(Kind k);

struct SourcePos {
  int line = 1;
  int column = 1;
};

/// Call tree of a construction; a leaf holds an identifier.
struct Expr {
  std::string fn;  // empty for a leaf
  std::string ident;
  std::vector<Expr> args;
  SourcePos pos;

  bool is_leaf() const { return fn.empty(); }
};

struct Declaration {
  std::string name;
  Kind kind = Kind::Point;
  SourcePos pos;
};

/// "on object carrier": object is incident to (or tangent to) carrier.
struct Constraint {
  std::string object;
  std::string carrier;
  SourcePos pos;
};

struct Construction {
  std::string target;
  Expr expr;
  Kind kind = Kind::Point;  // inferred result kind
  SourcePos pos;
};

enum class AssertKind { On, Collinear, Concurrent, Conconic };

struct Assertion {
  AssertKind kind = AssertKind::On;
  std::vector<std::string> args;
  SourcePos pos;
  std::string text;  // normalized source form, e.g. "collinear C1 C2 C3"
};

/// One node of the evaluation order: a free object or a construction.
struct Step {
  bool constructed = false;
  std::size_t index = 0;  // into declarations or constructions
};

/// Parsed and checked script. Statements may appear in any order; the
/// evaluation order is a topological sort of the dependency graph.
struct Script {
  std::string name;
  std::vector<Declaration> declarations;
  std::vector<Constraint> constraints;
  std::vector<Construction> constructions;
  std::vector<Assertion> assertions;
  std::vector<Step> order;

  std::optional<Kind> kind_of(std::string_view name) const;
  bool is_free(std::string_view name) const;
  /// Carriers declared for a free object, in source order.
  std::vector<std::string> carriers_of(std::string_view name) const;
};

/// Parse and validate. Errors are GeometryError with kinds SyntaxError,
/// UndefinedIdentifier, CyclicDefinition, NoAssertion, TypeMismatch or
/// UnsupportedConstraint; the message starts with "line:column:".
Script parse_script(std::string_view text, std::string name = "script");

/// Source text of a shipped script (pappus, desargues, pascal, brianchon).
std::string_view builtin_script_text(std::string_view name);
Script builtin_script(std::string_view name);
const std::vector<std::string>& builtin_script_names();

}  // namespace pcl::dsl
