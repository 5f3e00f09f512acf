#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pcl/dsl/script.hpp"
#include "pcl/dsl/verify.hpp"
#include "svg.hpp"

namespace pcl::cli {

enum ExitCode { kSuccess = 0, kFalsified = 1, kUsage = 2 };

/// Run the tool on arguments without the program name. PCL_SEED, when set,
/// overrides --seed.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Every id accepted by `pcl theorem`.
std::vector<std::string> theorem_ids();

/// Scene of a script instance: objects, the joins used by constructions and
/// the asserted line or point highlighted.
Scene dsl_scene(const dsl::Script& s, const dsl::Instance& inst);

}  // namespace pcl::cli
