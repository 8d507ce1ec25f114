#pragma once

// Command-line front end. Exit codes: 0 success, 1 check or precondition
// failure, 2 usage or parse error.

#include <iosfwd>
#include <string>
#include <vector>

#include "igeo/curvature.hpp"

namespace igeo::cli {

enum Exit : int { Ok = 0, Failure = 1, Usage = 2 };

/// Test seam: replaces the curvature kernel used by `check`.
struct Hooks {
  CurvatureFn curvature;
};

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Hooks& hooks = {});

}  // namespace igeo::cli
