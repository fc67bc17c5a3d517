#pragma once

#include <iosfwd>
#include <string>

#include "hybell/sweep.hpp"

namespace hybell::cli {

enum ExitCode : int {
  kOk = 0,
  kSelftestFailure = 1,
  kUsage = 2,
  kDomain = 3,
  kCheckpointMismatch = 4,
};

/// Entry point of the `hybell` tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// `eta,t_critical,chsh,alpha_im,nu,gamma,theta,trunc_weight`, one row per
/// grid value in grid order; fields that do not apply are left empty.
std::string curve_csv(const CurveResult& r);

}  // namespace hybell::cli
