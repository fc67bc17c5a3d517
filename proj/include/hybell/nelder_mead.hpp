#pragma once

#include <functional>
#include <vector>

namespace hybell {

struct Box {
  std::vector<double> lower;
  std::vector<double> upper;
};

struct SimplexOptions {
  int max_iterations = 2000;
  double f_tolerance = 1e-7;   // stop when the simplex values spread less than this
  double x_tolerance = 1e-9;   // ... or its vertices collapse below this
  double initial_step = 0.05;  // fraction of the box width per coordinate
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Maximizes f over a box with the Nelder-Mead simplex. Trial points are
/// clamped into the box, so f is never evaluated outside it.
SimplexResult maximize_simplex(const std::function<double(const std::vector<double>&)>& f,
                               std::vector<double> start, const Box& box, const SimplexOptions& opt = {});

}  // namespace hybell
