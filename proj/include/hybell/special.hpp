#pragma once

#include <span>
#include <vector>

namespace hybell {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTsirelson = 2.8284271247461900976;  // 2*sqrt(2)

/// Normalized Hermite function phi_n(x) = H_n(x) exp(-x^2/2) / sqrt(2^n n! sqrt(pi)).
///
/// Evaluated with the normalized three-term recurrence
///   phi_{n+1} = x sqrt(2/(n+1)) phi_n - sqrt(n/(n+1)) phi_{n-1},
/// carrying a separate exponent so that neither the Gaussian prefactor nor the
/// intermediate values under- or overflow for large |x|.
double hermite_function(int n, double x);

/// Streams phi_0(x), phi_1(x), ... one index at a time (for series that run
/// far beyond what is worth storing).
class HermiteStream {
 public:
  explicit HermiteStream(double x);
  int index() const { return n_; }
  double value() const { return cur_ * factor_; }
  /// phi_{n-1}(x); zero at n = 0.
  double previous() const { return prev_ * factor_; }
  double derivative() const;
  void advance();

 private:
  double x_;
  int n_ = 0;
  double prev_ = 0.0;
  double cur_ = 1.0;
  double log_scale_;
  double factor_;
};

/// phi_0(x) ... phi_{n_max}(x) in one pass.
std::vector<double> hermite_functions(int n_max, double x);

/// Values and first derivatives of phi_0 ... phi_{n_max} at x.
/// phi_n'(x) = sqrt(2n) phi_{n-1}(x) - x phi_n(x).
struct HermiteTable {
  double x = 0.0;
  std::vector<double> value;
  std::vector<double> derivative;
};
HermiteTable hermite_table(int n_max, double x);

/// erf(u) - erf(v) without cancellation when both arguments sit in the same tail.
double erf_difference(double u, double v);

double erf_inverse(double y);

/// Adaptive Gauss-Kronrod integration of a smooth integrand on [a, b] (finite).
template <class F>
double integrate_smooth(F&& f, double a, double b, double tolerance = 1e-14);

/// Same as integrate_smooth, but the range is split at `breaks` first.
template <class F>
double integrate_piecewise(F&& f, std::span<const double> breaks, double tolerance = 1e-14);

}  // namespace hybell

#include "hybell/detail/integrate_impl.hpp"
