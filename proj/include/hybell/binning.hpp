#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hybell/fock.hpp"

namespace hybell {

/// Half-open-agnostic real interval (lo, hi); either end may be infinite.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

/// A+ : the quadrature outcomes mapped to +1 by the dichotomized homodyne
/// measurement. Intervals are kept sorted and pairwise disjoint.
class BinningSet {
 public:
  explicit BinningSet(std::vector<Interval> intervals);

  static BinningSet full_line();
  static BinningSet empty();
  /// [-a, a]
  static BinningSet symmetric(double half_width);
  /// [x0, +inf)
  static BinningSet halfline(double x0);
  /// Half-line [x0, inf) whose binning angle is theta: x0 = erfinv(-cos theta).
  static BinningSet halfline_for_angle(double theta);
  /// Symmetric interval whose binning angle is theta: a = erfinv((1 + cos theta) / 2).
  static BinningSet symmetric_for_angle(double theta);

  /// Parses `sym:<a>`, `halfline:<x0>` or `set:[a,b];[c,d];...` (whitespace
  /// ignored, `inf`/`-inf` allowed as endpoints). Numbers may also be given
  /// as `erfinv(<y>)`. Throws DomainError on malformed input.
  static BinningSet parse(std::string_view text);

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool empty_set() const { return intervals_.empty(); }
  bool contains(double x) const;
  /// +1 on A+, -1 elsewhere.
  double sign(double x) const { return contains(x) ? 1.0 : -1.0; }
  BinningSet complement() const;
  /// Finite interval endpoints in increasing order.
  std::vector<double> endpoints() const;
  /// Canonical `set:` form with round-trip precision.
  std::string to_string() const;

 private:
  std::vector<Interval> intervals_;
};

/// theta in [0, pi] with cos(theta) = 2 * int_A phi_0^2 - 1 and sin(theta) >= 0.
struct BinningAngle {
  double theta = 0.0;
  double cos_theta = 1.0;
  double sin_theta = 0.0;

  static BinningAngle from_theta(double theta);
  static BinningAngle from_cos(double cos_theta);
  /// cos(theta/2) = (sqrt(5) - 1) / 2, the maximizer of the Hardy expression.
  static BinningAngle golden();
};

/// int_A phi_m(x) phi_n(x) dx.
///
/// Off-diagonal entries use the Wronskian identity
///   int_a^b phi_m phi_n = [phi_m' phi_n - phi_m phi_n']_a^b / (2 (n - m)),
/// diagonal ones the recursion int phi_n^2 = int phi_{n-1}^2 - [phi_n phi_{n-1}] / sqrt(2n)
/// started from the erf closed form of int phi_0^2.
double overlap_integral(int m, int n, const BinningSet& a);

/// All overlaps I_mn for 0 <= m, n <= n_max.
Eigen::MatrixXd overlap_matrix(const BinningSet& a, int n_max);

/// int_A phi_0 phi_n for n = 0..n_max (one O(n_max) pass per endpoint).
Eigen::VectorXd vacuum_overlaps(const BinningSet& a, int n_max);

/// Throws DegenerateBinningError when |cos theta| > 1 - 1e-9.
BinningAngle binning_angle(const BinningSet& a);

/// cos theta without the degeneracy check.
double binning_cos_theta(const BinningSet& a);

inline constexpr double kXiTruncationLimit = 0.02;

/// Truncated |Xi> = (2 / sin theta) sum_{n>=1} int_A phi_0 phi_n |n>, renormalized.
/// Throws TruncationError if the discarded weight exceeds `max_truncation_weight`.
FockVector xi_state(const BinningSet& a, int n_max,
                    double max_truncation_weight = kXiTruncationLimit);

/// Q with <m|Q|n> = 2 int_A phi_m phi_n - delta_mn.
FockOperator binned_quadrature_operator(const BinningSet& a, int n_max);

/// Q_R = cos theta sigma_z + sin theta sigma_x on span{|0>, |Xi>}.
QubitOperator restricted_quadrature(const BinningAngle& theta);

}  // namespace hybell
