#pragma once

#include <vector>

#include <Eigen/Dense>

#include "hybell/binning.hpp"
#include "hybell/fock.hpp"

namespace hybell {

/// Amplitude-damping (photon loss) channel with transmissivity t.
///
/// Kraus operators A_k |n> = sqrt(C(n,k) t^{n-k} (1-t)^k) |n-k>. Only the band
/// amplitudes are stored; `kraus(k)` materializes a dense matrix.
class LossChannel {
 public:
  LossChannel(double transmissivity, int n_max);

  double transmissivity() const { return t_; }
  int n_max() const { return n_max_; }
  /// <n-k| A_k |n>, zero for k > n.
  double amplitude(int k, int n) const;
  CMatrix kraus(int k) const;
  std::vector<CMatrix> kraus_operators() const;

 private:
  double t_;
  int n_max_;
  Eigen::MatrixXd amp_;  // amp_(k, n)
};

/// Throws DomainError unless t lies in [0, 1].
LossChannel amplitude_damping_kraus(double t, int n_max);

/// Heisenberg-picture action sum_k A_k^dagger M A_k, computed row-parallel
/// from the band structure: out(m, n) = sum_k a_k(m) a_k(n) M(m-k, n-k).
FockOperator adjoint_on_observable(const LossChannel& ch, const FockOperator& m);

/// Reference implementation: literal sum of dense Kraus sandwiches, one thread.
FockOperator adjoint_on_observable_serial(const LossChannel& ch, const FockOperator& m);

/// D_eta = |0><0| + sum_k [2 (1 - eta)^k - 1] |k><k|.
FockOperator detector_observable(double eta, int n_max);

/// H(eta) = (1 - <Xi|D_eta|Xi>) / 2 = sum_n |c_n|^2 (1 - (1 - eta)^n).
double h_function(double eta, const FockVector& xi);

/// D_{R eta t} = H(eta t) sigma_z + (1 - H(eta t)) 1 on {|0>, |Xi>}.
QubitOperator restricted_lossy_detector(double eta, double t, const FockVector& xi);

/// Lambda_t^dagger(Q) on the truncated Fock space; requires t in (0, 1].
FockOperator lossy_quadrature(const BinningSet& a, double t, int n_max);

// ---------------------------------------------------------------------------
// Untruncated observables on span{|0>, |Xi>}.
//
// In the quadrature representation |Xi>(x) = (s_A(x) - cos theta) phi_0(x) / sin theta,
// with s_A = +1 on A+ and -1 elsewhere. Loss before an ideal quadrature
// measurement turns Q into the multiplication operator
//   G_t(x) = E[ s_A(sqrt(t) x + sqrt(1 - t) Y) ],  Y ~ N(0, 1/2),
// so the 2x2 compression of Lambda_t^dagger(Q) reduces to one-dimensional
// integrals with no Fock cutoff.
// ---------------------------------------------------------------------------

/// G_t(x) above.
double lossy_quadrature_symbol(const BinningSet& a, double t, double x);

/// [[<0|Q_t|0>, <0|Q_t|Xi>], [<Xi|Q_t|0>, <Xi|Q_t|Xi>]] for the exact |Xi>.
Eigen::Matrix2d compressed_lossy_quadrature(const BinningSet& a, double t);

/// H(eta) for the exact |Xi> of `a`: the |c_n|^2 series summed until the
/// remaining weight times (1 - eta)^n falls below 1e-15.
double xi_h_function(const BinningSet& a, double eta);

/// diag(1, 1 - 2 H(eta)): D_eta compressed onto span{|0>, |Xi>}.
Eigen::Matrix2d compressed_detector(const BinningSet& a, double eta);

/// Everything the restricted Bell operators need at one (binning, eta, t).
struct SubspaceObservables {
  BinningAngle angle;
  double h = 0.0;              // H(eta t)
  Eigen::Matrix2d detector;    // D_{eta t} compressed
  Eigen::Matrix2d quadrature;  // Lambda_t^dagger(Q) compressed
};
SubspaceObservables subspace_observables(const BinningSet& a, double eta, double t);

}  // namespace hybell
