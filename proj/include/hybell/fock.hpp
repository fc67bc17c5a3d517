#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hybell {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// State of one bosonic mode on the truncated Fock space |0>, ..., |n_max>.
///
/// `truncation_weight` is the probability that was discarded by the cutoff
/// before renormalization (0 for states that fit exactly).
class FockVector {
 public:
  explicit FockVector(CVector amplitudes, double truncation_weight = 0.0);

  static FockVector basis(int n, int n_max);
  static FockVector vacuum(int n_max) { return basis(0, n_max); }

  int n_max() const { return static_cast<int>(amps_.size()) - 1; }
  int dim() const { return static_cast<int>(amps_.size()); }
  const CVector& amplitudes() const { return amps_; }
  cplx operator[](int n) const { return amps_[n]; }
  double truncation_weight() const { return truncation_weight_; }
  double norm() const { return amps_.norm(); }

  /// Zero-padded or cut copy on a different truncation.
  FockVector resized(int n_max) const;

 private:
  CVector amps_;
  double truncation_weight_;
};

/// Dense Hermitian operator on the truncated Fock space.
class FockOperator {
 public:
  /// Throws NonHermitianError when M differs from M^dagger by more than 1e-12
  /// (relative to max(1, |M|_max)); the stored matrix is exactly Hermitian.
  explicit FockOperator(const CMatrix& m);

  static FockOperator identity(int n_max);
  static FockOperator diagonal(const Eigen::VectorXd& d);

  int n_max() const { return static_cast<int>(m_.rows()) - 1; }
  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  double expectation(const FockVector& psi) const;
  cplx element(const FockVector& bra, const FockVector& ket) const;

 private:
  CMatrix m_;
};

/// Hermitian operator on a qubit; used for the atom and for restricted photonic observables.
class QubitOperator {
 public:
  QubitOperator() = default;
  explicit QubitOperator(const Eigen::Matrix2cd& m);

  static QubitOperator identity();
  static QubitOperator sigma_x();
  static QubitOperator sigma_z();
  /// a*sigma_z + b*sigma_x + c*identity.
  static QubitOperator combination(double z, double x, double identity = 0.0);

  const Eigen::Matrix2cd& matrix() const { return m_; }
  Eigen::Vector2d eigenvalues() const;

 private:
  Eigen::Matrix2cd m_ = Eigen::Matrix2cd::Zero();
};

enum class StateLayout {
  AtomPhoton,              // {g, s} x {0..n_max}
  PhotonPhoton,            // {0..n_max} x {0..n_max}
  AtomPhotonRestricted,    // (g,0), (g,Xi), (s,0), (s,Xi)
  PhotonPhotonRestricted,  // (0,0), (0,Xi), (Xi,0), (Xi,Xi)
};

std::string to_string(StateLayout layout);

/// Bipartite pure state. Amplitude index = i * second_dim + j.
class HybridState {
 public:
  HybridState(StateLayout layout, CVector amplitudes);

  StateLayout layout() const { return layout_; }
  const CVector& amplitudes() const { return amps_; }
  int first_dim() const;
  int second_dim() const;
  bool restricted() const;
  double norm() const { return amps_.norm(); }

  /// Amplitudes arranged as a first_dim x second_dim matrix.
  CMatrix as_matrix() const;
  /// Exchanges the two parties; only meaningful for photon-photon layouts.
  HybridState swapped() const;
  /// Labels of the basis vectors in amplitude order (restricted layouts only).
  std::vector<std::string> basis_labels() const;

 private:
  StateLayout layout_;
  CVector amps_;
};

/// Coherent state |alpha> truncated at n_max and renormalized.
/// Requires |alpha|^2 <= n_max / 4; throws TruncationError if the discarded
/// Poisson tail exceeds 1e-8.
FockVector coherent_state(cplx alpha, int n_max);

/// Even cat state (|alpha> + |-alpha>) / (sqrt(2) sqrt(1 + exp(-2|alpha|^2))).
FockVector even_cat_state(cplx alpha, int n_max);

/// <N> = sum_n n |c_n|^2.
double number_expectation(const FockVector& psi);

struct EigenPair {
  double value = 0.0;
  CVector vector;
  bool degenerate = false;
  double gap = 0.0;  // distance to the next eigenvalue below
};

/// Largest eigenvalue and its eigenvector of a Hermitian matrix.
///
/// The eigenvector's first nonzero component is made real positive. When the
/// top eigenvalue is degenerate, the vector returned is the normalized
/// projection of the first basis vector e_i that has nonzero overlap with the
/// eigenspace, and `degenerate` is set.
EigenPair max_eigenpair(const CMatrix& m);

/// Makes the first component with modulus > tol real and positive.
void fix_global_phase(CVector& v, double tol = 1e-12);

CMatrix kron(const CMatrix& a, const CMatrix& b);

}  // namespace hybell
