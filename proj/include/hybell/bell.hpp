#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hybell/binning.hpp"
#include "hybell/channels.hpp"
#include "hybell/fock.hpp"

namespace hybell {

enum class Scenario { AtomPhoton, PhotonPhoton };

std::string to_string(Scenario s);
Scenario parse_scenario(const std::string& text);

struct ScenarioConfig {
  Scenario scenario = Scenario::AtomPhoton;
  double gamma = 0.0;  // atom measurement angle; atom-photon only
  BinningSet binning = BinningSet::halfline(0.0);
  double eta = 1.0;
  double t = 1.0;
  int n_max = 64;
};

/// One Kronecker term first (x) second.
struct BellTerm {
  CMatrix first;
  CMatrix second;
};

inline constexpr std::size_t kDefaultDenseBudget = std::size_t{512} << 20;

/// CHSH operator kept as a sum of Kronecker products. Expectations contract
/// the state as a matrix, Tr(Psi^+ A Psi B^T), so the full operator is never
/// formed unless `dense` is called.
class BellOperator {
 public:
  BellOperator(StateLayout layout, std::vector<BellTerm> terms);

  StateLayout layout() const { return layout_; }
  int first_dim() const { return static_cast<int>(terms_.front().first.rows()); }
  int second_dim() const { return static_cast<int>(terms_.front().second.rows()); }
  const std::vector<BellTerm>& terms() const { return terms_; }

  /// <psi|B|psi>; throws DimensionError on layout or size mismatch.
  double expectation(const HybridState& psi) const;
  /// Throws MemoryBudgetError if the dense matrix would exceed `budget_bytes`.
  CMatrix dense(std::size_t budget_bytes = kDefaultDenseBudget) const;
  /// Compression onto span(first_basis) (x) span(second_basis); bases are
  /// given as orthonormal columns.
  CMatrix compress(const CMatrix& first_basis, const CMatrix& second_basis) const;

 private:
  StateLayout layout_;
  std::vector<BellTerm> terms_;
};

/// V(gamma) = cos gamma sigma_z + sin gamma sigma_x.
QubitOperator atom_observable(double gamma);

/// V(gamma) (x) (D + Q) + V(-gamma) (x) (D - Q) with D = D_{eta t}, Q = Lambda_t^+(Q).
BellOperator atom_photon_bell(const ScenarioConfig& cfg);

/// D (x) (D + Q) + Q (x) (D - Q) = D(x)D + D(x)Q + Q(x)D - Q(x)Q, so exchanging
/// the two modes leaves it unchanged.
BellOperator photon_photon_bell(const ScenarioConfig& cfg);

/// A 4x4 CHSH operator on {g,s} x {0,Xi} or {0,Xi} x {0,Xi}, ordered
/// (g,0),(g,Xi),(s,0),(s,Xi) resp. (0,0),(0,Xi),(Xi,0),(Xi,Xi).
struct RestrictedBellOperator {
  Eigen::Matrix4cd matrix;
  StateLayout layout = StateLayout::AtomPhotonRestricted;

  double max_eigenvalue() const;
  double expectation(const HybridState& psi) const;
};

/// Restricted atom-photon operator from arbitrary 2x2 photonic observables
/// (exact restrictions at t = 1 or compressions of the lossy ones).
RestrictedBellOperator assemble_atom_photon(double gamma, const Eigen::Matrix2d& detector,
                                            const Eigen::Matrix2d& quadrature);
RestrictedBellOperator assemble_photon_photon(const Eigen::Matrix2d& detector,
                                              const Eigen::Matrix2d& quadrature);

/// V(gamma) (x) (D_R + Q_R) + V(-gamma) (x) (D_R - Q_R) with D_R = h sigma_z + (1-h) 1,
/// h = H(eta) of the |Xi> in use.
RestrictedBellOperator restricted_atom_photon(double gamma, double h, const BinningAngle& theta);
/// Same, computing theta and H(eta) from the binning.
RestrictedBellOperator restricted_atom_photon(double gamma, double eta, const BinningSet& a);

RestrictedBellOperator restricted_photon_photon(const BinningAngle& theta, double h);
RestrictedBellOperator restricted_photon_photon(const BinningSet& a, double eta);

/// The lossy CHSH operator compressed onto the {|0>, |Xi>} subspace(s).
/// Unlike the t = 1 restrictions this is only a compression: states are
/// restricted, the observables are not.
RestrictedBellOperator compressed_bell(Scenario scenario, double gamma, const SubspaceObservables& obs);

/// 2 H cos gamma + 2 sqrt(sin^2 gamma + (1 - H)^2 cos^2 gamma).
double a_xi_expectation(double gamma, double h);

/// Normalized top eigenvector of the restricted atom-photon operator:
/// [(1-H) cos g + sqrt(sin^2 g + (1-H)^2 cos^2 g)] |g,0> + sin g |s,Xi>.
HybridState a_xi_state(double gamma, double h);

/// cos nu |g,0> + sin nu |s,cat(alpha)>.
HybridState a_cat_state(cplx alpha, double nu, int n_max);

struct RestrictedOptimum {
  HybridState state;
  double value = 0.0;
  bool degenerate = false;
};

/// |P_Xi>: top eigenvector of restricted_photon_photon(theta, h).
RestrictedOptimum p_xi_state(const BinningAngle& theta, double h);

/// [cos(th/2)|++> + sin(th/2)(|+-> + |-+>)] / sqrt(1 + sin^2(th/2)), with
/// |+> = (cos th/2, sin th/2) and |-> = (sin th/2, -cos th/2) the eigenvectors of Q_R.
HybridState hardy_state(const BinningAngle& theta);

/// 2 + H^2 4 cos^2(th/2) sin^4(th/2) / (1 + sin^2(th/2)).
double hardy_closed_form(const BinningAngle& theta, double h);
double hardy_expectation(const BinningAngle& theta, double eta, const FockVector& xi);

/// Maps a restricted state into the truncated Fock space using |Xi> = xi.
HybridState embed(const HybridState& restricted, const FockVector& xi);

double expectation(const HybridState& psi, const BellOperator& b);
double expectation(const HybridState& psi, const RestrictedBellOperator& b);

}  // namespace hybell
