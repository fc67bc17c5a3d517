#include "hybell/bell.hpp"

#include <cmath>

#include "hybell/errors.hpp"

namespace hybell {
namespace {

CMatrix qubit(const QubitOperator& q) { return q.matrix(); }

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

bool compatible(StateLayout state, StateLayout op) { return state == op; }

// Photonic basis {|0>, |Xi>} as orthonormal columns.
CMatrix subspace_basis(const FockVector& xi) {
  if (std::abs(xi[0]) > 1e-12 || std::abs(xi.norm() - 1.0) > 1e-10)
    throw DomainError("embed: |Xi> must be normalized and orthogonal to the vacuum");
  CMatrix u = CMatrix::Zero(xi.dim(), 2);
  u(0, 0) = 1.0;
  u.col(1) = xi.amplitudes();
  return u;
}

}  // namespace

std::string to_string(Scenario s) {
  return s == Scenario::AtomPhoton ? "atom-photon" : "photon-photon";
}

Scenario parse_scenario(const std::string& text) {
  if (text == "atom-photon") return Scenario::AtomPhoton;
  if (text == "photon-photon") return Scenario::PhotonPhoton;
  throw DomainError("scenario must be atom-photon or photon-photon, got '" + text + "'");
}

BellOperator::BellOperator(StateLayout layout, std::vector<BellTerm> terms)
    : layout_(layout), terms_(std::move(terms)) {
  if (terms_.empty()) throw DimensionError("BellOperator: no terms");
  for (const auto& t : terms_) {
    if (t.first.rows() != terms_.front().first.rows() || t.second.rows() != terms_.front().second.rows() ||
        t.first.rows() != t.first.cols() || t.second.rows() != t.second.cols())
      throw DimensionError("BellOperator: inconsistent term dimensions");
  }
}

double BellOperator::expectation(const HybridState& psi) const {
  if (!compatible(psi.layout(), layout_) || psi.first_dim() != first_dim() || psi.second_dim() != second_dim())
    throw DimensionError("expectation: state (" + to_string(psi.layout()) + ", " +
                         std::to_string(psi.amplitudes().size()) + " amplitudes) does not match the operator");
  const CMatrix m = psi.as_matrix();
  cplx acc = 0.0;
  for (const auto& t : terms_) acc += (m.conjugate().cwiseProduct(t.first * m * t.second.transpose())).sum();
  if (std::abs(acc.imag()) > 1e-10 * std::max(1.0, std::abs(acc.real())))
    throw NonHermitianError("expectation: imaginary residue " + std::to_string(acc.imag()));
  return acc.real();
}

CMatrix BellOperator::dense(std::size_t budget_bytes) const {
  const auto dim = static_cast<std::size_t>(first_dim()) * static_cast<std::size_t>(second_dim());
  const std::size_t bytes = dim * dim * sizeof(cplx);
  if (bytes > budget_bytes)
    throw MemoryBudgetError("dense Bell operator needs " + std::to_string(bytes >> 20) + " MiB (budget " +
                            std::to_string(budget_bytes >> 20) +
                            " MiB); reduce --nmax or work in the restricted subspace");
  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& t : terms_) out += kron(t.first, t.second);
  return out;
}

CMatrix BellOperator::compress(const CMatrix& first_basis, const CMatrix& second_basis) const {
  if (first_basis.rows() != first_dim() || second_basis.rows() != second_dim())
    throw DimensionError("compress: basis dimension mismatch");
  CMatrix out = CMatrix::Zero(first_basis.cols() * second_basis.cols(), first_basis.cols() * second_basis.cols());
  for (const auto& t : terms_)
    out += kron(first_basis.adjoint() * t.first * first_basis, second_basis.adjoint() * t.second * second_basis);
  return out;
}

QubitOperator atom_observable(double gamma) {
  return QubitOperator::combination(std::cos(gamma), std::sin(gamma));
}

BellOperator atom_photon_bell(const ScenarioConfig& cfg) {
  if (cfg.scenario != Scenario::AtomPhoton) throw DomainError("atom_photon_bell: scenario must be atom-photon");
  const CMatrix d = detector_observable(cfg.eta * cfg.t, cfg.n_max).matrix();
  const CMatrix q = lossy_quadrature(cfg.binning, cfg.t, cfg.n_max).matrix();
  return BellOperator(StateLayout::AtomPhoton, {{qubit(atom_observable(cfg.gamma)), d + q},
                                                {qubit(atom_observable(-cfg.gamma)), d - q}});
}

BellOperator photon_photon_bell(const ScenarioConfig& cfg) {
  if (cfg.scenario != Scenario::PhotonPhoton) throw DomainError("photon_photon_bell: scenario must be photon-photon");
  const CMatrix d = detector_observable(cfg.eta * cfg.t, cfg.n_max).matrix();
  const CMatrix q = lossy_quadrature(cfg.binning, cfg.t, cfg.n_max).matrix();
  return BellOperator(StateLayout::PhotonPhoton, {{d, d + q}, {q, d - q}});
}

double RestrictedBellOperator::max_eigenvalue() const { return max_eigenpair(matrix).value; }

double RestrictedBellOperator::expectation(const HybridState& psi) const {
  if (psi.layout() != layout) throw DimensionError("expectation: state layout does not match the restricted operator");
  const cplx v = psi.amplitudes().dot(matrix * psi.amplitudes());
  if (std::abs(v.imag()) > 1e-10) throw NonHermitianError("expectation: imaginary residue");
  return v.real();
}

RestrictedBellOperator assemble_atom_photon(double gamma, const Eigen::Matrix2d& detector,
                                            const Eigen::Matrix2d& quadrature) {
  const Eigen::Matrix2cd d = detector.cast<cplx>();
  const Eigen::Matrix2cd q = quadrature.cast<cplx>();
  RestrictedBellOperator b;
  b.layout = StateLayout::AtomPhotonRestricted;
  b.matrix = kron2(atom_observable(gamma).matrix(), d + q) + kron2(atom_observable(-gamma).matrix(), d - q);
  return b;
}

RestrictedBellOperator assemble_photon_photon(const Eigen::Matrix2d& detector, const Eigen::Matrix2d& quadrature) {
  const Eigen::Matrix2cd d = detector.cast<cplx>();
  const Eigen::Matrix2cd q = quadrature.cast<cplx>();
  RestrictedBellOperator b;
  b.layout = StateLayout::PhotonPhotonRestricted;
  b.matrix = kron2(d, d + q) + kron2(q, d - q);
  return b;
}

namespace {

Eigen::Matrix2d restricted_detector(double h) {
  Eigen::Matrix2d d;
  d << 1.0, 0.0, 0.0, 1.0 - 2.0 * h;
  return d;
}

Eigen::Matrix2d restricted_q(const BinningAngle& th) {
  Eigen::Matrix2d q;
  q << th.cos_theta, th.sin_theta, th.sin_theta, -th.cos_theta;
  return q;
}

void check_h(double h) {
  if (!(h >= 0.0 && h <= 1.0)) throw DomainError("H = " + std::to_string(h) + " is outside [0, 1]");
}

}  // namespace

RestrictedBellOperator restricted_atom_photon(double gamma, double h, const BinningAngle& theta) {
  check_h(h);
  return assemble_atom_photon(gamma, restricted_detector(h), restricted_q(theta));
}

RestrictedBellOperator restricted_atom_photon(double gamma, double eta, const BinningSet& a) {
  return restricted_atom_photon(gamma, xi_h_function(a, eta), binning_angle(a));
}

RestrictedBellOperator restricted_photon_photon(const BinningAngle& theta, double h) {
  check_h(h);
  return assemble_photon_photon(restricted_detector(h), restricted_q(theta));
}

RestrictedBellOperator restricted_photon_photon(const BinningSet& a, double eta) {
  return restricted_photon_photon(binning_angle(a), xi_h_function(a, eta));
}

RestrictedBellOperator compressed_bell(Scenario scenario, double gamma, const SubspaceObservables& obs) {
  return scenario == Scenario::AtomPhoton ? assemble_atom_photon(gamma, obs.detector, obs.quadrature)
                                          : assemble_photon_photon(obs.detector, obs.quadrature);
}

double a_xi_expectation(double gamma, double h) {
  check_h(h);
  const double c = std::cos(gamma);
  const double s = std::sin(gamma);
  return 2.0 * h * c + 2.0 * std::sqrt(s * s + (1.0 - h) * (1.0 - h) * c * c);
}

HybridState a_xi_state(double gamma, double h) {
  check_h(h);
  const double c = std::cos(gamma);
  const double s = std::sin(gamma);
  CVector v = CVector::Zero(4);
  v[0] = (1.0 - h) * c + std::sqrt(s * s + (1.0 - h) * (1.0 - h) * c * c);
  v[3] = s;
  if (v.norm() < 1e-300) v[0] = 1.0;
  v.normalize();
  fix_global_phase(v);
  return HybridState(StateLayout::AtomPhotonRestricted, std::move(v));
}

HybridState a_cat_state(cplx alpha, double nu, int n_max) {
  const FockVector cat = even_cat_state(alpha, n_max);
  CVector v = CVector::Zero(2 * (n_max + 1));
  v[0] = std::cos(nu);
  v.tail(n_max + 1) = std::sin(nu) * cat.amplitudes();
  return HybridState(StateLayout::AtomPhoton, std::move(v));
}

RestrictedOptimum p_xi_state(const BinningAngle& theta, double h) {
  const auto pair = max_eigenpair(restricted_photon_photon(theta, h).matrix);
  return {HybridState(StateLayout::PhotonPhotonRestricted, pair.vector), pair.value, pair.degenerate};
}

HybridState hardy_state(const BinningAngle& theta) {
  const double c = std::cos(0.5 * theta.theta);
  const double s = std::sin(0.5 * theta.theta);
  const Eigen::Vector2d plus(c, s);
  const Eigen::Vector2d minus(s, -c);
  Eigen::Vector4d v;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      v[2 * i + j] = c * plus[i] * plus[j] + s * (plus[i] * minus[j] + minus[i] * plus[j]);
  v /= std::sqrt(1.0 + s * s);
  return HybridState(StateLayout::PhotonPhotonRestricted, v.cast<cplx>());
}

double hardy_closed_form(const BinningAngle& theta, double h) {
  check_h(h);
  const double c = std::cos(0.5 * theta.theta);
  const double s2 = std::pow(std::sin(0.5 * theta.theta), 2);
  return 2.0 + h * h * 4.0 * c * c * s2 * s2 / (1.0 + s2);
}

double hardy_expectation(const BinningAngle& theta, double eta, const FockVector& xi) {
  return hardy_closed_form(theta, h_function(eta, xi));
}

HybridState embed(const HybridState& restricted, const FockVector& xi) {
  const CMatrix u = subspace_basis(xi);
  const CMatrix m = restricted.as_matrix();
  switch (restricted.layout()) {
    case StateLayout::AtomPhotonRestricted: {
      const CMatrix full = m * u.transpose();  // 2 x (n_max+1)
      CVector v(full.size());
      for (int a = 0; a < 2; ++a) v.segment(a * xi.dim(), xi.dim()) = full.row(a).transpose();
      return HybridState(StateLayout::AtomPhoton, std::move(v));
    }
    case StateLayout::PhotonPhotonRestricted: {
      const CMatrix full = u * m * u.transpose();
      CVector v(full.size());
      for (int i = 0; i < xi.dim(); ++i) v.segment(i * xi.dim(), xi.dim()) = full.row(i).transpose();
      return HybridState(StateLayout::PhotonPhoton, std::move(v));
    }
    default:
      throw DimensionError("embed: state is not restricted");
  }
}

double expectation(const HybridState& psi, const BellOperator& b) { return b.expectation(psi); }
double expectation(const HybridState& psi, const RestrictedBellOperator& b) { return b.expectation(psi); }

}  // namespace hybell
