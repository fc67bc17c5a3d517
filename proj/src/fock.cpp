#include "hybell/fock.hpp"

#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "hybell/errors.hpp"

namespace hybell {

FockVector::FockVector(CVector amplitudes, double truncation_weight)
    : amps_(std::move(amplitudes)), truncation_weight_(truncation_weight) {
  if (amps_.size() < 2) throw DimensionError("FockVector: n_max must be >= 1");
}

FockVector FockVector::basis(int n, int n_max) {
  if (n < 0 || n > n_max) throw DimensionError("FockVector::basis: index outside 0..n_max");
  CVector v = CVector::Zero(n_max + 1);
  v[n] = 1.0;
  return FockVector(std::move(v));
}

FockVector FockVector::resized(int n_max) const {
  CVector v = CVector::Zero(n_max + 1);
  const int keep = std::min(n_max, this->n_max()) + 1;
  v.head(keep) = amps_.head(keep);
  return FockVector(std::move(v), truncation_weight_);
}

FockOperator::FockOperator(const CMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("FockOperator: matrix is not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale)
    throw NonHermitianError("FockOperator: matrix is not Hermitian (max |M - M^+| = " +
                            std::to_string(asym) + ")");
  m_ = 0.5 * (m + m.adjoint());
}

FockOperator FockOperator::identity(int n_max) {
  return FockOperator(CMatrix::Identity(n_max + 1, n_max + 1));
}

FockOperator FockOperator::diagonal(const Eigen::VectorXd& d) {
  return FockOperator(CMatrix(d.cast<cplx>().asDiagonal()));
}

double FockOperator::expectation(const FockVector& psi) const {
  if (psi.dim() != dim()) throw DimensionError("FockOperator::expectation: dimension mismatch");
  return psi.amplitudes().dot(m_ * psi.amplitudes()).real();
}

cplx FockOperator::element(const FockVector& bra, const FockVector& ket) const {
  if (bra.dim() != dim() || ket.dim() != dim())
    throw DimensionError("FockOperator::element: dimension mismatch");
  return bra.amplitudes().dot(m_ * ket.amplitudes());
}

QubitOperator::QubitOperator(const Eigen::Matrix2cd& m) {
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()))
    throw NonHermitianError("QubitOperator: matrix is not Hermitian");
  m_ = 0.5 * (m + m.adjoint());
}

QubitOperator QubitOperator::identity() { return combination(0.0, 0.0, 1.0); }
QubitOperator QubitOperator::sigma_x() { return combination(0.0, 1.0); }
QubitOperator QubitOperator::sigma_z() { return combination(1.0, 0.0); }

QubitOperator QubitOperator::combination(double z, double x, double identity) {
  Eigen::Matrix2cd m;
  m << identity + z, x, x, identity - z;
  return QubitOperator(m);
}

Eigen::Vector2d QubitOperator::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

std::string to_string(StateLayout layout) {
  switch (layout) {
    case StateLayout::AtomPhoton: return "atom-photon";
    case StateLayout::PhotonPhoton: return "photon-photon";
    case StateLayout::AtomPhotonRestricted: return "atom-photon-restricted";
    case StateLayout::PhotonPhotonRestricted: return "photon-photon-restricted";
  }
  return "unknown";
}

HybridState::HybridState(StateLayout layout, CVector amplitudes)
    : layout_(layout), amps_(std::move(amplitudes)) {
  const auto n = amps_.size();
  switch (layout_) {
    case StateLayout::AtomPhoton:
      if (n < 4 || n % 2 != 0) throw DimensionError("HybridState: atom-photon size must be 2*(n_max+1)");
      break;
    case StateLayout::PhotonPhoton: {
      const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n))));
      if (d < 2 || d * d != n) throw DimensionError("HybridState: photon-photon size must be (n_max+1)^2");
      break;
    }
    case StateLayout::AtomPhotonRestricted:
    case StateLayout::PhotonPhotonRestricted:
      if (n != 4) throw DimensionError("HybridState: restricted states are 4-dimensional");
      break;
  }
}

int HybridState::first_dim() const {
  switch (layout_) {
    case StateLayout::AtomPhoton:
    case StateLayout::AtomPhotonRestricted:
    case StateLayout::PhotonPhotonRestricted:
      return 2;
    case StateLayout::PhotonPhoton:
      return second_dim();
  }
  return 0;
}

int HybridState::second_dim() const {
  switch (layout_) {
    case StateLayout::AtomPhoton: return static_cast<int>(amps_.size() / 2);
    case StateLayout::PhotonPhoton:
      return static_cast<int>(std::llround(std::sqrt(static_cast<double>(amps_.size()))));
    default: return 2;
  }
}

bool HybridState::restricted() const {
  return layout_ == StateLayout::AtomPhotonRestricted || layout_ == StateLayout::PhotonPhotonRestricted;
}

CMatrix HybridState::as_matrix() const {
  const int r = first_dim();
  const int c = second_dim();
  CMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = amps_[i * c + j];
  return m;
}

HybridState HybridState::swapped() const {
  if (layout_ != StateLayout::PhotonPhoton && layout_ != StateLayout::PhotonPhotonRestricted)
    throw DimensionError("HybridState::swapped: only photon-photon states can be swapped");
  const CMatrix t = as_matrix().transpose();
  CVector v(amps_.size());
  const int c = static_cast<int>(t.cols());
  for (int i = 0; i < t.rows(); ++i)
    for (int j = 0; j < c; ++j) v[i * c + j] = t(i, j);
  return HybridState(layout_, std::move(v));
}

std::vector<std::string> HybridState::basis_labels() const {
  switch (layout_) {
    case StateLayout::AtomPhotonRestricted: return {"g,0", "g,Xi", "s,0", "s,Xi"};
    case StateLayout::PhotonPhotonRestricted: return {"0,0", "0,Xi", "Xi,0", "Xi,Xi"};
    default: return {};
  }
}

namespace {

void check_coherent_pre(cplx alpha, int n_max) {
  if (n_max < 1) throw DimensionError("coherent state: n_max must be >= 1");
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
    throw DomainError("coherent state: alpha must be finite");
  if (std::norm(alpha) > n_max / 4.0)
    throw DomainError("coherent state: |alpha|^2 = " + std::to_string(std::norm(alpha)) +
                      " exceeds n_max/4 = " + std::to_string(n_max / 4.0));
}

// e^{-|a|^2/2} a^n / sqrt(n!) for n = 0..n_max.
CVector coherent_amplitudes(cplx alpha, int n_max) {
  CVector c(n_max + 1);
  const double r = std::abs(alpha);
  const double lambda = r * r;
  c[0] = std::exp(-0.5 * lambda);
  if (r == 0.0) {
    c.tail(n_max).setZero();
    return c;
  }
  const cplx unit = alpha / r;
  cplx phase = 1.0;
  const double log_r = std::log(r);
  for (int n = 1; n <= n_max; ++n) {
    phase *= unit;
    const double log_mag = -0.5 * lambda + n * log_r - 0.5 * std::lgamma(n + 1.0);
    c[n] = std::exp(log_mag) * phase;
  }
  return c;
}

}  // namespace

FockVector coherent_state(cplx alpha, int n_max) {
  check_coherent_pre(alpha, n_max);
  CVector c = coherent_amplitudes(alpha, n_max);
  const double lambda = std::norm(alpha);
  const double tail = lambda == 0.0 ? 0.0 : boost::math::gamma_p(n_max + 1.0, lambda);
  if (tail > 1e-8)
    throw TruncationError("coherent_state: discarded weight " + std::to_string(tail) + " > 1e-8");
  c /= c.norm();
  return FockVector(std::move(c), tail);
}

FockVector even_cat_state(cplx alpha, int n_max) {
  check_coherent_pre(alpha, n_max);
  CVector c = coherent_amplitudes(alpha, n_max);
  const double lambda = std::norm(alpha);
  const double norm = std::sqrt(2.0 * (1.0 + std::exp(-2.0 * lambda)));
  for (int n = 0; n <= n_max; ++n) c[n] = (n % 2 == 0) ? 2.0 * c[n] / norm : cplx(0.0);
  const double tail = std::max(0.0, 1.0 - c.squaredNorm());
  if (tail > 1e-8)
    throw TruncationError("even_cat_state: discarded weight " + std::to_string(tail) + " > 1e-8");
  c /= c.norm();
  fix_global_phase(c);
  return FockVector(std::move(c), tail);
}

double number_expectation(const FockVector& psi) {
  double s = 0.0;
  for (int n = 1; n <= psi.n_max(); ++n) s += n * std::norm(psi[n]);
  return s;
}

void fix_global_phase(CVector& v, double tol) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > tol) {
      const cplx p = std::conj(v[i]) / std::abs(v[i]);
      v *= p;
      v[i] = std::abs(v[i]);
      return;
    }
  }
}

EigenPair max_eigenpair(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw DimensionError("max_eigenpair: matrix must be square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw NonHermitianError("max_eigenpair: matrix is not Hermitian");
  const CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) throw ConvergenceError("max_eigenpair: eigensolver failed");

  const auto& vals = es.eigenvalues();
  const Eigen::Index top = vals.size() - 1;
  EigenPair out;
  out.value = vals[top];
  const double tol = 1e-9 * std::max(1.0, std::abs(out.value));
  Eigen::Index first = top;
  while (first > 0 && out.value - vals[first - 1] <= tol) --first;
  out.gap = first > 0 ? out.value - vals[first - 1] : INFINITY;
  out.degenerate = first < top;

  if (!out.degenerate) {
    out.vector = es.eigenvectors().col(top);
  } else {
    const CMatrix basis = es.eigenvectors().middleCols(first, top - first + 1);
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
      const CVector proj = basis * basis.row(i).adjoint();
      if (proj.norm() > 1e-8) {
        out.vector = proj.normalized();
        break;
      }
    }
  }
  fix_global_phase(out.vector);
  return out;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace hybell
