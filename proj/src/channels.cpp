#include "hybell/channels.hpp"

#include <algorithm>
#include <cmath>

#include "hybell/errors.hpp"
#include "hybell/special.hpp"

namespace hybell {
namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0))
    throw DomainError(std::string(what) + " = " + std::to_string(p) + " is outside [0, 1]");
}

// Quadrature range for integrands carrying phi_0^2 ~ exp(-x^2).
constexpr double kGaussianCut = 10.0;

}  // namespace

LossChannel::LossChannel(double transmissivity, int n_max) : t_(transmissivity), n_max_(n_max) {
  check_probability(t_, "transmissivity t");
  if (n_max < 1) throw DimensionError("LossChannel: n_max must be >= 1");
  amp_ = Eigen::MatrixXd::Zero(n_max + 1, n_max + 1);
  if (t_ == 1.0) {
    amp_.row(0).setOnes();
    return;
  }
  if (t_ == 0.0) {
    amp_.diagonal().setOnes();
    return;
  }
  const double log_t = std::log(t_);
  const double log_r = std::log1p(-t_);
  for (int n = 0; n <= n_max; ++n) {
    for (int k = 0; k <= n; ++k) {
      const double log_binom = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
      amp_(k, n) = std::exp(0.5 * (log_binom + (n - k) * log_t + k * log_r));
    }
  }
}

double LossChannel::amplitude(int k, int n) const {
  if (k < 0 || n < 0 || k > n_max_ || n > n_max_) return 0.0;
  return amp_(k, n);
}

CMatrix LossChannel::kraus(int k) const {
  CMatrix a = CMatrix::Zero(n_max_ + 1, n_max_ + 1);
  for (int n = k; n <= n_max_; ++n) a(n - k, n) = amp_(k, n);
  return a;
}

std::vector<CMatrix> LossChannel::kraus_operators() const {
  std::vector<CMatrix> out;
  out.reserve(static_cast<std::size_t>(n_max_) + 1);
  for (int k = 0; k <= n_max_; ++k) out.push_back(kraus(k));
  return out;
}

LossChannel amplitude_damping_kraus(double t, int n_max) { return LossChannel(t, n_max); }

FockOperator adjoint_on_observable(const LossChannel& ch, const FockOperator& m) {
  if (m.n_max() != ch.n_max()) throw DimensionError("adjoint_on_observable: dimension mismatch");
  const int dim = m.dim();
  const CMatrix& in = m.matrix();
  CMatrix out(dim, dim);
#pragma omp parallel for schedule(dynamic, 8)
  for (int r = 0; r < dim; ++r) {
    for (int c = r; c < dim; ++c) {
      cplx acc = 0.0;
      for (int k = 0; k <= r; ++k) acc += ch.amplitude(k, r) * ch.amplitude(k, c) * in(r - k, c - k);
      out(r, c) = acc;
      out(c, r) = std::conj(acc);
    }
  }
  return FockOperator(out);
}

FockOperator adjoint_on_observable_serial(const LossChannel& ch, const FockOperator& m) {
  if (m.n_max() != ch.n_max()) throw DimensionError("adjoint_on_observable: dimension mismatch");
  CMatrix out = CMatrix::Zero(m.dim(), m.dim());
  for (int k = 0; k <= ch.n_max(); ++k) {
    const CMatrix a = ch.kraus(k);
    out += a.adjoint() * m.matrix() * a;
  }
  return FockOperator(out);
}

FockOperator detector_observable(double eta, int n_max) {
  check_probability(eta, "efficiency eta");
  Eigen::VectorXd d(n_max + 1);
  double p = 1.0;  // (1 - eta)^k
  for (int k = 0; k <= n_max; ++k) {
    d[k] = 2.0 * p - 1.0;
    p *= 1.0 - eta;
  }
  return FockOperator::diagonal(d);
}

double h_function(double eta, const FockVector& xi) {
  check_probability(eta, "efficiency eta");
  if (std::abs(xi[0]) > 1e-12) throw DomainError("h_function: |Xi> must be orthogonal to the vacuum");
  double h = 0.0;
  double p = 1.0;
  for (int n = 1; n <= xi.n_max(); ++n) {
    p *= 1.0 - eta;
    h += std::norm(xi[n]) * (1.0 - p);
  }
  return std::clamp(h, 0.0, 1.0);  // rounding in the norm can push it past 1
}

QubitOperator restricted_lossy_detector(double eta, double t, const FockVector& xi) {
  check_probability(eta, "efficiency eta");
  check_probability(t, "transmittance t");
  const double h = h_function(eta * t, xi);
  return QubitOperator::combination(h, 0.0, 1.0 - h);
}

FockOperator lossy_quadrature(const BinningSet& a, double t, int n_max) {
  if (!(t > 0.0 && t <= 1.0)) throw DomainError("lossy_quadrature: t = " + std::to_string(t) + " is outside (0, 1]");
  FockOperator q = binned_quadrature_operator(a, n_max);
  if (t == 1.0) return q;
  return adjoint_on_observable(amplitude_damping_kraus(t, n_max), q);
}

double lossy_quadrature_symbol(const BinningSet& a, double t, double x) {
  check_probability(t, "transmittance t");
  if (t == 1.0) return a.sign(x);
  const double shift = std::sqrt(t) * x;
  const double width = std::sqrt(1.0 - t);
  double p2 = 0.0;  // 2 P(sqrt(t) x + sqrt(1-t) Y in A)
  for (const auto& iv : a.intervals()) p2 += erf_difference((iv.hi - shift) / width, (iv.lo - shift) / width);
  return p2 - 1.0;
}

Eigen::Matrix2d compressed_lossy_quadrature(const BinningSet& a, double t) {
  check_probability(t, "transmittance t");
  const BinningAngle th = binning_angle(a);
  const double c = th.cos_theta;
  const double s = th.sin_theta;
  Eigen::Matrix2d q;
  if (t == 1.0) {
    q << c, s, s, -c;
    return q;
  }

  std::vector<double> breaks{-kGaussianCut, kGaussianCut};
  for (double e : a.endpoints()) {
    breaks.push_back(e);
    if (t > 0.0) {
      // G_t switches sign across e / sqrt(t) over a width ~ sqrt((1 - t) / t).
      const double centre = e / std::sqrt(t);
      const double width = std::sqrt((1.0 - t) / t);
      breaks.push_back(centre);
      for (double k : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        breaks.push_back(centre - k * width);
        breaks.push_back(centre + k * width);
      }
    }
  }
  std::erase_if(breaks, [](double b) { return std::abs(b) > kGaussianCut; });
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  const double norm0 = 1.0 / std::sqrt(kPi);
  auto integrand = [&](double x) { return norm0 * std::exp(-x * x) * lossy_quadrature_symbol(a, t, x); };
  double q00 = 0.0, q01 = 0.0, q11 = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = breaks[i];
    const double hi = breaks[i + 1];
    // s_A is constant on pieces that do not straddle an endpoint of A.
    const double w = a.sign(0.5 * (lo + hi)) - c;
    const double k = integrate_smooth(integrand, lo, hi, 1e-13);
    q00 += k;
    q01 += w * k;
    q11 += w * w * k;
  }
  q << q00, q01 / s, q01 / s, q11 / (s * s);
  return q;
}

double xi_h_function(const BinningSet& a, double eta) {
  check_probability(eta, "efficiency eta");
  if (eta == 0.0) return 0.0;
  if (eta == 1.0) return 1.0;
  const BinningAngle th = binning_angle(a);

  struct Endpoint {
    HermiteStream stream;
    double sign;
    double phi0;
    double dphi0;
  };
  std::vector<Endpoint> ends;
  for (const auto& iv : a.intervals()) {
    if (std::isfinite(iv.hi)) ends.push_back({HermiteStream(iv.hi), +1.0, 0.0, 0.0});
    if (std::isfinite(iv.lo)) ends.push_back({HermiteStream(iv.lo), -1.0, 0.0, 0.0});
  }
  for (auto& e : ends) {
    e.phi0 = e.stream.value();
    e.dphi0 = e.stream.derivative();
  }

  constexpr int kMaxTerms = 1 << 25;
  const double r = 1.0 - eta;
  double remaining = 1.0;  // sum_{m > n} |c_m|^2
  double survive = 0.0;    // sum_{m <= n} |c_m|^2 r^m
  double rn = 1.0;
  for (int n = 1; n <= kMaxTerms; ++n) {
    double overlap = 0.0;
    for (auto& e : ends) {
      e.stream.advance();
      overlap += e.sign * (e.dphi0 * e.stream.value() - e.phi0 * e.stream.derivative()) / (2.0 * n);
    }
    const double w = std::pow(2.0 * overlap / th.sin_theta, 2);
    rn *= r;
    remaining -= w;
    survive += w * rn;
    if (std::max(remaining, 0.0) * rn < 1e-16) break;
  }
  // The unsummed tail contributes between 0 and remaining * r^{n+1}.
  survive += 0.5 * std::max(remaining, 0.0) * rn * r;
  return std::clamp(1.0 - survive, 0.0, 1.0);
}

Eigen::Matrix2d compressed_detector(const BinningSet& a, double eta) {
  const double h = xi_h_function(a, eta);
  Eigen::Matrix2d d;
  d << 1.0, 0.0, 0.0, 1.0 - 2.0 * h;
  return d;
}

SubspaceObservables subspace_observables(const BinningSet& a, double eta, double t) {
  check_probability(eta, "efficiency eta");
  check_probability(t, "transmittance t");
  SubspaceObservables o;
  o.angle = binning_angle(a);
  o.h = xi_h_function(a, eta * t);
  o.detector << 1.0, 0.0, 0.0, 1.0 - 2.0 * o.h;
  o.quadrature = compressed_lossy_quadrature(a, t);
  return o;
}

}  // namespace hybell
