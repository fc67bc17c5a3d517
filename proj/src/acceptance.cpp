#include "hybell/acceptance.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "hybell/bell.hpp"
#include "hybell/channels.hpp"
#include "hybell/cli.hpp"
#include "hybell/errors.hpp"
#include "hybell/special.hpp"
#include "hybell/sweep.hpp"

namespace hybell {
namespace {

// Tolerances and targets, one block per criterion.
constexpr double kTsirelsonRestrictedTol = 1e-6;
constexpr double kTsirelsonFullTol = 1e-4;
constexpr double kCatMax = 2.60, kCatMaxTol = 0.01, kCatMaxAlpha = 2.20, kCatMaxAlphaTol = 0.1;
constexpr double kEtaStar = 0.066, kEtaStarTol = 0.005, kEtaStarAlpha = 2.29, kEtaStarAlphaTol = 0.15;
constexpr double kTStar = 0.52, kTStarTol = 0.01, kTStarAlpha = 2.87, kTStarAlphaTol = 0.15;
constexpr double kAXiT = 0.55, kAXiTTol = 0.01;
constexpr double kPXiT = 0.84, kPXiTTol = 0.01;
constexpr double kHardyLimit = 0.92, kHardyLimitTol = 0.01;
constexpr double kGoldenCosTol = 1e-3, kGoldenValue = 2.360680, kGoldenValueTol = 1e-4;
constexpr double kClosedFormTol = 1e-9;
constexpr double kDetectorCompositionTol = 1e-12, kSemigroupTol = 1e-10;
constexpr double kLocalBoundTol = 1e-9, kSpectrumTol = 1e-9, kEigenAgreementTol = 1e-10;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

OptimizerConfig scaled(double density) {
  OptimizerConfig o;
  auto thin = [density](int n) { return std::max(8, static_cast<int>(std::lround(n * density))); };
  o.gamma_points = thin(o.gamma_points);
  o.nu_points = thin(o.nu_points);
  o.alpha_points = thin(o.alpha_points);
  o.theta_points = thin(o.theta_points);
  return o;
}

// a + b N^-1/2 + c N^-1 through three truncations; the |Xi> tail weight
// decays like N^-1/2, so raw truncated values converge slowly.
double extrapolate(const std::array<int, 3>& n, const std::array<double, 3>& v) {
  Eigen::Matrix3d m;
  Eigen::Vector3d rhs;
  for (int i = 0; i < 3; ++i) {
    m(i, 0) = 1.0;
    m(i, 1) = 1.0 / std::sqrt(static_cast<double>(n[i]));
    m(i, 2) = 1.0 / n[i];
    rhs[i] = v[i];
  }
  return m.fullPivLu().solve(rhs)[0];
}

Outcome tsirelson(bool fault) {
  const double target = kTsirelson + (fault ? 1.0 : 0.0);
  const double restricted = restricted_atom_photon(kPi / 4, 1.0, BinningAngle::from_theta(kPi / 2)).max_eigenvalue();

  const BinningSet a = BinningSet::halfline(0.0);
  const std::array<int, 3> ns{256, 512, 1024};
  std::array<double, 3> full{};
  double weight = 0.0;
  for (int i = 0; i < 3; ++i) {
    const FockVector xi = xi_state(a, ns[i], 1.0);
    weight = xi.truncation_weight();
    ScenarioConfig cfg;
    cfg.gamma = kPi / 4;
    cfg.binning = a;
    cfg.n_max = ns[i];
    const BellOperator b = atom_photon_bell(cfg);
    CMatrix u = CMatrix::Zero(xi.dim(), 2);
    u(0, 0) = 1.0;
    u.col(1) = xi.amplitudes();
    full[i] = max_eigenpair(b.compress(CMatrix::Identity(2, 2), u)).value;
  }
  const double extrapolated = extrapolate(ns, full);
  Outcome o;
  o.pass = std::abs(restricted - target) <= kTsirelsonRestrictedTol && std::abs(extrapolated - target) <= kTsirelsonFullTol;
  o.detail = fmt("restricted %.12f (|d| %.1e <= %.0e); full space N=1024 %.6f (tail weight %.4f), "
                 "extrapolated in N %.7f (|d| %.1e <= %.0e)",
                 restricted, std::abs(restricted - target), kTsirelsonRestrictedTol, full[2], weight, extrapolated,
                 std::abs(extrapolated - target), kTsirelsonFullTol);
  return o;
}

Outcome cat_maximum(const OptimizerConfig& opt) {
  const ViolationResult r = maximize_violation(Scenario::AtomPhoton, StateFamily::Cat, 1.0, 1.0, opt);
  const double a = std::abs(r.params.alpha.imag());
  return {std::abs(r.value - kCatMax) <= kCatMaxTol && std::abs(a - kCatMaxAlpha) <= kCatMaxAlphaTol,
          fmt("max CHSH %.6f (target %.2f +- %.2f) at alpha = %.4fi (target %.2fi +- %.2f), nu %.4f", r.value, kCatMax,
              kCatMaxTol, a, kCatMaxAlpha, kCatMaxAlphaTol, r.params.nu)};
}

Outcome cat_critical(const OptimizerConfig& opt, Parameter fixed, double target, double tol, double alpha_target,
                     double alpha_tol) {
  const CriticalPoint c = critical_parameter(Scenario::AtomPhoton, StateFamily::Cat, fixed, 1.0, opt);
  const double a = std::abs(c.params.alpha.imag());
  const bool value_ok = std::abs(c.critical - target) <= tol;
  const bool alpha_ok = std::abs(a - alpha_target) <= alpha_tol;
  return {value_ok && alpha_ok,
          fmt("%s* = %.5f (target %.3f +- %.3f: %s) at alpha = %.4fi (target %.2fi +- %.2f: %s), CHSH %.6f",
              to_string(c.swept).c_str(), c.critical, target, tol, value_ok ? "ok" : "off", a, alpha_target, alpha_tol,
              alpha_ok ? "ok" : "off", c.value)};
}

Outcome subspace_critical(const OptimizerConfig& base, Scenario scenario, double target, double tol) {
  OptimizerConfig opt = base;
  if (scenario == Scenario::AtomPhoton) opt.binning = BinningSet::symmetric(erf_inverse(0.5));
  const CriticalPoint c = critical_parameter(scenario, StateFamily::Xi, Parameter::Eta, 1.0, opt);
  return {std::abs(c.critical - target) <= tol,
          fmt("t* = %.5f (target %.2f +- %.2f), binning %s, CHSH %.6f", c.critical, target, tol,
              c.params.binning.to_string().c_str(), c.value)};
}

Outcome hardy_limit(const OptimizerConfig& base) {
  std::vector<double> crit;
  std::string detail;
  for (double theta : {0.2, 0.1, 0.05}) {
    OptimizerConfig opt = base;
    opt.theta = theta;
    const CriticalPoint c = critical_parameter(Scenario::PhotonPhoton, StateFamily::Hardy, Parameter::Eta, 1.0, opt);
    crit.push_back(c.critical);
    detail += fmt("theta %.2f -> t* %.5f; ", theta, c.critical);
  }
  const bool increasing = crit[0] < crit[1] && crit[1] < crit[2];
  const bool value_ok = std::abs(crit[2] - kHardyLimit) <= kHardyLimitTol;
  detail += fmt("monotone toward the limit: %s; t*(0.05) vs %.2f +- %.2f: %s", increasing ? "yes" : "no", kHardyLimit,
                kHardyLimitTol, value_ok ? "ok" : "off");
  return {increasing && value_ok, detail};
}

Outcome golden(const OptimizerConfig& opt) {
  const ViolationResult r = maximize_violation(Scenario::PhotonPhoton, StateFamily::Hardy, 1.0, 1.0, opt);
  const double c = std::cos(0.5 * r.params.theta);
  const double golden_cos = (std::sqrt(5.0) - 1.0) / 2.0;
  const double closed = hardy_closed_form(BinningAngle::from_theta(r.params.theta), 1.0);
  return {std::abs(c - golden_cos) <= kGoldenCosTol && std::abs(r.value - kGoldenValue) <= kGoldenValueTol,
          fmt("argmax cos(theta/2) = %.6f (|d| %.1e <= %.0e), max %.7f (closed form %.7f; target %.6f +- %.0e)", c,
              std::abs(c - golden_cos), kGoldenCosTol, r.value, closed, kGoldenValue, kGoldenValueTol)};
}

Outcome low_eta(const OptimizerConfig& opt) {
  const std::vector<double> etas{1e-1, 1e-2, 1e-3};
  bool ok = true;
  std::string detail;
  for (Scenario s : {Scenario::AtomPhoton, Scenario::PhotonPhoton}) {
    for (const LowEtaRow& r : arbitrarily_low_eta_check(s, etas, opt)) {
      const double diff = std::abs(r.value - r.closed_form);
      ok = ok && r.margin > 0.0 && diff <= kClosedFormTol;
      detail += fmt("%s eta %.0e margin %.3e (closed-form |d| %.1e); ",
                    s == Scenario::AtomPhoton ? "A" : "P_H", r.eta, r.margin, diff);
    }
  }
  return {ok, detail};
}

Outcome channel_identities() {
  const int n_max = 48;
  const std::vector<double> grid{0.1, 0.4, 0.7, 1.0};
  double worst_detector = 0.0;
  for (double eta : grid) {
    for (double t : grid) {
      const CMatrix lhs = adjoint_on_observable(LossChannel(t, n_max), detector_observable(eta, n_max)).matrix();
      const CMatrix rhs = detector_observable(eta * t, n_max).matrix();
      worst_detector = std::max(worst_detector, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  }
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  double worst_semigroup = 0.0;
  for (auto [t1, t2] : std::vector<std::pair<double, double>>{{0.3, 0.8}, {0.55, 0.9}, {0.95, 0.2}}) {
    CMatrix m(n_max + 1, n_max + 1);
    for (int i = 0; i <= n_max; ++i)
      for (int j = 0; j <= n_max; ++j) m(i, j) = cplx(normal(rng), normal(rng));
    const FockOperator h(CMatrix(0.5 * (m + m.adjoint())));
    const FockOperator twice = adjoint_on_observable(LossChannel(t1, n_max), adjoint_on_observable(LossChannel(t2, n_max), h));
    const FockOperator once = adjoint_on_observable(LossChannel(t1 * t2, n_max), h);
    worst_semigroup = std::max(worst_semigroup, (twice.matrix() - once.matrix()).cwiseAbs().maxCoeff());
  }
  return {worst_detector <= kDetectorCompositionTol && worst_semigroup <= kSemigroupTol,
          fmt("max |Lambda_t^+(D_eta) - D_eta t| = %.1e (<= %.0e) over 4x4 grid; max semigroup defect %.1e (<= %.0e)",
              worst_detector, kDetectorCompositionTol, worst_semigroup, kSemigroupTol)};
}

Outcome properties() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal;
  auto random_qubit = [&] {
    Eigen::Vector2cd v(cplx(normal(rng), normal(rng)), cplx(normal(rng), normal(rng)));
    return Eigen::Vector2cd(v.normalized());
  };

  // Local bound over product states.
  double worst_local = -1e300;
  for (int i = 0; i < 1000; ++i) {
    const double theta = kPi * unit(rng);
    const RestrictedBellOperator b = i % 2 == 0 ? restricted_atom_photon(kPi / 2 * unit(rng), 1.0, BinningAngle::from_theta(theta))
                                                : restricted_photon_photon(BinningAngle::from_theta(theta), 1.0);
    const Eigen::Vector2cd x = random_qubit();
    const Eigen::Vector2cd y = random_qubit();
    CVector psi(4);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) psi[2 * r + c] = x[r] * y[c];
    worst_local = std::max(worst_local, b.expectation(HybridState(b.layout, psi)));
  }

  // Spectra of every effective observable.
  double worst_spectrum = 0.0;
  auto spectrum = [&](const CMatrix& m) {
    const Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
    worst_spectrum = std::max(worst_spectrum, es.eigenvalues().cwiseAbs().maxCoeff() - 1.0);
  };
  const int n_max = 48;
  for (int i = 0; i < 20; ++i) {
    const double eta = unit(rng), t = 0.05 + 0.95 * unit(rng);
    const double a = 0.1 + 2.0 * unit(rng);
    const BinningSet bin = i % 2 ? BinningSet::symmetric(a) : BinningSet::halfline(a - 1.0);
    spectrum(detector_observable(eta * t, n_max).matrix());
    spectrum(lossy_quadrature(bin, t, n_max).matrix());
    const SubspaceObservables obs = subspace_observables(bin, eta, t);
    spectrum(obs.detector.cast<cplx>());
    spectrum(obs.quadrature.cast<cplx>());
    spectrum(restricted_quadrature(obs.angle).matrix());
  }

  // Closed forms against the eigensolver / direct contraction.
  double worst_agreement = 0.0;
  const BinningAngle right = BinningAngle::from_theta(kPi / 2);
  for (int i = 0; i < 100; ++i) {
    const double gamma = kPi / 2 * unit(rng);
    const double h = unit(rng);
    worst_agreement = std::max(worst_agreement, std::abs(a_xi_expectation(gamma, h) -
                                                         restricted_atom_photon(gamma, h, right).max_eigenvalue()));
    const BinningAngle th = BinningAngle::from_theta(0.01 + (kPi - 0.02) * unit(rng));
    worst_agreement = std::max(worst_agreement, std::abs(hardy_closed_form(th, h) -
                                                         restricted_photon_photon(th, h).expectation(hardy_state(th))));
  }

  return {worst_local <= 2.0 + kLocalBoundTol && worst_spectrum <= kSpectrumTol && worst_agreement <= kEigenAgreementTol,
          fmt("max product-state CHSH %.12f (<= 2 + %.0e); max |eigenvalue| - 1 = %.1e (<= %.0e); "
              "closed form vs eigensolver %.1e (<= %.0e)",
              worst_local, kLocalBoundTol, worst_spectrum, kSpectrumTol, worst_agreement, kEigenAgreementTol)};
}

Outcome determinism(const OptimizerConfig& opt) {
  CurveConfig cfg;
  cfg.scenario = Scenario::AtomPhoton;
  cfg.family = StateFamily::Cat;
  cfg.grid_parameter = Parameter::Eta;
  cfg.grid = {0.3, 0.6, 1.0};
  cfg.opt = opt;
  const int threads = omp_get_max_threads();
  const std::string first = cli::curve_csv(curve_sweep(cfg));
  omp_set_num_threads(std::max(2, threads));
  const std::string second = cli::curve_csv(curve_sweep(cfg));
  omp_set_num_threads(threads);
  return {first == second && !first.empty(),
          fmt("two curve runs (%d and %d threads) -> %zu and %zu bytes, %s", threads, std::max(2, threads), first.size(),
              second.size(), first == second ? "byte-identical" : "DIFFERENT")};
}

}  // namespace

bool fault_injection_requested() {
  const char* v = std::getenv("HYBELL_SELFTEST_FAULT");
  return v && *v && std::string(v) != "0";
}

std::string format_result(const CriterionResult& r) {
  const char* tag = r.status == CriterionStatus::Pass ? "PASS" : r.status == CriterionStatus::Fail ? "FAIL" : "SKIPPED";
  return fmt("[%-7s] %2d %-28s %7.2f s  %s%s", tag, r.id, r.name.c_str(), r.seconds, r.detail.c_str(),
             r.known_gap && r.status == CriterionStatus::Fail ? "  (known gap, see notes)" : "");
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt, std::ostream& log) {
  const OptimizerConfig base = scaled(opt.density);
  struct Criterion {
    int id;
    const char* name;
    bool slow_curve;
    bool known_gap;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "tsirelson-recovery", false, false, [&] { return tsirelson(opt.inject_fault); }},
      {2, "cat-maximum", false, false, [&] { return cat_maximum(base); }},
      {3, "cat-critical-efficiency", false, false,
       [&] { return cat_critical(base, Parameter::T, kEtaStar, kEtaStarTol, kEtaStarAlpha, kEtaStarAlphaTol); }},
      {4, "cat-critical-transmittance", false, true,
       [&] { return cat_critical(base, Parameter::Eta, kTStar, kTStarTol, kTStarAlpha, kTStarAlphaTol); }},
      {5, "a-xi-critical-transmittance", false, false,
       [&] { return subspace_critical(base, Scenario::AtomPhoton, kAXiT, kAXiTTol); }},
      {6, "p-xi-critical-transmittance", true, false,
       [&] { return subspace_critical(base, Scenario::PhotonPhoton, kPXiT, kPXiTTol); }},
      {7, "hardy-limit", true, true, [&] { return hardy_limit(base); }},
      {8, "golden-ratio-binning", false, false, [&] { return golden(base); }},
      {9, "arbitrarily-low-efficiency", false, false, [&] { return low_eta(base); }},
      {10, "channel-consistency", false, false, [] { return channel_identities(); }},
      {11, "property-suites", false, false, [] { return properties(); }},
      {12, "curve-determinism", false, false, [&] { return determinism(base); }},
  };

  std::vector<CriterionResult> results;
  for (const auto& c : criteria) {
    CriterionResult r;
    r.id = c.id;
    r.name = c.name;
    r.known_gap = c.known_gap;
    if (opt.fast && c.slow_curve) {
      r.status = CriterionStatus::Skipped;
      r.detail = "skipped by --fast";
    } else {
      const auto start = std::chrono::steady_clock::now();
      try {
        const Outcome o = c.run();
        r.status = o.pass ? CriterionStatus::Pass : CriterionStatus::Fail;
        r.detail = o.detail;
      } catch (const std::exception& e) {
        r.status = CriterionStatus::Fail;
        r.detail = std::string("error: ") + e.what();
      }
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    log << format_result(r) << std::endl;
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace hybell
