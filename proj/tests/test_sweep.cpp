#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <random>

#include "hybell/bell.hpp"
#include "hybell/errors.hpp"
#include "hybell/special.hpp"
#include "hybell/sweep.hpp"

using namespace hybell;

namespace {

double max_value(Scenario s, StateFamily f, double eta, double t, const OptimizerConfig& opt) {
  return maximize_violation(s, f, eta, t, opt).value;
}

}  // namespace

TEST_SUITE("sweep") {

TEST_CASE("cat evaluator equals the full Bell operator contraction") {
  const BinningSet a = BinningSet::symmetric(erf_inverse(0.5));
  const int n = 96;
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 12; ++i) {
    const double eta = 0.05 + 0.95 * u(rng), t = 0.3 + 0.7 * u(rng);
    const cplx alpha(0.5 * u(rng), 0.3 + 3.0 * u(rng));
    const double nu = kPi / 2 * u(rng);
    const CatEvaluator ev(a, eta, t, n);
    double gamma = 0.0;
    const double fast = ev.value(alpha, nu, &gamma);
    const double full = expectation(a_cat_state(alpha, nu, n), atom_photon_bell({Scenario::AtomPhoton, gamma, a, eta, t, n}));
    CHECK(fast == doctest::Approx(full).epsilon(1e-10));
    // gamma is the maximizer: nearby angles do no better.
    for (double d : {-1e-3, 1e-3}) {
      const double other = expectation(a_cat_state(alpha, nu, n),
                                       atom_photon_bell({Scenario::AtomPhoton, gamma + d, a, eta, t, n}));
      CHECK(other <= full + 1e-12);
    }
  }
}

TEST_CASE("cat family maximum at eta = t = 1") {
  const ViolationResult r = maximize_violation(Scenario::AtomPhoton, StateFamily::Cat, 1.0, 1.0, {});
  CHECK(r.value == doctest::Approx(2.60).epsilon(0.01 / 2.60));
  CHECK(std::abs(std::abs(r.params.alpha.imag()) - 2.20) <= 0.1);
  CHECK(r.value >= r.grid_best);
  CHECK(r.truncation_weight < 1e-6);
}

TEST_CASE("restricted Xi reaches 2 sqrt 2") {
  const ViolationResult r = maximize_violation(Scenario::AtomPhoton, StateFamily::Xi, 1.0, 1.0, {});
  CHECK(std::abs(r.value - kTsirelson) <= 1e-4);
}

TEST_CASE("Hardy family picks the golden binning") {
  const ViolationResult r = maximize_violation(Scenario::PhotonPhoton, StateFamily::Hardy, 1.0, 1.0, {});
  CHECK(std::abs(std::cos(r.params.theta / 2) - (std::sqrt(5.0) - 1) / 2) <= 1e-3);
  CHECK(r.value == doctest::Approx(2.3606798).epsilon(1e-7));
}

TEST_CASE("optimizer never returns less than its best grid point") {
  OptimizerConfig opt;
  opt.gamma_points = opt.nu_points = opt.alpha_points = opt.theta_points = 12;
  for (double eta : {0.2, 0.7})
    for (double t : {0.6, 1.0}) {
      for (auto [s, f] : {std::pair{Scenario::AtomPhoton, StateFamily::Cat}, std::pair{Scenario::AtomPhoton, StateFamily::Xi},
                          std::pair{Scenario::PhotonPhoton, StateFamily::Xi}, std::pair{Scenario::PhotonPhoton, StateFamily::Hardy}}) {
        const ViolationResult r = maximize_violation(s, f, eta, t, opt);
        CHECK(r.value >= r.grid_best);
      }
    }
}

TEST_CASE("same seed, same answer; serial and parallel grids agree bitwise") {
  OptimizerConfig opt;
  opt.alpha_mode = AlphaMode::Complex;
  opt.alpha_points = 24;
  opt.alpha_phase_points = 8;
  opt.seed = 77;
  const ViolationResult a = maximize_violation(Scenario::AtomPhoton, StateFamily::Cat, 0.7, 0.8, opt);
  const ViolationResult b = maximize_violation(Scenario::AtomPhoton, StateFamily::Cat, 0.7, 0.8, opt);
  CHECK(a.value == b.value);
  CHECK(a.params.alpha == b.params.alpha);
  opt.serial_grid = true;
  const ViolationResult c = maximize_violation(Scenario::AtomPhoton, StateFamily::Cat, 0.7, 0.8, opt);
  CHECK(a.value == c.value);
  CHECK(a.params.nu == c.params.nu);
  omp_set_num_threads(1);
  opt.serial_grid = false;
  const ViolationResult d = maximize_violation(Scenario::AtomPhoton, StateFamily::Cat, 0.7, 0.8, opt);
  omp_set_num_threads(omp_get_num_procs());
  CHECK(a.value == d.value);
}

TEST_CASE("critical efficiency: bracket invariant and the reported boundary") {
  OptimizerConfig opt;
  const CriticalPoint c = critical_parameter(Scenario::AtomPhoton, StateFamily::Cat, Parameter::T, 1.0, opt);
  CHECK(c.critical - c.lower <= opt.bisection_width);
  CHECK(max_value(Scenario::AtomPhoton, StateFamily::Cat, c.critical, 1.0, opt) > 2.0);
  CHECK(max_value(Scenario::AtomPhoton, StateFamily::Cat, c.lower, 1.0, opt) <= kViolationThreshold);
  CHECK(std::abs(c.value - 2.0) <= 2e-4);
  CHECK(std::abs(c.critical - 0.066) <= 0.005);
  CHECK(std::abs(std::abs(c.params.alpha.imag()) - 2.29) <= 0.15);
}

TEST_CASE("critical transmittance of the A_Xi state with the erfinv(1/2) binning") {
  OptimizerConfig opt;
  opt.binning = BinningSet::symmetric(erf_inverse(0.5));
  const CriticalPoint c = critical_parameter(Scenario::AtomPhoton, StateFamily::Xi, Parameter::Eta, 1.0, opt);
  CHECK(std::abs(c.critical - 0.55) <= 0.01);
  CHECK(std::abs(c.value - 2.0) <= 2e-4);
}

TEST_CASE("no crossing raises NoViolationError") {
  OptimizerConfig opt;
  opt.binning = BinningSet::symmetric(erf_inverse(0.5));
  CHECK_THROWS_AS(critical_parameter(Scenario::AtomPhoton, StateFamily::Xi, Parameter::T, 0.3, opt), NoViolationError);
}

TEST_CASE("curve: gaps, order and monotone trade-off") {
  CurveConfig cfg;
  cfg.family = StateFamily::Cat;
  cfg.grid = {0.0, 0.2, 0.5, 0.8, 1.0};
  int streamed = 0;
  const CurveResult r = curve_sweep(cfg, [&](int, const CurvePoint&) { ++streamed; });
  CHECK(streamed == 5);
  REQUIRE(r.points.size() == 5);
  CHECK(!r.points[0].point);  // eta = 0 never violates
  CHECK(!r.points[0].gap.empty());
  for (std::size_t i = 0; i < r.points.size(); ++i) CHECK(r.points[i].grid_value == cfg.grid[i]);
  CHECK(r.monotonicity_violations.empty());
  for (std::size_t i = 2; i < r.points.size(); ++i)
    CHECK(r.points[i].point->critical <= r.points[i - 1].point->critical + cfg.opt.bisection_width);
}

TEST_CASE("arbitrarily low efficiency, both scenarios") {
  const std::vector<double> etas{0.0, 1e-3, 1e-2, 1e-1};
  for (Scenario s : {Scenario::AtomPhoton, Scenario::PhotonPhoton}) {
    const auto rows = arbitrarily_low_eta_check(s, etas);
    REQUIRE(rows.size() == etas.size());
    CHECK(std::abs(rows[0].margin) <= 1e-9);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(rows[i].margin > 0.0);
      CHECK(std::abs(rows[i].value - rows[i].closed_form) <= 1e-9);
    }
  }
  // Hardy margin is the closed-form excess.
  const auto hardy = arbitrarily_low_eta_check(Scenario::PhotonPhoton, {1e-2});
  const BinningAngle g = BinningAngle::golden();
  const double c = std::cos(g.theta / 2), s = std::sin(g.theta / 2);
  CHECK(hardy[0].margin == doctest::Approx(hardy[0].h * hardy[0].h * 4 * c * c * std::pow(s, 4) / (1 + s * s)).epsilon(1e-9));
}

TEST_CASE("binning mode resolution") {
  OptimizerConfig opt;
  CHECK(resolve_binning_mode(Scenario::AtomPhoton, StateFamily::Cat, opt) == BinningMode::Fixed);
  CHECK(resolve_binning_mode(Scenario::PhotonPhoton, StateFamily::Xi, opt) == BinningMode::OptimizeSymmetric);
  CHECK(resolve_binning_mode(Scenario::PhotonPhoton, StateFamily::Hardy, opt) == BinningMode::OptimizeHalfline);
  opt.theta = 0.4;
  CHECK(resolve_binning_mode(Scenario::PhotonPhoton, StateFamily::Hardy, opt) == BinningMode::Fixed);
  CHECK(binning_angle(default_binning(Scenario::PhotonPhoton, StateFamily::Hardy, opt)).theta == doctest::Approx(0.4));
}

TEST_CASE("config validation and family/scenario mismatch") {
  OptimizerConfig opt;
  opt.tolerance = 0.0;
  CHECK_THROWS_AS(opt.validate(), DomainError);
  opt = {};
  opt.alpha_max = 10.0;  // needs n_max >= 400
  CHECK_THROWS_AS(opt.validate(), DomainError);
  CHECK_THROWS_AS(maximize_violation(Scenario::PhotonPhoton, StateFamily::Cat, 1, 1, {}), DomainError);
  CHECK_THROWS_AS(maximize_violation(Scenario::AtomPhoton, StateFamily::Hardy, 1, 1, {}), DomainError);
}

}
