#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hybell/bell.hpp"
#include "hybell/binning.hpp"

namespace hybell {

/// Xi: the best state of the {|0>, |Xi>} subspace (|A_Xi> or |P_Xi>).
/// Cat: cos nu |g,0> + sin nu |s,cat(alpha)>. Hardy: |P_H> for the binning angle.
enum class StateFamily { Xi, Cat, Hardy };

std::string to_string(StateFamily f);
StateFamily parse_state_family(const std::string& text);

/// Auto picks per family: fixed sym:erfinv(1/2) for atom-photon, optimized
/// symmetric interval for |P_Xi>, optimized half-line for Hardy (fixed when
/// a theta is given).
enum class BinningMode { Auto, Fixed, OptimizeSymmetric, OptimizeHalfline };

std::string to_string(BinningMode m);
BinningMode parse_binning_mode(const std::string& text);

enum class AlphaMode { Imaginary, Complex };

enum class Parameter { Eta, T };
std::string to_string(Parameter p);
Parameter parse_parameter(const std::string& text);

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Anything counts as a violation only above this.
inline constexpr double kViolationThreshold = 2.0 + 1e-10;

struct OptimizerConfig {
  int gamma_points = 64;
  int nu_points = 64;
  int alpha_points = 96;
  int alpha_phase_points = 24;  // complex mode only
  int theta_points = 128;
  double alpha_min = 0.2;
  double alpha_max = 4.0;
  int max_iterations = 2000;
  double tolerance = 1e-7;
  std::uint64_t seed = 1;
  int multistart = 5;
  AlphaMode alpha_mode = AlphaMode::Imaginary;
  BinningMode binning_mode = BinningMode::Auto;
  std::optional<BinningSet> binning;  // used by BinningMode::Fixed
  std::optional<double> theta;        // Hardy: fixes the binning angle
  int cat_n_max = 128;
  double bisection_width = 1e-4;
  bool serial_grid = false;  // single-threaded reference grid scan

  void validate() const;
};

struct ViolationParams {
  double gamma = kNaN;
  double nu = kNaN;
  cplx alpha{kNaN, kNaN};
  double theta = kNaN;
  BinningSet binning = BinningSet::halfline(0.0);
};

struct ViolationResult {
  double value = 0.0;
  double grid_best = 0.0;
  ViolationParams params;
  /// Cat family: |value(N) - value(1.5 N)|; 0 for the exact subspace families.
  double truncation_weight = 0.0;
  bool degenerate = false;
  int evaluations = 0;
};

/// One-mode cat observables, evaluated on the truncated Fock space.
///
/// d = <cat|D_{eta t}|cat>, q = Re <0|Lambda_t^+(Q)|cat>. For the family
/// cos nu |g,0> + sin nu |s,cat> the atom angle enters only through
/// 2 cos g <sz (x) D> + 2 sin g <sx (x) Q>, so the best gamma is closed form.
class CatEvaluator {
 public:
  CatEvaluator(const BinningSet& a, double eta, double t, int n_max);

  struct Terms {
    double d = 0.0;
    double q = 0.0;
  };
  Terms terms(cplx alpha) const;
  /// max over gamma; `gamma_out` receives the maximizer.
  double value(cplx alpha, double nu, double* gamma_out = nullptr) const;
  double value(const Terms& terms, double nu, double* gamma_out = nullptr) const;

 private:
  int n_max_;
  Eigen::VectorXd row_;     // <0|Lambda_t^+(Q)|n>
  Eigen::VectorXd detect_;  // <n|D_{eta t}|n>
};

/// Grid search followed by multistart simplex refinement. `warm` adds the
/// given parameters as an extra start. Throws ConvergenceError when no simplex
/// run converges within the iteration cap.
ViolationResult maximize_violation(Scenario scenario, StateFamily family, double eta, double t,
                                   const OptimizerConfig& opt, const ViolationParams* warm = nullptr);

struct CriticalPoint {
  Parameter fixed = Parameter::Eta;
  double fixed_value = 1.0;
  Parameter swept = Parameter::T;
  double critical = kNaN;  // upper end of the final bracket (a violating probe)
  double lower = kNaN;     // last non-violating probe
  double value = kNaN;     // maximized CHSH at `critical`
  ViolationParams params;
  double truncation_weight = 0.0;
  int probes = 0;
};

/// Bisection on the swept parameter over [0, 1] until the bracket is narrower
/// than opt.bisection_width. Throws NoViolationError when the swept parameter
/// at 1 gives no violation.
CriticalPoint critical_parameter(Scenario scenario, StateFamily family, Parameter fixed, double fixed_value,
                                 const OptimizerConfig& opt, const ViolationParams* warm = nullptr);

struct CurveConfig {
  Scenario scenario = Scenario::AtomPhoton;
  StateFamily family = StateFamily::Cat;
  Parameter grid_parameter = Parameter::Eta;  // held fixed per point; the other one is bisected
  std::vector<double> grid;
  OptimizerConfig opt;
  std::string checkpoint_path;  // empty: no checkpoint
};

struct CurvePoint {
  double grid_value = kNaN;
  std::optional<CriticalPoint> point;
  std::string gap;  // reason when there is no crossing
};

struct CurveResult {
  CurveConfig config;
  std::vector<CurvePoint> points;  // grid order
  /// Pairs (i, j) of points that break "critical value nonincreasing along the grid".
  std::vector<std::pair<int, int>> monotonicity_violations;
  std::string config_hash;
};

/// One critical point per grid value, computed in parallel. Completed points
/// are appended to the checkpoint (if any) and passed to `on_point`, both from
/// a single writer. A matching checkpoint is resumed; a mismatched one throws
/// CheckpointMismatchError.
CurveResult curve_sweep(const CurveConfig& cfg, const std::function<void(int, const CurvePoint&)>& on_point = {});

struct LowEtaRow {
  double eta = 0.0;
  double gamma = kNaN;  // atom-photon only
  double theta = kNaN;
  double h = 0.0;
  double value = 0.0;        // eigensolver / full contraction
  double closed_form = 0.0;  // formula at the same parameters
  double margin = 0.0;       // value - 2
};

/// At t = 1: atom-photon maximizes the restricted operator over gamma with a
/// cos theta = 0 binning (sym:erfinv(1/2) unless opt.binning is set);
/// photon-photon evaluates |P_H> at opt.theta (golden angle by default).
std::vector<LowEtaRow> arbitrarily_low_eta_check(Scenario scenario, const std::vector<double>& etas,
                                                 const OptimizerConfig& opt = {});

/// The binning a family uses when none is optimized.
BinningSet default_binning(Scenario scenario, StateFamily family, const OptimizerConfig& opt);
BinningMode resolve_binning_mode(Scenario scenario, StateFamily family, const OptimizerConfig& opt);

}  // namespace hybell
