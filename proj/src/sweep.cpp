#include "hybell/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>
#include <numeric>
#include <random>

#include "hybell/channels.hpp"
#include "hybell/checkpoint.hpp"
#include "hybell/errors.hpp"
#include "hybell/nelder_mead.hpp"
#include "hybell/special.hpp"

namespace hybell {

std::string to_string(StateFamily f) {
  switch (f) {
    case StateFamily::Xi: return "xi";
    case StateFamily::Cat: return "cat";
    case StateFamily::Hardy: return "hardy";
  }
  return "?";
}

StateFamily parse_state_family(const std::string& text) {
  if (text == "xi") return StateFamily::Xi;
  if (text == "cat") return StateFamily::Cat;
  if (text == "hardy") return StateFamily::Hardy;
  throw DomainError("state family must be one of xi, cat, hardy; got '" + text + "'");
}

std::string to_string(BinningMode m) {
  switch (m) {
    case BinningMode::Auto: return "auto";
    case BinningMode::Fixed: return "fixed";
    case BinningMode::OptimizeSymmetric: return "optimize-symmetric";
    case BinningMode::OptimizeHalfline: return "optimize-halfline";
  }
  return "?";
}

BinningMode parse_binning_mode(const std::string& text) {
  if (text == "auto") return BinningMode::Auto;
  if (text == "fixed") return BinningMode::Fixed;
  if (text == "optimize-symmetric") return BinningMode::OptimizeSymmetric;
  if (text == "optimize-halfline") return BinningMode::OptimizeHalfline;
  throw DomainError("binning mode must be one of auto, fixed, optimize-symmetric, optimize-halfline; got '" + text +
                    "'");
}

std::string to_string(Parameter p) { return p == Parameter::Eta ? "eta" : "t"; }

Parameter parse_parameter(const std::string& text) {
  if (text == "eta") return Parameter::Eta;
  if (text == "t") return Parameter::T;
  throw DomainError("parameter must be eta or t; got '" + text + "'");
}

void OptimizerConfig::validate() const {
  auto positive = [](int v, const char* name) {
    if (v < 2) throw DomainError(std::string(name) + " must be >= 2");
  };
  positive(gamma_points, "gamma grid points");
  positive(nu_points, "nu grid points");
  positive(alpha_points, "alpha grid points");
  positive(alpha_phase_points, "alpha phase grid points");
  positive(theta_points, "theta grid points");
  if (!(alpha_min >= 0.0 && alpha_max > alpha_min))
    throw DomainError("alpha range must satisfy 0 <= alpha_min < alpha_max");
  if (alpha_max * alpha_max > cat_n_max / 4.0)
    throw DomainError("cat truncation n_max = " + std::to_string(cat_n_max) + " needs |alpha|max <= sqrt(n_max/4)");
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be > 0");
  if (!(bisection_width > 0.0 && bisection_width < 1.0)) throw DomainError("bisection width must lie in (0, 1)");
  if (max_iterations < 1) throw DomainError("iteration cap must be >= 1");
  if (multistart < 1) throw DomainError("multistart must be >= 1");
  if (theta && !(*theta > 0.0 && *theta < kPi)) throw DomainError("theta must lie in (0, pi)");
}

// ---------------------------------------------------------------------------

CatEvaluator::CatEvaluator(const BinningSet& a, double eta, double t, int n_max)
    : n_max_(n_max), row_(n_max + 1), detect_(n_max + 1) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("efficiency eta outside [0, 1]");
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("transmittance t outside [0, 1]");
  const Eigen::VectorXd v = vacuum_overlaps(a, n_max);
  // Only the k = 0 Kraus term reaches <0|: <0|Lambda_t^+(Q)|n> = t^{n/2} <0|Q|n>.
  double p = 1.0;
  for (int n = 0; n <= n_max; ++n) {
    row_[n] = std::pow(t, 0.5 * n) * (2.0 * v[n] - (n == 0 ? 1.0 : 0.0));
    detect_[n] = 2.0 * p - 1.0;
    p *= 1.0 - eta * t;
  }
}

CatEvaluator::Terms CatEvaluator::terms(cplx alpha) const {
  const FockVector cat = even_cat_state(alpha, n_max_);
  Terms out;
  cplx q = 0.0;
  for (int n = 0; n <= n_max_; ++n) {
    out.d += std::norm(cat[n]) * detect_[n];
    q += row_[n] * cat[n];
  }
  out.q = q.real();
  return out;
}

double CatEvaluator::value(const Terms& tm, double nu, double* gamma_out) const {
  const double c = std::cos(nu);
  const double s = std::sin(nu);
  const double zd = c * c - s * s * tm.d;  // <sz (x) D>
  const double xq = 2.0 * c * s * tm.q;    // <sx (x) Q>
  if (gamma_out) *gamma_out = std::atan2(xq, zd);
  return 2.0 * std::hypot(zd, xq);
}

double CatEvaluator::value(cplx alpha, double nu, double* gamma_out) const {
  return value(terms(alpha), nu, gamma_out);
}

// ---------------------------------------------------------------------------

BinningMode resolve_binning_mode(Scenario scenario, StateFamily family, const OptimizerConfig& opt) {
  if (opt.binning_mode != BinningMode::Auto) return opt.binning_mode;
  if (opt.binning) return BinningMode::Fixed;
  if (scenario == Scenario::PhotonPhoton && family == StateFamily::Xi) return BinningMode::OptimizeSymmetric;
  if (family == StateFamily::Hardy) return opt.theta ? BinningMode::Fixed : BinningMode::OptimizeHalfline;
  return BinningMode::Fixed;
}

BinningSet default_binning(Scenario scenario, StateFamily family, const OptimizerConfig& opt) {
  if (opt.binning) return *opt.binning;
  if (family == StateFamily::Hardy)
    return BinningSet::halfline_for_angle(opt.theta.value_or(BinningAngle::golden().theta));
  if (scenario == Scenario::AtomPhoton) return BinningSet::symmetric(erf_inverse(0.5));
  if (opt.theta) return BinningSet::symmetric_for_angle(*opt.theta);
  return BinningSet::halfline(0.0);
}

namespace {

using Point = std::vector<double>;
using Evaluator = std::function<double(const Point&)>;

void check_family(Scenario scenario, StateFamily family) {
  if (scenario == Scenario::AtomPhoton && family == StateFamily::Hardy)
    throw DomainError("the hardy state family needs the photon-photon scenario");
  if (scenario == Scenario::PhotonPhoton && family == StateFamily::Cat)
    throw DomainError("the cat state family needs the atom-photon scenario");
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

// Cell centres of (0, pi): never hits the degenerate ends.
std::vector<double> theta_grid(int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[i] = kPi * (i + 0.5) / n;
  return v;
}

// A search problem: the grid is the product of `axes`; `prepare(x0)` does
// the work that depends only on the first coordinate and returns an evaluator
// of full points sharing that coordinate.
struct Objective {
  std::vector<std::vector<double>> axes;
  Box box;
  std::function<Evaluator(double)> prepare;
  std::function<ViolationParams(const Point&)> decode;
  std::function<std::optional<Point>(const ViolationParams&)> encode;

  std::size_t dims() const { return axes.size(); }
  double operator()(const Point& x) const { return prepare(x.empty() ? kNaN : x[0])(x); }
};

struct Scored {
  double value;
  Point x;
};

Point grid_point(const Objective& obj, std::size_t flat) {
  Point x(obj.dims());
  for (std::size_t d = obj.dims(); d-- > 0;) {
    const std::size_t n = obj.axes[d].size();
    x[d] = obj.axes[d][flat % n];
    flat /= n;
  }
  return x;
}

std::vector<double> scan_grid(const Objective& obj, bool serial) {
  const std::size_t outer = obj.axes[0].size();
  std::size_t inner = 1;
  for (std::size_t d = 1; d < obj.dims(); ++d) inner *= obj.axes[d].size();
  std::vector<double> values(outer * inner);
  auto row = [&](std::size_t i) {
    const Evaluator ev = obj.prepare(obj.axes[0][i]);
    for (std::size_t j = 0; j < inner; ++j) values[i * inner + j] = ev(grid_point(obj, i * inner + j));
  };
  if (serial) {
    for (std::size_t i = 0; i < outer; ++i) row(i);
  } else {
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t i = 0; i < outer; ++i) {
      try {
        row(i);
      } catch (...) {
#pragma omp critical(hybell_grid_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  }
  return values;
}

ViolationResult optimize(const Objective& obj, const OptimizerConfig& opt, const ViolationParams* warm) {
  ViolationResult res;
  if (obj.dims() == 0) {
    res.value = res.grid_best = obj({});
    res.params = obj.decode({});
    res.evaluations = 1;
    return res;
  }

  const std::vector<double> values = scan_grid(obj, opt.serial_grid);
  res.evaluations = static_cast<int>(values.size());
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  res.grid_best = values[order.front()];
  Scored best{res.grid_best, grid_point(obj, order.front())};

  std::vector<Point> starts;
  if (warm && obj.encode)
    if (auto x = obj.encode(*warm)) starts.push_back(std::move(*x));
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(-0.5, 0.5);
  const std::size_t picks = std::min<std::size_t>(static_cast<std::size_t>(opt.multistart), order.size());
  for (std::size_t k = 0; k < picks; ++k) {
    Point x = grid_point(obj, order[k]);
    if (k > 0) {
      // Later starts are jittered within their grid cell.
      for (std::size_t d = 0; d < x.size(); ++d) {
        const double cell = (obj.box.upper[d] - obj.box.lower[d]) / static_cast<double>(obj.axes[d].size() - 1);
        x[d] = std::clamp(x[d] + cell * unit(rng), obj.box.lower[d], obj.box.upper[d]);
      }
    }
    starts.push_back(std::move(x));
  }

  SimplexOptions so;
  so.max_iterations = opt.max_iterations;
  so.f_tolerance = opt.tolerance;
  so.initial_step = 0.02;
  bool any_converged = false;
  int iterations = 0;
  for (const auto& s : starts) {
    const SimplexResult r = maximize_simplex([&](const Point& x) { return obj(x); }, s, obj.box, so);
    res.evaluations += r.evaluations;
    iterations = std::max(iterations, r.iterations);
    any_converged = any_converged || r.converged;
    if (r.value > best.value) best = {r.value, r.x};
  }
  if (!any_converged)
    throw ConvergenceError("simplex refinement did not reach tolerance " + std::to_string(opt.tolerance) + " within " +
                           std::to_string(opt.max_iterations) + " iterations");
  res.value = best.value;
  res.params = obj.decode(best.x);
  return res;
}

BinningSet realize(BinningMode mode, double theta) {
  return mode == BinningMode::OptimizeSymmetric ? BinningSet::symmetric_for_angle(theta)
                                                : BinningSet::halfline_for_angle(theta);
}

bool optimizing(BinningMode m) { return m == BinningMode::OptimizeSymmetric || m == BinningMode::OptimizeHalfline; }

Objective subspace_objective(Scenario scenario, StateFamily family, double eta, double t,
                             const OptimizerConfig& opt, BinningMode mode) {
  const bool opt_binning = optimizing(mode);
  const bool with_gamma = scenario == Scenario::AtomPhoton;
  const double th_lo = kPi / (2.0 * opt.theta_points);
  const double th_hi = kPi - th_lo;

  // Value of one (binning, gamma) pair.
  auto value_at = [scenario, family](const SubspaceObservables& obs, double gamma) {
    const RestrictedBellOperator b = compressed_bell(scenario, gamma, obs);
    if (family == StateFamily::Hardy) return b.expectation(hardy_state(obs.angle));
    return b.max_eigenvalue();
  };

  Objective obj;
  std::shared_ptr<const SubspaceObservables> fixed_obs;
  BinningSet fixed_binning = default_binning(scenario, family, opt);
  if (opt_binning) {
    obj.axes.push_back(theta_grid(opt.theta_points));
    obj.box.lower.push_back(th_lo);
    obj.box.upper.push_back(th_hi);
  } else {
    fixed_obs = std::make_shared<SubspaceObservables>(subspace_observables(fixed_binning, eta, t));
  }
  if (with_gamma) {
    obj.axes.push_back(linspace(0.0, kPi / 2.0, opt.gamma_points));
    obj.box.lower.push_back(0.0);
    obj.box.upper.push_back(kPi / 2.0);
  }
  const std::size_t gamma_index = opt_binning ? 1 : 0;

  obj.prepare = [=](double x0) -> Evaluator {
    std::shared_ptr<const SubspaceObservables> obs = fixed_obs;
    if (opt_binning) obs = std::make_shared<SubspaceObservables>(subspace_observables(realize(mode, x0), eta, t));
    return [=](const Point& x) { return value_at(*obs, with_gamma ? x[gamma_index] : 0.0); };
  };
  obj.decode = [=](const Point& x) {
    ViolationParams p;
    p.binning = opt_binning ? realize(mode, x[0]) : fixed_binning;
    p.theta = binning_angle(p.binning).theta;
    if (with_gamma) p.gamma = x[gamma_index];
    return p;
  };
  obj.encode = [=](const ViolationParams& p) -> std::optional<Point> {
    Point x;
    if (opt_binning) {
      if (!std::isfinite(p.theta)) return std::nullopt;
      x.push_back(std::clamp(p.theta, th_lo, th_hi));
    }
    if (with_gamma) {
      if (!std::isfinite(p.gamma)) return std::nullopt;
      x.push_back(std::clamp(p.gamma, 0.0, kPi / 2.0));
    }
    return x;
  };
  return obj;
}

Objective cat_objective(double eta, double t, const OptimizerConfig& opt, BinningMode mode, int n_max) {
  const bool opt_binning = optimizing(mode);
  const bool complex_alpha = opt.alpha_mode == AlphaMode::Complex;
  const double th_lo = kPi / (2.0 * opt.theta_points);
  const double th_hi = kPi - th_lo;
  const BinningSet fixed_binning = default_binning(Scenario::AtomPhoton, StateFamily::Cat, opt);

  Objective obj;
  auto axis = [&](std::vector<double> grid, double lo, double hi) {
    obj.axes.push_back(std::move(grid));
    obj.box.lower.push_back(lo);
    obj.box.upper.push_back(hi);
  };
  if (opt_binning) axis(theta_grid(opt.theta_points), th_lo, th_hi);
  axis(linspace(opt.alpha_min, opt.alpha_max, opt.alpha_points), opt.alpha_min, opt.alpha_max);
  // cat(alpha) = cat(-alpha): the phase only needs [0, pi]. Imaginary mode is phase pi/2.
  if (complex_alpha) axis(linspace(0.0, kPi, opt.alpha_phase_points), 0.0, kPi);
  axis(linspace(0.0, kPi / 2.0, opt.nu_points), 0.0, kPi / 2.0);

  const std::size_t a0 = opt_binning ? 1 : 0;
  auto alpha_of = [=](const Point& x) {
    return std::polar(x[a0], complex_alpha ? x[a0 + 1] : kPi / 2.0);
  };
  const std::size_t nu_index = obj.axes.size() - 1;

  std::shared_ptr<const CatEvaluator> shared;
  if (!opt_binning) shared = std::make_shared<CatEvaluator>(fixed_binning, eta, t, n_max);

  obj.prepare = [=](double x0) -> Evaluator {
    auto ev = shared;
    if (opt_binning) ev = std::make_shared<CatEvaluator>(realize(mode, x0), eta, t, n_max);
    // Grid rows sweep nu fastest; reuse the cat terms while alpha is unchanged.
    auto cache = std::make_shared<std::pair<cplx, CatEvaluator::Terms>>(cplx(kNaN, kNaN), CatEvaluator::Terms{});
    return [=](const Point& x) {
      const cplx alpha = alpha_of(x);
      if (alpha != cache->first) *cache = {alpha, ev->terms(alpha)};
      return ev->value(cache->second, x[nu_index]);
    };
  };
  obj.decode = [=](const Point& x) {
    ViolationParams p;
    p.binning = opt_binning ? realize(mode, x[0]) : fixed_binning;
    p.theta = binning_angle(p.binning).theta;
    p.alpha = alpha_of(x);
    p.nu = x[nu_index];
    CatEvaluator(p.binning, eta, t, n_max).value(p.alpha, p.nu, &p.gamma);
    return p;
  };
  obj.encode = [=](const ViolationParams& p) -> std::optional<Point> {
    if (!std::isfinite(std::abs(p.alpha)) || !std::isfinite(p.nu)) return std::nullopt;
    Point x;
    if (opt_binning) {
      if (!std::isfinite(p.theta)) return std::nullopt;
      x.push_back(std::clamp(p.theta, th_lo, th_hi));
    }
    x.push_back(std::clamp(std::abs(p.alpha), opt.alpha_min, opt.alpha_max));
    if (complex_alpha) {
      double phase = std::arg(p.alpha);
      if (phase < 0.0) phase += kPi;
      x.push_back(std::clamp(phase, 0.0, kPi));
    }
    x.push_back(std::clamp(p.nu, 0.0, kPi / 2.0));
    return x;
  };
  return obj;
}

}  // namespace

ViolationResult maximize_violation(Scenario scenario, StateFamily family, double eta, double t,
                                   const OptimizerConfig& opt, const ViolationParams* warm) {
  check_family(scenario, family);
  opt.validate();
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("efficiency eta = " + std::to_string(eta) + " outside [0, 1]");
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("transmittance t = " + std::to_string(t) + " outside [0, 1]");
  const BinningMode mode = resolve_binning_mode(scenario, family, opt);

  if (family != StateFamily::Cat) {
    ViolationResult r = optimize(subspace_objective(scenario, family, eta, t, opt, mode), opt, warm);
    if (scenario == Scenario::PhotonPhoton && family == StateFamily::Xi) {
      const auto obs = subspace_observables(r.params.binning, eta, t);
      r.degenerate = max_eigenpair(compressed_bell(scenario, 0.0, obs).matrix).degenerate;
    }
    return r;
  }

  ViolationResult r = optimize(cat_objective(eta, t, opt, mode, opt.cat_n_max), opt, warm);
  // Convergence gate: the optimum must not move when the cutoff grows by half.
  const int wider = opt.cat_n_max + opt.cat_n_max / 2;
  const double check = CatEvaluator(r.params.binning, eta, t, wider).value(r.params.alpha, r.params.nu);
  r.truncation_weight = std::abs(check - r.value);
  if (r.truncation_weight > 1e-6)
    throw TruncationError("cat optimum changes by " + std::to_string(r.truncation_weight) + " between n_max = " +
                          std::to_string(opt.cat_n_max) + " and " + std::to_string(wider) + "; raise --nmax");
  return r;
}

CriticalPoint critical_parameter(Scenario scenario, StateFamily family, Parameter fixed, double fixed_value,
                                 const OptimizerConfig& opt, const ViolationParams* warm) {
  if (!(fixed_value >= 0.0 && fixed_value <= 1.0))
    throw DomainError(to_string(fixed) + " = " + std::to_string(fixed_value) + " outside [0, 1]");
  CriticalPoint cp;
  cp.fixed = fixed;
  cp.fixed_value = fixed_value;
  cp.swept = fixed == Parameter::Eta ? Parameter::T : Parameter::Eta;

  auto probe = [&](double s, const ViolationParams* start) {
    ++cp.probes;
    const double eta = fixed == Parameter::Eta ? fixed_value : s;
    const double t = fixed == Parameter::T ? fixed_value : s;
    return maximize_violation(scenario, family, eta, t, opt, start);
  };

  ViolationResult upper = probe(1.0, warm);
  if (!(upper.value > kViolationThreshold))
    throw NoViolationError("no violation even at " + to_string(cp.swept) + " = 1 with " + to_string(fixed) + " = " +
                           std::to_string(fixed_value) + " (best CHSH " + std::to_string(upper.value) + ")");
  ViolationResult last = probe(0.0, &upper.params);
  double lo = 0.0;
  double hi = 1.0;
  if (last.value > kViolationThreshold) {
    hi = 0.0;
    upper = last;
  }
  while (hi - lo > opt.bisection_width) {
    const double mid = 0.5 * (lo + hi);
    last = probe(mid, &last.params);
    if (last.value > kViolationThreshold) {
      hi = mid;
      upper = last;
    } else {
      lo = mid;
    }
  }
  cp.critical = hi;
  cp.lower = lo;
  cp.value = upper.value;
  cp.params = upper.params;
  cp.truncation_weight = upper.truncation_weight;
  return cp;
}

CurveResult curve_sweep(const CurveConfig& cfg, const std::function<void(int, const CurvePoint&)>& on_point) {
  if (cfg.grid.empty()) throw DomainError("curve grid is empty");
  for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
    if (!(cfg.grid[i] >= 0.0 && cfg.grid[i] <= 1.0))
      throw DomainError("curve grid value " + std::to_string(cfg.grid[i]) + " outside [0, 1]");
    if (i > 0 && !(cfg.grid[i] > cfg.grid[i - 1])) throw DomainError("curve grid must be strictly increasing");
  }
  check_family(cfg.scenario, cfg.family);
  cfg.opt.validate();

  CurveResult res;
  res.config = cfg;
  res.config_hash = config_hash(cfg);
  res.points.resize(cfg.grid.size());

  std::unique_ptr<CheckpointFile> ckpt;
  std::vector<int> pending;
  if (!cfg.checkpoint_path.empty()) ckpt = std::make_unique<CheckpointFile>(cfg.checkpoint_path, res.config_hash, to_json(cfg));
  for (int i = 0; i < static_cast<int>(cfg.grid.size()); ++i) {
    if (ckpt && ckpt->completed().count(i)) {
      res.points[i] = ckpt->completed().at(i);
    } else {
      pending.push_back(i);
    }
  }

  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t k = 0; k < pending.size(); ++k) {
    const int i = pending[k];
    CurvePoint pt;
    pt.grid_value = cfg.grid[i];
    try {
      pt.point = critical_parameter(cfg.scenario, cfg.family, cfg.grid_parameter, cfg.grid[i], cfg.opt);
    } catch (const NoViolationError& e) {
      pt.gap = e.what();
    } catch (...) {
#pragma omp critical(hybell_curve_failure)
      if (!failure) failure = std::current_exception();
      continue;
    }
#pragma omp critical(hybell_curve_writer)
    {
      res.points[i] = pt;
      if (ckpt) ckpt->append(i, pt);
      if (on_point) on_point(i, pt);
    }
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t i = 0; i < res.points.size(); ++i) {
    if (!res.points[i].point) continue;
    for (std::size_t j = i + 1; j < res.points.size(); ++j) {
      if (!res.points[j].point) continue;
      if (res.points[j].point->critical > res.points[i].point->critical + cfg.opt.bisection_width)
        res.monotonicity_violations.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  }
  return res;
}

std::vector<LowEtaRow> arbitrarily_low_eta_check(Scenario scenario, const std::vector<double>& etas,
                                                 const OptimizerConfig& opt) {
  std::vector<LowEtaRow> rows;
  for (double eta : etas) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("efficiency eta = " + std::to_string(eta) + " outside [0, 1]");
    LowEtaRow row;
    row.eta = eta;
    if (scenario == Scenario::AtomPhoton) {
      const BinningSet a = opt.binning.value_or(BinningSet::symmetric(erf_inverse(0.5)));
      const BinningAngle angle = binning_angle(a);
      if (std::abs(angle.cos_theta) > 1e-12)
        throw DomainError("the closed form assumes cos theta = 0; binning " + a.to_string() + " has " +
                          std::to_string(angle.cos_theta));
      row.theta = angle.theta;
      row.h = xi_h_function(a, eta);
      auto f = [&](const std::vector<double>& g) { return restricted_atom_photon(g[0], row.h, angle).max_eigenvalue(); };
      const auto grid = linspace(0.0, kPi / 2.0, opt.gamma_points);
      double g0 = 0.0, best = -1e300;
      for (double g : grid) {
        const double v = f({g});
        if (v > best) best = v, g0 = g;
      }
      SimplexOptions so;
      so.max_iterations = opt.max_iterations;
      so.f_tolerance = 1e-15;
      const auto r = maximize_simplex(f, {g0}, Box{{0.0}, {kPi / 2.0}}, so);
      row.gamma = r.value >= best ? r.x[0] : g0;
      row.value = f({row.gamma});
      row.closed_form = a_xi_expectation(row.gamma, row.h);
    } else {
      const double theta = opt.theta.value_or(BinningAngle::golden().theta);
      const BinningSet a = BinningSet::halfline_for_angle(theta);
      const BinningAngle angle = binning_angle(a);
      row.theta = angle.theta;
      row.h = xi_h_function(a, eta);
      row.value = restricted_photon_photon(angle, row.h).expectation(hardy_state(angle));
      row.closed_form = hardy_closed_form(angle, row.h);
    }
    row.margin = row.value - 2.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace hybell
