#include "hybell/cli.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <boost/math/tools/minima.hpp>

#include "hybell/acceptance.hpp"
#include "hybell/bell.hpp"
#include "hybell/checkpoint.hpp"
#include "hybell/errors.hpp"
#include "hybell/special.hpp"

#ifndef HYBELL_VERSION
#define HYBELL_VERSION "unknown"
#endif

namespace hybell::cli {
namespace {

// Thrown for flag combinations CLI11 cannot express (exit 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::string scenario = "atom-photon";
  std::string state = "xi";
  double eta = 1.0;
  double t = 1.0;
  double gamma = kNaN;
  std::string theta;
  std::string binning;
  int nmax = 64;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out;
  bool json = false;
  std::string backend = "subspace";
  double alpha_im = kNaN;
  double alpha_re = 0.0;
  double nu = kNaN;
  std::string binning_mode = "auto";
  std::string alpha_mode = "imaginary";
  bool serial = false;
  // critical / curve
  std::string sweep = "t";
  std::string axis = "eta";
  std::string grid;
  std::string checkpoint;
  // selftest
  bool fast = false;
  double density = 1.0;

  const CLI::App* app = nullptr;
  bool given(const std::string& name) const { return app->get_option(name)->count() > 0; }
};

std::string g6(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json num(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

double parse_theta(const std::string& text) {
  if (text == "golden") return BinningAngle::golden().theta;
  double v = 0.0;
  std::size_t used = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size()) throw UsageError("--theta: expected a number in (0, pi) or 'golden', got '" + text + "'");
  if (!(v > 0.0 && v < kPi)) throw UsageError("--theta: " + text + " is outside the valid range (0, 3.14159)");
  return v;
}

std::optional<double> theta_flag(const Flags& f) {
  if (f.theta.empty()) return std::nullopt;
  return parse_theta(f.theta);
}

std::optional<BinningSet> binning_flag(const Flags& f) {
  if (f.binning.empty()) return std::nullopt;
  try {
    return BinningSet::parse(f.binning);
  } catch (const DomainError& e) {
    throw UsageError(std::string("--binning: ") + e.what());
  }
}

/// Sweep-level configuration shared by optimize, critical and curve.
OptimizerConfig optimizer_config(const Flags& f) {
  OptimizerConfig opt;
  opt.seed = f.seed;
  opt.alpha_mode = f.alpha_mode == "complex" ? AlphaMode::Complex : AlphaMode::Imaginary;
  opt.binning_mode = parse_binning_mode(f.binning_mode);
  opt.binning = binning_flag(f);
  opt.theta = theta_flag(f);
  if (f.given("--nmax")) opt.cat_n_max = f.nmax;
  opt.serial_grid = f.serial;
  if (opt.binning_mode == BinningMode::Fixed && !opt.binning && !opt.theta && f.state != "hardy")
    throw UsageError("--binning-mode fixed needs --binning or --theta");
  opt.validate();
  return opt;
}

StateFamily sweep_family(const Flags& f, Scenario scenario) {
  if (f.state == "optimal4d") return StateFamily::Xi;
  const StateFamily fam = parse_state_family(f.state);
  if (fam == StateFamily::Cat && scenario != Scenario::AtomPhoton)
    throw UsageError("--state cat is only defined for --scenario atom-photon");
  if (fam == StateFamily::Hardy && scenario != Scenario::PhotonPhoton)
    throw UsageError("--state hardy is only defined for --scenario photon-photon");
  return fam;
}

json manifest(const Flags& f, const std::vector<std::string>& argv, const json& config, double seconds) {
  return {{"version", HYBELL_VERSION},
          {"argv", argv},
          {"config", config},
          {"seed", f.seed},
          {"threads", omp_get_max_threads()},
          {"n_max", f.nmax},
          {"duration_seconds", seconds}};
}

json flags_json(const Flags& f) {
  json j = {{"scenario", f.scenario}, {"state", f.state},     {"eta", f.eta},
            {"t", f.t},               {"gamma", num(f.gamma)}, {"theta", f.theta},
            {"binning", f.binning},   {"nmax", f.nmax},       {"seed", f.seed},
            {"backend", f.backend},   {"alpha_im", num(f.alpha_im)},
            {"alpha_re", f.alpha_re}, {"nu", num(f.nu)},       {"binning_mode", f.binning_mode},
            {"alpha_mode", f.alpha_mode}};
  return j;
}

void emit(const Flags& f, std::ostream& out, const std::string& text) {
  out << text;
  if (!f.out.empty()) {
    std::ofstream file(f.out);
    if (!file) throw Error("cannot write '" + f.out + "'");
    file << text;
  }
}

// ---------------------------------------------------------------- expectation

struct ExpectationReport {
  double value = 0.0;
  double truncation_weight = 0.0;
  double gamma = kNaN;
  double theta = kNaN;
  double h = kNaN;
  std::string binning;
  std::string layout;
  std::vector<std::string> basis;
  CVector state;
};

/// gamma maximizing the closed form at fixed H.
double best_xi_gamma(double h) {
  auto neg = [h](double g) { return -a_xi_expectation(g, h); };
  return boost::math::tools::brent_find_minima(neg, 0.0, kPi / 2.0, 52).first;
}

ExpectationReport expectation_report(const Flags& f, const std::vector<std::string>& /*argv*/) {
  const Scenario scenario = parse_scenario(f.scenario);
  const bool fock = f.backend == "fock";
  ExpectationReport r;

  if (f.state == "cat") {
    if (scenario != Scenario::AtomPhoton) throw UsageError("--state cat is only defined for --scenario atom-photon");
    if (!f.given("--alpha-im")) throw UsageError("--state cat needs --alpha-im");
    if (!f.given("--nu")) throw UsageError("--state cat needs --nu");
    OptimizerConfig opt;
    opt.binning = binning_flag(f);
    opt.theta = theta_flag(f);
    const BinningSet a = opt.binning ? *opt.binning : default_binning(scenario, StateFamily::Cat, opt);
    const cplx alpha(f.alpha_re, f.alpha_im);
    double gamma = f.gamma;
    if (std::isnan(gamma)) CatEvaluator(a, f.eta, f.t, f.nmax).value(alpha, f.nu, &gamma);
    const HybridState psi = a_cat_state(alpha, f.nu, f.nmax);
    const BellOperator b = atom_photon_bell({scenario, gamma, a, f.eta, f.t, f.nmax});
    r.value = expectation(psi, b);
    r.truncation_weight = even_cat_state(alpha, f.nmax).truncation_weight();
    r.gamma = gamma;
    r.theta = binning_angle(a).theta;
    r.binning = a.to_string();
    r.layout = to_string(psi.layout());
    return r;
  }

  if (f.state == "hardy" && scenario != Scenario::PhotonPhoton)
    throw UsageError("--state hardy is only defined for --scenario photon-photon");
  if (f.state != "xi" && f.state != "hardy" && f.state != "optimal4d")
    throw UsageError("--state must be one of xi, cat, hardy, optimal4d");

  OptimizerConfig opt;
  opt.binning = binning_flag(f);
  opt.theta = theta_flag(f);
  const StateFamily fam = f.state == "hardy" ? StateFamily::Hardy : StateFamily::Xi;
  BinningSet a = default_binning(scenario, fam, opt);
  if (opt.binning) {
    a = *opt.binning;
  } else if (opt.theta) {
    a = scenario == Scenario::AtomPhoton || fam == StateFamily::Hardy ? BinningSet::halfline_for_angle(*opt.theta)
                                                                      : BinningSet::symmetric_for_angle(*opt.theta);
  }
  const SubspaceObservables obs = subspace_observables(a, f.eta, f.t);
  r.theta = obs.angle.theta;
  r.h = obs.h;
  r.binning = a.to_string();

  double gamma = 0.0;
  if (scenario == Scenario::AtomPhoton) gamma = std::isnan(f.gamma) ? best_xi_gamma(obs.h) : f.gamma;
  const RestrictedBellOperator compressed = compressed_bell(scenario, gamma, obs);

  std::optional<HybridState> psi4;
  if (f.state == "optimal4d") {
    EigenPair top = max_eigenpair(compressed.matrix);
    psi4.emplace(compressed.layout, top.vector);
  } else if (f.state == "hardy") {
    psi4.emplace(hardy_state(obs.angle));
  } else if (scenario == Scenario::AtomPhoton) {
    psi4.emplace(a_xi_state(gamma, obs.h));
  } else {
    psi4.emplace(p_xi_state(obs.angle, obs.h).state);
  }
  if (scenario == Scenario::AtomPhoton) r.gamma = gamma;
  r.layout = to_string(psi4->layout());
  r.basis = psi4->basis_labels();
  r.state = psi4->amplitudes();

  if (!fock) {
    r.value = expectation(*psi4, compressed);
    return r;
  }
  const FockVector xi = xi_state(a, f.nmax, 1.0);
  const HybridState full = embed(*psi4, xi);
  const ScenarioConfig sc{scenario, gamma, a, f.eta, f.t, f.nmax};
  r.value = expectation(full, scenario == Scenario::AtomPhoton ? atom_photon_bell(sc) : photon_photon_bell(sc));
  r.truncation_weight = xi.truncation_weight();
  return r;
}

int cmd_expectation(const Flags& f, const std::vector<std::string>& argv, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const ExpectationReport r = expectation_report(f, argv);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (f.json) {
    json state = json::array();
    for (Eigen::Index i = 0; i < r.state.size(); ++i) state.push_back({r.state[i].real(), r.state[i].imag()});
    json j = {{"command", "expectation"},
              {"chsh", r.value},
              {"margin", r.value - 2.0},
              {"truncation_weight", r.truncation_weight},
              {"gamma", num(r.gamma)},
              {"theta", num(r.theta)},
              {"h", num(r.h)},
              {"binning", r.binning},
              {"layout", r.layout},
              {"basis", r.basis},
              {"state", state},
              {"manifest", manifest(f, argv, flags_json(f), secs)}};
    emit(f, out, j.dump(2) + "\n");
    return kOk;
  }
  std::ostringstream s;
  s << "chsh              " << g6(r.value) << "\n"
    << "margin            " << g6(r.value - 2.0) << "\n"
    << "truncation_weight " << g6(r.truncation_weight) << "\n";
  if (!std::isnan(r.gamma)) s << "gamma             " << g6(r.gamma) << "\n";
  s << "theta             " << g6(r.theta) << "\n"
    << "binning           " << r.binning << "\n";
  emit(f, out, s.str());
  return kOk;
}

// ------------------------------------------------------------------ optimize

json params_summary(const ViolationParams& p) {
  json j = to_json(p);
  return j;
}

void params_text(std::ostream& s, const ViolationParams& p) {
  if (!std::isnan(p.gamma)) s << "gamma             " << g6(p.gamma) << "\n";
  if (!std::isnan(p.nu)) s << "nu                " << g6(p.nu) << "\n";
  if (!std::isnan(p.alpha.real()))
    s << "alpha             " << g6(p.alpha.real()) << (p.alpha.imag() < 0 ? " - " : " + ")
      << g6(std::abs(p.alpha.imag())) << "i\n";
  s << "theta             " << g6(p.theta) << "\n"
    << "binning           " << p.binning.to_string() << "\n";
}

int cmd_optimize(const Flags& f, const std::vector<std::string>& argv, std::ostream& out) {
  const Scenario scenario = parse_scenario(f.scenario);
  const StateFamily fam = sweep_family(f, scenario);
  const OptimizerConfig opt = optimizer_config(f);
  const auto start = std::chrono::steady_clock::now();
  const ViolationResult r = maximize_violation(scenario, fam, f.eta, f.t, opt);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (f.json) {
    json cfg = flags_json(f);
    cfg["optimizer"] = to_json(opt);
    json j = {{"command", "optimize"},
              {"chsh", r.value},
              {"margin", r.value - 2.0},
              {"grid_best", r.grid_best},
              {"truncation_weight", r.truncation_weight},
              {"degenerate", r.degenerate},
              {"evaluations", r.evaluations},
              {"params", params_summary(r.params)},
              {"manifest", manifest(f, argv, cfg, secs)}};
    emit(f, out, j.dump(2) + "\n");
    return kOk;
  }
  std::ostringstream s;
  s << "chsh              " << g6(r.value) << "\n"
    << "margin            " << g6(r.value - 2.0) << "\n"
    << "truncation_weight " << g6(r.truncation_weight) << "\n";
  params_text(s, r.params);
  emit(f, out, s.str());
  return kOk;
}

// ------------------------------------------------------------------ critical

int cmd_critical(const Flags& f, const std::vector<std::string>& argv, std::ostream& out) {
  const Scenario scenario = parse_scenario(f.scenario);
  const StateFamily fam = sweep_family(f, scenario);
  const OptimizerConfig opt = optimizer_config(f);
  const Parameter swept = parse_parameter(f.sweep);
  const Parameter fixed = swept == Parameter::T ? Parameter::Eta : Parameter::T;
  const double fixed_value = fixed == Parameter::Eta ? f.eta : f.t;
  const auto start = std::chrono::steady_clock::now();
  const CriticalPoint c = critical_parameter(scenario, fam, fixed, fixed_value, opt);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (f.json) {
    json cfg = flags_json(f);
    cfg["sweep"] = f.sweep;
    cfg["optimizer"] = to_json(opt);
    json j = {{"command", "critical"}, {"result", to_json(c)}, {"manifest", manifest(f, argv, cfg, secs)}};
    emit(f, out, j.dump(2) + "\n");
    return kOk;
  }
  std::ostringstream s;
  s << to_string(fixed) << " (fixed)         " << (fixed == Parameter::T ? " " : "") << g6(c.fixed_value) << "\n"
    << to_string(swept) << "*" << std::string(fixed == Parameter::T ? 16 : 14, ' ') << g6(c.critical) << "\n"
    << "bracket           [" << g6(c.lower) << ", " << g6(c.critical) << "]\n"
    << "chsh              " << g6(c.value) << "\n"
    << "probes            " << c.probes << "\n"
    << "truncation_weight " << g6(c.truncation_weight) << "\n";
  params_text(s, c.params);
  emit(f, out, s.str());
  return kOk;
}

// --------------------------------------------------------------------- curve

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw UsageError("--grid: cannot read '" + s + "' as a number");
    return v;
  };
  const std::string trimmed = CLI::detail::trim_copy(text);
  if (trimmed.empty()) return grid;
  if (trimmed.find(':') != std::string::npos) {
    const auto parts = CLI::detail::split(trimmed, ':');
    if (parts.size() != 3) throw UsageError("--grid: expected 'start:stop:count', got '" + text + "'");
    const double a = number(CLI::detail::trim_copy(parts[0]));
    const double b = number(CLI::detail::trim_copy(parts[1]));
    const double n = number(CLI::detail::trim_copy(parts[2]));
    if (n < 0 || n != std::floor(n)) throw UsageError("--grid: count must be a nonnegative integer");
    const int count = static_cast<int>(n);
    for (int i = 0; i < count; ++i) grid.push_back(count == 1 ? a : a + (b - a) * i / (count - 1));
  } else {
    for (const auto& p : CLI::detail::split(trimmed, ',')) grid.push_back(number(CLI::detail::trim_copy(p)));
  }
  for (double v : grid)
    if (!(v >= 0.0 && v <= 1.0)) throw UsageError("--grid: value " + g6(v) + " is outside the valid range [0, 1]");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw UsageError("--grid: values must be strictly increasing");
  return grid;
}

int cmd_curve(const Flags& f, const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  if (f.out.empty()) throw UsageError("curve needs --out <csv path>");
  CurveConfig cfg;
  cfg.scenario = parse_scenario(f.scenario);
  cfg.family = sweep_family(f, cfg.scenario);
  cfg.grid_parameter = parse_parameter(f.axis);
  cfg.grid = parse_grid(f.grid);
  if (cfg.grid.empty()) throw UsageError("--grid: the grid is empty");
  cfg.opt = optimizer_config(f);
  cfg.checkpoint_path = f.checkpoint;

  const auto start = std::chrono::steady_clock::now();
  const CurveResult r = curve_sweep(cfg, [&](int i, const CurvePoint& p) {
    if (f.json) return;
    err << "point " << i << " " << to_string(cfg.grid_parameter) << "=" << g6(p.grid_value) << " "
        << (p.point ? "critical=" + g6(p.point->critical) : "gap: " + p.gap) << "\n";
  });
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  {
    std::ofstream csv(f.out, std::ios::binary);
    if (!csv) throw Error("cannot write '" + f.out + "'");
    csv << curve_csv(r);
  }
  json cfg_json = to_json(cfg);
  cfg_json["checkpoint"] = f.checkpoint;
  json m = manifest(f, argv, cfg_json, secs);
  m["config_hash"] = r.config_hash;
  m["n_max"] = cfg.family == StateFamily::Cat ? cfg.opt.cat_n_max : 0;
  {
    std::ofstream side(f.out + ".manifest.json");
    if (!side) throw Error("cannot write '" + f.out + ".manifest.json'");
    side << m.dump(2) << "\n";
  }

  int gaps = 0;
  for (const auto& p : r.points) gaps += p.point ? 0 : 1;
  if (f.json) {
    json j = {{"command", "curve"},
              {"csv", f.out},
              {"points", r.points.size()},
              {"gaps", gaps},
              {"monotonicity_violations", r.monotonicity_violations},
              {"manifest", m}};
    out << j.dump(2) << "\n";
  } else {
    out << "wrote " << f.out << " (" << r.points.size() << " points, " << gaps << " gaps, "
        << r.monotonicity_violations.size() << " monotonicity violations)\n";
  }
  return kOk;
}

// ------------------------------------------------------------------ selftest

int cmd_selftest(const Flags& f, std::ostream& out) {
  AcceptanceOptions opt;
  opt.fast = f.fast;
  opt.density = f.density;
  opt.inject_fault = fault_injection_requested();
  const auto results = run_acceptance(opt, out);
  int failed = 0, skipped = 0;
  for (const auto& r : results) {
    failed += r.status == CriterionStatus::Fail;
    skipped += r.status == CriterionStatus::Skipped;
  }
  out << results.size() - failed - skipped << " passed, " << failed << " failed, " << skipped << " skipped\n";
  return failed ? kSelftestFailure : kOk;
}

}  // namespace

std::string curve_csv(const CurveResult& r) {
  std::ostringstream s;
  s << "eta,t_critical,chsh,alpha_im,nu,gamma,theta,trunc_weight\n";
  const bool eta_axis = r.config.grid_parameter == Parameter::Eta;
  const bool cat = r.config.family == StateFamily::Cat;
  const bool atom = r.config.scenario == Scenario::AtomPhoton;
  auto field = [](double v) { return std::isnan(v) ? std::string() : g17(v); };
  for (const auto& p : r.points) {
    if (!p.point) {
      // The grid coordinate is known; the critical one is not.
      s << (eta_axis ? g17(p.grid_value) : "") << "," << (eta_axis ? "" : g17(p.grid_value)) << ",,,,,,\n";
      continue;
    }
    const CriticalPoint& c = *p.point;
    const double eta = eta_axis ? c.fixed_value : c.critical;
    const double t = eta_axis ? c.critical : c.fixed_value;
    s << g17(eta) << "," << g17(t) << "," << field(c.value) << "," << (cat ? field(c.params.alpha.imag()) : "") << ","
      << (cat ? field(c.params.nu) : "") << "," << (atom ? field(c.params.gamma) : "") << "," << field(c.params.theta)
      << "," << (cat ? field(c.truncation_weight) : "") << "\n";
  }
  return s.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv, argv + argc);
  Flags f;
  CLI::App app{"Hybrid-measurement CHSH simulator", "hybell"};
  app.set_version_flag("--version", HYBELL_VERSION);
  app.set_config("--config", "", "key = value file; command-line flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  auto* scen = app.add_option("--scenario", f.scenario, "atom-photon | photon-photon")
                   ->check(CLI::IsMember({"atom-photon", "photon-photon"}));
  app.add_option("--state", f.state, "xi | cat | hardy | optimal4d")
      ->check(CLI::IsMember({"xi", "cat", "hardy", "optimal4d"}));
  app.add_option("--eta", f.eta, "detector efficiency")->check(CLI::Range(0.0, 1.0));
  app.add_option("--t", f.t, "line transmittance")->check(CLI::Range(0.0, 1.0));
  app.add_option("--gamma", f.gamma, "atom measurement angle (default: optimal)")->check(CLI::Range(-2 * kPi, 2 * kPi));
  app.add_option("--theta", f.theta, "binning angle in (0, pi), or 'golden'");
  app.add_option("--binning", f.binning, "sym:<a> | halfline:<x0> | set:[a,b];[c,d];...");
  app.add_option("--nmax", f.nmax, "Fock cutoff")->check(CLI::Range(1, 4096));
  app.add_option("--seed", f.seed, "multistart seed");
  app.add_option("--threads", f.threads, "worker cap (0: OpenMP default)")->check(CLI::Range(0, 1024));
  app.add_option("--out", f.out, "output file");
  app.add_flag("--json", f.json, "machine-readable output");
  app.add_option("--backend", f.backend, "subspace | fock")->check(CLI::IsMember({"subspace", "fock"}));
  app.add_option("--alpha-im", f.alpha_im, "Im alpha of the cat state")->check(CLI::Range(-10.0, 10.0));
  app.add_option("--alpha-re", f.alpha_re, "Re alpha of the cat state")->check(CLI::Range(-10.0, 10.0));
  app.add_option("--nu", f.nu, "cat mixing angle")->check(CLI::Range(-2 * kPi, 2 * kPi));
  app.add_option("--binning-mode", f.binning_mode, "auto | fixed | optimize-symmetric | optimize-halfline")
      ->check(CLI::IsMember({"auto", "fixed", "optimize-symmetric", "optimize-halfline"}));
  app.add_option("--alpha-mode", f.alpha_mode, "imaginary | complex")->check(CLI::IsMember({"imaginary", "complex"}));
  app.add_flag("--serial", f.serial, "single-threaded grid scans");
  (void)scen;

  auto* expectation = app.add_subcommand("expectation", "CHSH value of one state");
  auto* optimize = app.add_subcommand("optimize", "maximize the CHSH value over a state family");
  auto* critical = app.add_subcommand("critical", "critical efficiency or transmittance");
  critical->add_option("--sweep", f.sweep, "parameter to bisect: eta | t")->check(CLI::IsMember({"eta", "t"}));
  auto* curve = app.add_subcommand("curve", "critical line as CSV");
  curve->add_option("--axis", f.axis, "grid parameter held fixed per point: eta | t")
      ->check(CLI::IsMember({"eta", "t"}));
  curve->add_option("--grid", f.grid, "start:stop:count or a comma list")->required();
  curve->add_option("--checkpoint", f.checkpoint, "resumable checkpoint file");
  auto* selftest = app.add_subcommand("selftest", "run the acceptance criteria");
  selftest->add_flag("--fast", f.fast, "skip the two slowest curve criteria");
  selftest->add_option("--density", f.density, "grid density factor")->check(CLI::Range(0.1, 4.0));
  for (auto* sub : {expectation, optimize, critical, curve, selftest}) sub->fallthrough();
  f.app = &app;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kOk : kUsage;
  }

  if (f.threads > 0) omp_set_num_threads(f.threads);
  try {
    if (*expectation) return cmd_expectation(f, args, out);
    if (*optimize) return cmd_optimize(f, args, out);
    if (*critical) return cmd_critical(f, args, out);
    if (*curve) return cmd_curve(f, args, out, err);
    return cmd_selftest(f, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const CheckpointMismatchError& e) {
    err << "error: " << e.what() << "\n";
    return kCheckpointMismatch;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDomain;
  }
}

}  // namespace hybell::cli
