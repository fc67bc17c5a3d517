#include "hybell/binning.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "hybell/errors.hpp"
#include "hybell/special.hpp"

namespace hybell {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_number(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_number(std::string_view s) {
  if (s == "inf" || s == "+inf") return kInf;
  if (s == "-inf") return -kInf;
  if (s.starts_with("erfinv(") && s.ends_with(")")) {
    const double y = parse_number(s.substr(7, s.size() - 8));
    if (!(y > -1.0 && y < 1.0)) throw DomainError("binning: erfinv argument must lie in (-1, 1)");
    return erf_inverse(y);
  }
  if (s.starts_with("-erfinv(")) return -parse_number(s.substr(1));
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw DomainError("binning: cannot parse number '" + std::string(s) + "'");
  if (!std::isfinite(v)) throw DomainError("binning: use 'inf' for infinite endpoints");
  return v;
}

// F_n(x) = int_{-inf}^x phi_n^2 for n = 0..n_max.
std::vector<double> cumulative_squares(const HermiteTable& t) {
  const std::size_t n_max = t.value.size() - 1;
  std::vector<double> f(n_max + 1);
  f[0] = 0.5 * std::erfc(-t.x);
  for (std::size_t n = 1; n <= n_max; ++n)
    f[n] = f[n - 1] - t.value[n] * t.value[n - 1] / std::sqrt(2.0 * static_cast<double>(n));
  return f;
}

// Adds sign * (antiderivative of phi_m phi_n evaluated at t.x) to `out`.
void add_endpoint(Eigen::MatrixXd& out, const HermiteTable& t, double sign) {
  const int n_max = static_cast<int>(out.rows()) - 1;
  const auto f = cumulative_squares(t);
  for (int m = 0; m <= n_max; ++m) {
    out(m, m) += sign * f[m];
    for (int n = m + 1; n <= n_max; ++n) {
      const double w = t.derivative[m] * t.value[n] - t.value[m] * t.derivative[n];
      const double v = sign * w / (2.0 * (n - m));
      out(m, n) += v;
      out(n, m) += v;
    }
  }
}

}  // namespace

BinningSet::BinningSet(std::vector<Interval> intervals) {
  for (const auto& iv : intervals) {
    if (std::isnan(iv.lo) || std::isnan(iv.hi) || !(iv.lo < iv.hi))
      throw DomainError("binning: every interval needs lo < hi");
  }
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (const auto& iv : intervals) {
    if (!intervals_.empty() && iv.lo <= intervals_.back().hi) {
      if (iv.lo < intervals_.back().hi) throw DomainError("binning: intervals overlap");
      intervals_.back().hi = iv.hi;  // touching intervals merge
      continue;
    }
    intervals_.push_back(iv);
  }
}

BinningSet BinningSet::full_line() { return BinningSet({Interval{}}); }
BinningSet BinningSet::empty() { return BinningSet(std::vector<Interval>{}); }

BinningSet BinningSet::symmetric(double half_width) {
  if (!(half_width > 0.0)) throw DomainError("binning: symmetric half-width must be > 0");
  return BinningSet({Interval{-half_width, half_width}});
}

BinningSet BinningSet::halfline(double x0) {
  if (!std::isfinite(x0)) throw DomainError("binning: half-line start must be finite");
  return BinningSet({Interval{x0, kInf}});
}

BinningSet BinningSet::halfline_for_angle(double theta) {
  if (!(theta > 0.0 && theta < kPi)) throw DomainError("binning: theta must lie in (0, pi)");
  return halfline(erf_inverse(-std::cos(theta)));
}

BinningSet BinningSet::symmetric_for_angle(double theta) {
  if (!(theta > 0.0 && theta < kPi)) throw DomainError("binning: theta must lie in (0, pi)");
  return symmetric(erf_inverse(0.5 * (1.0 + std::cos(theta))));
}

BinningSet BinningSet::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  std::string_view v(s);
  if (v.starts_with("sym:")) return symmetric(parse_number(v.substr(4)));
  if (v.starts_with("halfline:")) return halfline(parse_number(v.substr(9)));
  if (v.starts_with("set:")) {
    v.remove_prefix(4);
    std::vector<Interval> out;
    while (!v.empty()) {
      if (v.front() != '[') throw DomainError("binning: expected '[' in set: grammar");
      const auto close = v.find(']');
      if (close == std::string_view::npos) throw DomainError("binning: missing ']'");
      const auto body = v.substr(1, close - 1);
      const auto comma = body.find(',');
      if (comma == std::string_view::npos) throw DomainError("binning: interval needs 'a,b'");
      out.push_back(Interval{parse_number(body.substr(0, comma)), parse_number(body.substr(comma + 1))});
      v.remove_prefix(close + 1);
      if (!v.empty()) {
        if (v.front() != ';') throw DomainError("binning: intervals are separated by ';'");
        v.remove_prefix(1);
      }
    }
    if (out.empty()) throw DomainError("binning: set: needs at least one interval");
    return BinningSet(std::move(out));
  }
  throw DomainError("binning: expected sym:<a>, halfline:<x0> or set:[a,b];... but got '" +
                    std::string(text) + "'");
}

bool BinningSet::contains(double x) const {
  for (const auto& iv : intervals_)
    if (x >= iv.lo && x <= iv.hi) return true;
  return false;
}

BinningSet BinningSet::complement() const {
  std::vector<Interval> out;
  double cursor = -kInf;
  for (const auto& iv : intervals_) {
    if (iv.lo > cursor) out.push_back(Interval{cursor, iv.lo});
    cursor = iv.hi;
  }
  if (cursor < kInf) out.push_back(Interval{cursor, kInf});
  return BinningSet(std::move(out));
}

std::vector<double> BinningSet::endpoints() const {
  std::vector<double> e;
  for (const auto& iv : intervals_) {
    if (std::isfinite(iv.lo)) e.push_back(iv.lo);
    if (std::isfinite(iv.hi)) e.push_back(iv.hi);
  }
  return e;
}

std::string BinningSet::to_string() const {
  std::string s = "set:";
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    if (i) s += ';';
    s += '[' + format_number(intervals_[i].lo) + ',' + format_number(intervals_[i].hi) + ']';
  }
  return s;
}

BinningAngle BinningAngle::from_theta(double theta) {
  if (!(theta >= 0.0 && theta <= kPi)) throw DomainError("binning angle must lie in [0, pi]");
  return BinningAngle{theta, std::cos(theta), std::sin(theta)};
}

BinningAngle BinningAngle::from_cos(double cos_theta) {
  if (!(cos_theta >= -1.0 && cos_theta <= 1.0)) throw DomainError("cos(theta) must lie in [-1, 1]");
  return BinningAngle{std::acos(cos_theta), cos_theta, std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta))};
}

BinningAngle BinningAngle::golden() {
  return from_theta(2.0 * std::acos(0.5 * (std::sqrt(5.0) - 1.0)));
}

Eigen::MatrixXd overlap_matrix(const BinningSet& a, int n_max) {
  if (n_max < 0) throw DimensionError("overlap_matrix: n_max must be >= 0");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n_max + 1, n_max + 1);
  for (const auto& iv : a.intervals()) {
    if (std::isfinite(iv.hi)) add_endpoint(out, hermite_table(n_max, iv.hi), +1.0);
    else out.diagonal().array() += 1.0;
    if (std::isfinite(iv.lo)) add_endpoint(out, hermite_table(n_max, iv.lo), -1.0);
  }
  return out;
}

Eigen::VectorXd vacuum_overlaps(const BinningSet& a, int n_max) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_max + 1);
  auto add = [&](double x, double sign) {
    const auto t = hermite_table(n_max, x);
    out[0] += sign * 0.5 * std::erfc(-x);
    for (int n = 1; n <= n_max; ++n)
      out[n] += sign * (t.derivative[0] * t.value[n] - t.value[0] * t.derivative[n]) / (2.0 * n);
  };
  for (const auto& iv : a.intervals()) {
    if (std::isfinite(iv.hi)) add(iv.hi, +1.0);
    else out[0] += 1.0;
    if (std::isfinite(iv.lo)) add(iv.lo, -1.0);
  }
  return out;
}

double overlap_integral(int m, int n, const BinningSet& a) {
  if (m < 0 || n < 0) throw DomainError("overlap_integral: indices must be >= 0");
  const int hi = std::max(m, n);
  const int lo = std::min(m, n);
  double total = 0.0;
  auto antiderivative = [&](double x) {
    const auto t = hermite_table(hi, x);
    if (lo == hi) return cumulative_squares(t)[hi];
    return (t.derivative[lo] * t.value[hi] - t.value[lo] * t.derivative[hi]) / (2.0 * (hi - lo));
  };
  for (const auto& iv : a.intervals()) {
    total += std::isfinite(iv.hi) ? antiderivative(iv.hi) : (m == n ? 1.0 : 0.0);
    if (std::isfinite(iv.lo)) total -= antiderivative(iv.lo);
  }
  return total;
}

double binning_cos_theta(const BinningSet& a) {
  double p = 0.0;  // 2 * int_A phi_0^2
  for (const auto& iv : a.intervals()) p += erf_difference(iv.hi, iv.lo);
  return std::clamp(p - 1.0, -1.0, 1.0);
}

BinningAngle binning_angle(const BinningSet& a) {
  const double c = binning_cos_theta(a);
  if (std::abs(c) > 1.0 - 1e-9)
    throw DegenerateBinningError("binning angle is degenerate (cos theta = " + std::to_string(c) +
                                 "); A+ is effectively empty or the full line");
  return BinningAngle::from_cos(c);
}

FockVector xi_state(const BinningSet& a, int n_max, double max_truncation_weight) {
  const BinningAngle th = binning_angle(a);
  const Eigen::VectorXd ov = vacuum_overlaps(a, n_max);
  CVector c = CVector::Zero(n_max + 1);
  for (int n = 1; n <= n_max; ++n) c[n] = 2.0 * ov[n] / th.sin_theta;
  const double weight = std::max(0.0, 1.0 - c.squaredNorm());
  if (weight > max_truncation_weight)
    throw TruncationError("xi_state: truncation at n_max = " + std::to_string(n_max) +
                          " discards weight " + std::to_string(weight) + " > " +
                          std::to_string(max_truncation_weight));
  c /= c.norm();
  return FockVector(std::move(c), weight);
}

FockOperator binned_quadrature_operator(const BinningSet& a, int n_max) {
  Eigen::MatrixXd q = 2.0 * overlap_matrix(a, n_max);
  q.diagonal().array() -= 1.0;
  return FockOperator(q.cast<cplx>());
}

QubitOperator restricted_quadrature(const BinningAngle& theta) {
  return QubitOperator::combination(theta.cos_theta, theta.sin_theta);
}

}  // namespace hybell
