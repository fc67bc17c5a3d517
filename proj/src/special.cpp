#include "hybell/special.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/erf.hpp>

namespace hybell {
namespace {

constexpr double kRescaleAbove = 1e100;
const double kLogRescale = std::log(1e100);

// Runs the scaled recurrence up to n_max and hands every phi_k to `emit`.
template <class Emit>
void hermite_recurrence(int n_max, double x, Emit&& emit) {
  HermiteStream s(x);
  emit(0, s.value());
  for (int k = 0; k < n_max; ++k) {
    s.advance();
    emit(k + 1, s.value());
  }
}

}  // namespace

HermiteStream::HermiteStream(double x)
    : x_(x), log_scale_(-0.5 * x * x - 0.25 * std::log(kPi)), factor_(std::exp(log_scale_)) {}

double HermiteStream::derivative() const {
  return std::sqrt(2.0 * n_) * previous() - x_ * value();
}

void HermiteStream::advance() {
  const double np1 = static_cast<double>(n_ + 1);
  const double next = x_ * std::sqrt(2.0 / np1) * cur_ - std::sqrt(n_ / np1) * prev_;
  prev_ = cur_;
  cur_ = next;
  ++n_;
  if (std::abs(cur_) > kRescaleAbove) {
    cur_ /= kRescaleAbove;
    prev_ /= kRescaleAbove;
    log_scale_ += kLogRescale;
    factor_ = std::exp(log_scale_);
  }
}

double hermite_function(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite_function: n must be >= 0");
  double out = 0.0;
  hermite_recurrence(n, x, [&](int k, double v) {
    if (k == n) out = v;
  });
  return out;
}

std::vector<double> hermite_functions(int n_max, double x) {
  if (n_max < 0) throw std::invalid_argument("hermite_functions: n_max must be >= 0");
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
  hermite_recurrence(n_max, x, [&](int k, double v) { out[static_cast<std::size_t>(k)] = v; });
  return out;
}

HermiteTable hermite_table(int n_max, double x) {
  HermiteTable t;
  t.x = x;
  t.value = hermite_functions(n_max, x);
  t.derivative.resize(t.value.size());
  t.derivative[0] = -x * t.value[0];
  for (std::size_t n = 1; n < t.value.size(); ++n)
    t.derivative[n] = std::sqrt(2.0 * static_cast<double>(n)) * t.value[n - 1] - x * t.value[n];
  return t;
}

double erf_difference(double u, double v) {
  if (u > 0.0 && v > 0.0) return std::erfc(v) - std::erfc(u);
  if (u < 0.0 && v < 0.0) return std::erfc(-u) - std::erfc(-v);
  return std::erf(u) - std::erf(v);
}

double erf_inverse(double y) {
  if (!(y > -1.0 && y < 1.0)) {
    if (y == 1.0) return INFINITY;
    if (y == -1.0) return -INFINITY;
    throw std::domain_error("erf_inverse: argument outside [-1, 1]");
  }
  return boost::math::erf_inv(y);
}

}  // namespace hybell
