#pragma once

#include <algorithm>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace hybell {

template <class F>
double integrate_smooth(F&& f, double a, double b, double tolerance) {
  if (!(b > a)) return 0.0;
  // Boost compares an error estimate taken on [-1, 1] against a tolerance
  // scaled by the half-width, so short pieces would never terminate. Integrate
  // on [-1, 1] ourselves and rescale.
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  auto g = [&](double u) { return f(mid + half * u); };
  double error = 0.0;
  return half * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, -1.0, 1.0, 15, tolerance, &error);
}

template <class F>
double integrate_piecewise(F&& f, std::span<const double> breaks, double tolerance) {
  std::vector<double> pts(breaks.begin(), breaks.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    total += integrate_smooth(f, pts[i], pts[i + 1], tolerance);
  return total;
}

}  // namespace hybell
