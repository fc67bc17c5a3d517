#include "hybell/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hybell/errors.hpp"

namespace hybell {
namespace {

using Point = std::vector<double>;

Point clamp(Point x, const Box& box) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], box.lower[i], box.upper[i]);
  return x;
}

// a + s (b - a)
Point along(const Point& a, const Point& b, double s) {
  Point out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + s * (b[i] - a[i]);
  return out;
}

}  // namespace

SimplexResult maximize_simplex(const std::function<double(const std::vector<double>&)>& f, std::vector<double> start,
                               const Box& box, const SimplexOptions& opt) {
  const std::size_t dim = start.size();
  if (dim == 0 || box.lower.size() != dim || box.upper.size() != dim)
    throw DimensionError("maximize_simplex: start and box dimensions differ");

  SimplexResult res;
  // Minimize -f internally.
  auto eval = [&](const Point& x) {
    ++res.evaluations;
    return -f(x);
  };

  std::vector<Point> pts;
  std::vector<double> vals;
  pts.push_back(clamp(std::move(start), box));
  for (std::size_t i = 0; i < dim; ++i) {
    Point p = pts.front();
    const double step = opt.initial_step * (box.upper[i] - box.lower[i]);
    p[i] = p[i] + step <= box.upper[i] ? p[i] + step : p[i] - step;
    pts.push_back(clamp(std::move(p), box));
  }
  for (const auto& p : pts) vals.push_back(eval(p));

  std::vector<std::size_t> order(dim + 1);
  for (res.iterations = 0; res.iterations < opt.max_iterations; ++res.iterations) {
    std::iota(order.begin(), order.end(), 0);
    // Ties go to the lower index so runs are reproducible.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[dim - 1];

    double spread = 0.0;
    for (const auto& p : pts)
      for (std::size_t i = 0; i < dim; ++i) spread = std::max(spread, std::abs(p[i] - pts[best][i]));
    if (vals[worst] - vals[best] <= opt.f_tolerance || spread <= opt.x_tolerance) {
      res.converged = true;
      break;
    }

    Point centroid(dim, 0.0);
    for (std::size_t k = 0; k <= dim; ++k) {
      if (k == worst) continue;
      for (std::size_t i = 0; i < dim; ++i) centroid[i] += pts[k][i] / static_cast<double>(dim);
    }

    const Point reflected = clamp(along(centroid, pts[worst], -1.0), box);
    const double fr = eval(reflected);
    if (fr < vals[best]) {
      const Point expanded = clamp(along(centroid, pts[worst], -2.0), box);
      const double fe = eval(expanded);
      if (fe < fr) {
        pts[worst] = expanded;
        vals[worst] = fe;
      } else {
        pts[worst] = reflected;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = reflected;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const Point contracted = outside ? along(centroid, reflected, 0.5) : along(centroid, pts[worst], 0.5);
    const double fc = eval(contracted);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = contracted;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t k = 0; k <= dim; ++k) {
      if (k == best) continue;
      pts[k] = along(pts[best], pts[k], 0.5);
      vals[k] = eval(pts[k]);
    }
  }

  const auto best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  res.x = pts[best];
  res.value = -vals[best];
  return res;
}

}  // namespace hybell
