#include "riskeysim/theory.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace riskeysim {

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa,
                double b, double fb, double fm, double whole, double tol,
                int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
         adaptive(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = simpson(a, fa, b, fb, fm);
  return adaptive(f, a, fa, b, fb, fm, whole, tol, 48);
}

}  // namespace

double theoretical_kmr(const KmrQuery& q, double abs_tol) {
  if (!(q.ratio >= 0.0)) throw std::invalid_argument("theoretical_kmr: ratio < 0");
  if (!(q.beta >= 0.0 && q.beta < 0.5))
    throw std::invalid_argument("theoretical_kmr: beta outside [0, 0.5)");

  const double x = q.ratio;
  const double shift = q.beta * std::sqrt(x * x + 1.0);
  auto f = [&](double z) {
    return normal_cdf(-shift + x * z) * std::exp(-0.5 * z * z);
  };

  // Beyond beta + 12 the Gaussian envelope is < 1e-31; at large ratio the
  // CDF factor turns on within ~4/x of the lower limit, so that region is
  // integrated separately to keep the adaptive refinement local.
  const double lo = q.beta;
  const double hi = q.beta + 12.0;
  double result = 0.0;
  if (x > 16.0) {
    const double knee = std::min(lo + 8.0 / x, hi);
    result = integrate(f, lo, knee, 0.5 * abs_tol) +
             integrate(f, knee, hi, 0.5 * abs_tol);
  } else {
    result = integrate(f, lo, hi, abs_tol);
  }
  result *= std::sqrt(2.0 / std::numbers::pi);
  return std::clamp(result, 0.0, 1.0);
}

double kmr_limit(double beta) {
  if (!(beta >= 0.0 && beta < 0.5))
    throw std::invalid_argument("kmr_limit: beta outside [0, 0.5)");
  return 2.0 * normal_cdf(-beta);
}

KmrDiffs kmr_derivative_signs(double beta, std::span<const double> grid) {
  if (grid.size() < 3)
    throw std::invalid_argument("kmr_derivative_signs: need >= 3 grid points");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw std::invalid_argument("kmr_derivative_signs: grid must be strictly increasing");

  KmrDiffs d;
  d.values.reserve(grid.size());
  for (double x : grid) d.values.push_back(theoretical_kmr({x, beta}));
  d.first.resize(grid.size() - 1);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    d.first[i] = d.values[i + 1] - d.values[i];
  d.second.resize(grid.size() - 2);
  for (std::size_t i = 0; i + 2 < grid.size(); ++i) {
    const double s01 = (d.values[i + 1] - d.values[i]) / (grid[i + 1] - grid[i]);
    const double s12 = (d.values[i + 2] - d.values[i + 1]) / (grid[i + 2] - grid[i + 1]);
    d.second[i] = (s12 - s01) / (grid[i + 2] - grid[i]);
  }
  return d;
}

}  // namespace riskeysim
