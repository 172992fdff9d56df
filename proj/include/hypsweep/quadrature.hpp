#pragma once

// Adaptive Gauss-Legendre quadrature. A panel is accepted when the n-point
// rule on the whole panel and on its two halves agree to within the panel's
// share of the absolute tolerance, or to 1e-14 relative (below that the
// difference is rounding); otherwise the panel is bisected.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace hypsweep::quad {

inline constexpr std::size_t kOrder = 10;

struct Rule {
  std::array<double, kOrder> nodes;    // on [-1, 1]
  std::array<double, kOrder> weights;
};

/// n-point Gauss-Legendre rule computed once by Newton iteration on P_n.
const Rule& gauss_legendre();

/// Fixed rule with `order` points (2 <= order <= 64), cached per order.
struct DynRule {
  const double* nodes;
  const double* weights;
  std::size_t size;
};
DynRule gauss_legendre(std::size_t order);

template <class F>
double fixed(F&& f, double a, double b) {
  const Rule& r = gauss_legendre();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < kOrder; ++i) sum += r.weights[i] * f(mid + half * r.nodes[i]);
  return sum * half;
}

template <class F>
double fixed(F&& f, double a, double b, std::size_t order) {
  const DynRule r = gauss_legendre(order);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < r.size; ++i) sum += r.weights[i] * f(mid + half * r.nodes[i]);
  return sum * half;
}

namespace detail {
template <class F>
double adapt(F& f, double a, double b, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double left = fixed(f, a, m);
  const double right = fixed(f, m, b);
  const double refined = left + right;
  if (depth <= 0 || std::abs(refined - whole) <= std::max(tol, 1e-14 * std::abs(refined))) return refined;
  return adapt(f, a, m, left, 0.5 * tol, depth - 1) + adapt(f, m, b, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

/// Integral of f over [a, b] to absolute tolerance `tol`.
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-10, int max_depth = 40) {
  if (a == b) return 0.0;
  const double whole = fixed(f, a, b);
  return detail::adapt(f, a, b, whole, tol, max_depth);
}

/// Integral of f over [a, b] to a tolerance relative to the first
/// whole-interval estimate.
template <class F>
double integrate_relative(F&& f, double a, double b, double rel, int max_depth = 40) {
  if (a == b) return 0.0;
  const double whole = fixed(f, a, b);
  return detail::adapt(f, a, b, whole, rel * std::abs(whole), max_depth);
}

/// Iterated integral of f(x, y) over a <= x <= b, lo(x) <= y <= hi(x).
template <class F, class Lo, class Hi>
double integrate2(F&& f, double a, double b, Lo&& lo, Hi&& hi, double tol = 1e-8) {
  const double width = std::abs(b - a) > 0.0 ? std::abs(b - a) : 1.0;
  const double inner_tol = 0.1 * tol / width;
  auto outer = [&](double x) {
    return integrate([&](double y) { return f(x, y); }, lo(x), hi(x), inner_tol);
  };
  return integrate(outer, a, b, tol);
}

}  // namespace hypsweep::quad
