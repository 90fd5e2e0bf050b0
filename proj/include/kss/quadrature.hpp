#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <type_traits>
#include <vector>

#include "kss/errors.hpp"

namespace kss {

/// Fixed quadrature rule on [lo, hi]: sum_i weights[i] f(nodes[i]).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double lo = 0.0;
  double hi = 0.0;

  std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [lo, hi], n >= 2. Exact for polynomials of
/// degree <= 2n - 1.
QuadratureRule gauss_legendre(int n, double lo, double hi);

/// Composite rule: [lo, hi] split into equal panels, each carrying an
/// order-point Gauss-Legendre rule.
QuadratureRule composite_gauss_legendre(int panels, int order, double lo, double hi);

template <class F>
auto integrate(F&& f, const QuadratureRule& rule) {
  using R = std::decay_t<decltype(f(rule.nodes[0]))>;
  R sum{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(rule.nodes[i]);
  return sum;
}

struct AdaptiveOptions {
  int order = 64;          // nodes per panel
  int initial_panels = 2;  // panels on the first pass
  int max_doublings = 10;
  double rel_tol = 1e-12;
  double abs_tol = 0.0;
};

/// Composite Gauss-Legendre with panel doubling until two successive
/// estimates differ by at most max(rel_tol * |I|, abs_tol). Throws
/// AccuracyError carrying the last estimate otherwise.
template <class F>
auto integrate_adaptive(F&& f, double lo, double hi, const AdaptiveOptions& opt = {}) {
  int panels = opt.initial_panels;
  auto previous = integrate(f, composite_gauss_legendre(panels, opt.order, lo, hi));
  for (int pass = 0; pass < opt.max_doublings; ++pass) {
    panels *= 2;
    const auto current = integrate(f, composite_gauss_legendre(panels, opt.order, lo, hi));
    const double change = std::abs(current - previous);
    if (change <= opt.rel_tol * std::abs(current) || change <= opt.abs_tol) return current;
    previous = current;
  }
  double best;
  if constexpr (std::is_same_v<std::decay_t<decltype(previous)>, double>) {
    best = previous;
  } else {
    best = std::abs(previous);
  }
  throw AccuracyError("integrate_adaptive: no convergence after " + std::to_string(opt.max_doublings) +
                          " panel doublings on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]",
                      best);
}

}  // namespace kss
