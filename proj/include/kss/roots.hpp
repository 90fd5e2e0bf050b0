#pragma once

#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdint>
#include <string>

#include "kss/errors.hpp"

namespace kss {

/// Search interval for a scalar root. The target must change sign on [lo, hi].
struct RootBracket {
  double lo = 0.0;
  double hi = 0.0;
  double tol = 1e-12;  // absolute width of the final bracket
};

/// Bracketing root solve (TOMS 748). The iterate never leaves the bracket.
/// Throws BracketError without a sign change and AccuracyError when
/// max_iter is exhausted.
template <class F>
double solve_root(F&& f, const RootBracket& bracket, std::uintmax_t max_iter = 200) {
  if (!(bracket.lo < bracket.hi)) throw BracketError("solve_root: need lo < hi");
  if (!(bracket.tol > 0.0)) throw BracketError("solve_root: tolerance must be positive");
  const double f_lo = f(bracket.lo);
  const double f_hi = f(bracket.hi);
  if (f_lo == 0.0) return bracket.lo;
  if (f_hi == 0.0) return bracket.hi;
  if (!std::isfinite(f_lo) || !std::isfinite(f_hi) || (f_lo > 0.0) == (f_hi > 0.0)) {
    throw BracketError("solve_root: no sign change on [" + std::to_string(bracket.lo) + ", " +
                       std::to_string(bracket.hi) + "] (f = " + std::to_string(f_lo) + ", " +
                       std::to_string(f_hi) + ")");
  }
  const double tol = bracket.tol;
  auto done = [tol](double a, double b) { return std::abs(b - a) <= tol; };
  std::uintmax_t iterations = max_iter;
  const auto [a, b] = boost::math::tools::toms748_solve(f, bracket.lo, bracket.hi, f_lo, f_hi, done, iterations);
  const double root = 0.5 * (a + b);
  if (iterations >= max_iter && !done(a, b)) {
    throw AccuracyError("solve_root: bracket did not shrink to tolerance", root);
  }
  return root;
}

}  // namespace kss
