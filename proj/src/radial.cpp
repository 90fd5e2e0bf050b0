#include "kss/radial.hpp"

#include <cmath>
#include <string>

#include "kss/errors.hpp"
#include "kss/quadrature.hpp"
#include "kss/specfun.hpp"

namespace kss {

RssState::RssState(double alpha, double gamma0, double gamma1)
    : alpha_(alpha), gamma0_(gamma0), gamma1_(gamma1), log_norm_(0.0) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("RssState: alpha must be positive");
  if (!(gamma0 > 0.0) || !std::isfinite(gamma0)) throw DomainError("RssState: gamma0 must be positive");
  if (!std::isfinite(gamma1)) throw DomainError("RssState: gamma1 must be finite");
  log_norm_ = 0.5 * ((2.0 * alpha + 3.0) * std::log(2.0 * gamma0) - specfun::ln_gamma(2.0 * alpha + 3.0));
}

double RssState::support_radius() const {
  // Density in x = 2 gamma0 r is x^(2 alpha + 2) exp(-x), peaked at x0.
  const double x0 = 2.0 * alpha_ + 2.0;
  const double drop = 40.0 * std::log(10.0);
  auto log_ratio = [&](double x) { return x0 * std::log(x / x0) - (x - x0) + drop; };
  double lo = x0;
  double hi = x0 + 10.0;
  while (log_ratio(hi) > 0.0) hi = x0 + 2.0 * (hi - x0);
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (log_ratio(mid) > 0.0 ? lo : hi) = mid;
  }
  return hi / (2.0 * gamma0_);
}

std::complex<double> rss_eval(const RssState& state, double r) {
  if (!(r >= 0.0)) throw DomainError("rss_eval: r must be >= 0");
  if (r == 0.0) return 0.0;
  const double mag = std::exp(state.log_norm() + state.alpha() * std::log(r) - state.gamma0() * r);
  const double arg = -state.gamma1() * r;
  return {mag * std::cos(arg), mag * std::sin(arg)};
}

RadialExpectations rss_expectations(const RssState& state) {
  const double a = state.alpha();
  const double g0 = state.gamma0();
  const double g1 = state.gamma1();
  RadialExpectations e;
  e.r_mean = (2.0 * a + 3.0) / (2.0 * g0);
  e.r_inv = g0 / (a + 1.0);
  e.r_sq = (a + 2.0) * (2.0 * a + 3.0) / (2.0 * g0 * g0);
  e.r_inv_sq = 2.0 * g0 * g0 / ((a + 1.0) * (2.0 * a + 1.0));
  e.p_r = -g1;
  e.p_r_sq = g0 * g0 / (2.0 * a + 1.0) + g1 * g1;
  e.dr_dpr = 0.5 * std::sqrt((2.0 * a + 3.0) / (2.0 * a + 1.0));
  return e;
}

double energy_n(int n) {
  if (n < 1) throw DomainError("energy_n: n must be >= 1");
  return -0.5 / (static_cast<double>(n) * n);
}

std::complex<double> rss_overlap(const RssState& state, double n_star, double l_star, int degree,
                                 const RadialQuadrature& opt) {
  const double r_max = opt.r_max > 0.0 ? opt.r_max : std::max(4.0 * n_star * n_star, state.support_radius());
  auto integrand = [&](double r) {
    return specfun::coulomb_radial(n_star, l_star, degree, r) * rss_eval(state, r) * (r * r);
  };
  AdaptiveOptions ad;
  ad.order = 64;
  ad.initial_panels = opt.panels;
  ad.max_doublings = 6;
  ad.rel_tol = opt.rel_tol;
  ad.abs_tol = opt.abs_tol;
  return integrate_adaptive(integrand, 0.0, r_max, ad);
}

std::complex<double> rss_coeff(const RssState& state, int n, int l, const RadialQuadrature& opt) {
  if (n < 1 || l < 0 || l >= n) {
    throw DomainError("rss_coeff: need 0 <= l < n, got n=" + std::to_string(n) + " l=" + std::to_string(l));
  }
  if (n > 120) throw RangeError("rss_coeff: n > 120 unsupported");
  return rss_overlap(state, n, l, n - l - 1, opt);
}

}  // namespace kss
