#include "kss/angular.hpp"

#include <quadmath.h>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "kss/errors.hpp"
#include "kss/quadrature.hpp"
#include "kss/roots.hpp"
#include "kss/specfun.hpp"

namespace kss {

namespace {

constexpr double kPi = std::numbers::pi;

// A_0^beta(0) = 4 pi (2 beta)!! / (2 beta + 1)!!
double a0_at_zero(int beta) {
  return 4.0 * kPi * std::exp(specfun::ln_double_factorial(2 * beta) - specfun::ln_double_factorial(2 * beta + 1));
}

void check_envelope(int j, int beta, double delta) {
  if (j < 0 || beta < 0 || !(delta >= 0.0)) {
    throw DomainError("a_fn: need j >= 0, beta >= 0, delta >= 0");
  }
  if (j > kMaxAOrder || beta > kMaxBeta || delta > kMaxDelta) {
    throw RangeError("a_fn: (j=" + std::to_string(j) + ", beta=" + std::to_string(beta) +
                     ", delta=" + std::to_string(delta) + ") outside envelope j <= 6, beta <= 60, delta <= 40");
  }
}

}  // namespace

SssState::SssState(int beta, double delta) : beta_(beta), delta_(delta), norm_(0.0) {
  if (beta < 0) throw DomainError("SssState: beta must be a non-negative integer");
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw DomainError("SssState: delta must be finite and >= 0");
  norm_ = 1.0 / std::sqrt(detail::a_fn_quadrature(0, beta, delta));
}

SssState SssState::with_norm(int beta, double delta, double norm) { return SssState(beta, delta, norm); }

namespace detail {

double a_fn_quadrature(int j, int beta, double delta) {
  if (delta == 0.0) return j == 0 ? a0_at_zero(beta) : 0.0;
  const int power = 2 * beta + j + 1;
  const double two_delta = 2.0 * delta;
  // Integrand symmetric about pi/2; carry exp(2 delta) outside the integral.
  auto integrand = [&](double theta) {
    const double s = std::sin(theta);
    return std::pow(s, power) * specfun::bessel_i_scaled(j, two_delta * s) * std::exp(two_delta * (s - 1.0));
  };
  AdaptiveOptions opt;
  opt.order = 64;
  opt.initial_panels = 1;
  opt.max_doublings = 8;
  opt.rel_tol = 1e-14;
  opt.abs_tol = 1e-300;
  const double half = integrate_adaptive(integrand, 0.0, 0.5 * kPi, opt);
  return 4.0 * kPi * half * std::exp(two_delta);
}

}  // namespace detail

double a_fn(int j, int beta, double delta) {
  check_envelope(j, beta, delta);
  return detail::a_fn_quadrature(j, beta, delta);
}

double a_fn_closed(int j, int beta, double delta) {
  if (j < 0 || beta < 0 || !(delta >= 0.0)) throw DomainError("a_fn_closed: need j >= 0, beta >= 0, delta >= 0");
  if (delta == 0.0) return j == 0 ? a0_at_zero(beta) : 0.0;
  const double z = 2.0 * delta;
  long double sum = 0.0L;
  for (int k = 0; k <= beta; ++k) {
    const double log_mag = specfun::ln_binomial(beta, k) + specfun::ln_gamma(k + 0.5) - k * std::log(delta) +
                           std::log(specfun::sph_bessel_i_scaled(j + k, z)) + z;
    const long double term = std::exp(static_cast<long double>(log_mag));
    sum += (k % 2 == 0) ? term : -term;
  }
  return static_cast<double>(4.0L * std::sqrt(static_cast<long double>(kPi)) * sum);
}

std::complex<double> sss_eval(const SssState& state, double theta, double phi) {
  if (!(theta >= 0.0 && theta <= kPi)) throw DomainError("sss_eval: theta must lie in [0, pi]");
  const double s = std::sin(theta);
  const double sb = state.beta() == 0 ? 1.0 : std::pow(s, state.beta());
  const double mag = state.norm() * sb * std::exp(state.delta() * s * std::cos(phi));
  const double arg = state.beta() * phi;
  return {mag * std::cos(arg), mag * std::sin(arg)};
}

AngularExpectations sss_expectations(const SssState& state) {
  const int beta = state.beta();
  const double delta = state.delta();
  AngularExpectations e;
  e.l3 = beta;
  if (delta == 0.0) {
    const double ratio = a0_at_zero(beta + 1) / a0_at_zero(beta);
    e.a1 = 0.0;
    e.a1_sq = 0.5 * ratio;
    e.a2_sq = 0.5 * ratio;
    e.a3_sq = 1.0 - ratio;
    e.l3_sq = static_cast<double>(beta) * beta;
    e.l_sq = static_cast<double>(beta) * (beta + 1);
    return e;
  }
  const double a0 = detail::a_fn_quadrature(0, beta, delta);
  const double a1 = detail::a_fn_quadrature(1, beta, delta);
  const double a2 = detail::a_fn_quadrature(2, beta, delta);
  const double a0_up = detail::a_fn_quadrature(0, beta + 1, delta);
  const double a1_down = beta > 0 ? detail::a_fn_quadrature(1, beta - 1, delta) : 0.0;

  e.a1 = a1 / a0;
  e.a1_sq = (a0_up + a2) / (2.0 * a0);
  e.a2_sq = e.a1 / (2.0 * delta);
  e.a3_sq = (a0 - a0_up) / a0;
  e.l3_sq = 0.5 * delta * e.a1 + static_cast<double>(beta) * beta;
  e.l_sq = static_cast<double>(beta) * (beta + 1) - delta * delta * (1.0 - e.a1_sq) +
           (2.0 * delta / a0) * ((beta + 1) * a1 - beta * a1_down);
  return e;
}

double solve_delta(int beta, double delta_l3) {
  if (beta < 1) throw DomainError("solve_delta: beta must be >= 1");
  if (!(delta_l3 > 0.0) || !std::isfinite(delta_l3)) throw DomainError("solve_delta: Delta L3 must be positive");
  const double target = delta_l3 * delta_l3;
  auto residual = [&](double delta) {
    if (delta == 0.0) return -target;
    const double a1 = detail::a_fn_quadrature(1, beta, delta) / detail::a_fn_quadrature(0, beta, delta);
    return 0.5 * delta * a1 - target;
  };
  const double top = residual(kMaxDelta);
  if (top < 0.0) {
    throw InfeasibleError("solve_delta: Delta L3 = " + std::to_string(delta_l3) + " needs delta > " +
                          std::to_string(kMaxDelta) + " (largest reachable Delta L3^2 is " +
                          std::to_string(top + target) + ")");
  }
  return solve_root(residual, RootBracket{0.0, kMaxDelta, 1e-13});
}

namespace {

// The closed form is an alternating double sum whose terms exceed the result
// by up to ~1e10 inside the envelope; it is accumulated in binary128.
using quad = __float128;

quad ln_gamma_q(quad x) { return lgammaq(x); }

// exp(-z) i_n(z) for integer n by downward recurrence normalized to i_0.
quad sph_bessel_i_scaled_q(int n, quad z) {
  const int start = n + 40 + static_cast<int>(std::sqrt(160.0 * static_cast<double>(z)));
  quad above = 0;
  quad cur = 1e-30;
  quad at_n = 0;
  for (int k = start; k > 0; --k) {
    const quad below = above + (2 * k + 1) / z * cur;
    above = cur;
    cur = below;
    if (k - 1 == n) at_n = cur;
    if (fabsq(cur) > 1e300) {
      cur *= 1e-300;
      above *= 1e-300;
      at_n *= 1e-300;
    }
  }
  const quad i0_scaled = -expm1q(-2 * z) / (2 * z);
  return at_n * (i0_scaled / cur);
}

double sss_coeff_closed(const SssState& state, int l, int m) {
  const int beta = state.beta();
  const quad delta = state.delta();
  const quad ln2 = M_LN2q;
  const quad pi = M_PIq;
  const int mm = std::min(m, beta);
  // l - m is even here, so every Bessel order below is an integer.
  const int bessel_base = 2 * std::abs(beta - m) + l - m;
  const quad log_pref = logq(quad(state.norm()) * 4 * sqrtq(pi)) +
                        (logq((2 * l + 1) / (4 * pi)) + ln_gamma_q(l - m + 1) - ln_gamma_q(l + m + 1)) / 2;
  const quad log_delta = logq(delta);
  std::vector<quad> log_bessel(static_cast<std::size_t>(bessel_base / 2 + mm + 1));
  for (std::size_t n = 0; n < log_bessel.size(); ++n) log_bessel[n] = logq(sph_bessel_i_scaled_q(int(n), delta));
  auto ln_double_factorial_q = [&](int n) -> quad {
    if (n <= 0) return 0;
    if (n % 2 == 0) return (n / 2) * ln2 + ln_gamma_q(n / 2 + 1);
    const int k = (n + 1) / 2;
    return ln_gamma_q(2 * k + 1) - k * ln2 - ln_gamma_q(k + 1);
  };
  quad sum = 0;
  for (int k = 0; 2 * k <= l - m; ++k) {
    const quad log_k = -k * ln2 - ln_gamma_q(k + 1) + ln_double_factorial_q(2 * l - 2 * k - 1) -
                       ln_gamma_q(l - m - 2 * k + 1);
    for (int p = 0; p <= mm; ++p) {
      const quad e = quad(l - m + 2 * p - 2 * k) / 2;
      const int nu = (bessel_base + 2 * p - 2 * k) / 2;
      const quad log_binom = ln_gamma_q(mm + 1) - ln_gamma_q(p + 1) - ln_gamma_q(mm - p + 1);
      const quad log_mag = log_pref + log_k + log_binom + e * ln2 + ln_gamma_q(e + quad(0.5)) - e * log_delta +
                           log_bessel[static_cast<std::size_t>(nu)] + delta;
      const quad term = expq(log_mag);
      sum += ((k + p) % 2 == 0) ? term : -term;
    }
  }
  return static_cast<double>((m % 2 == 0) ? sum : -sum);
}

double sss_coeff_quadrature(const SssState& state, int l, int m) {
  const int am = std::abs(m);
  const double sign = (m < 0 && am % 2 == 1) ? -1.0 : 1.0;
  const int beta = state.beta();
  const double delta = state.delta();
  auto estimate = [&](int theta_panels, int phi_points) {
    const QuadratureRule rule = composite_gauss_legendre(theta_panels, 64, 0.0, kPi);
    std::vector<double> cos_phi(phi_points);
    std::vector<std::complex<double>> phase(phi_points);
    for (int k = 0; k < phi_points; ++k) {
      const double phi = 2.0 * kPi * k / phi_points;
      cos_phi[k] = std::cos(phi);
      phase[k] = {std::cos((beta - m) * phi), std::sin((beta - m) * phi)};
    }
    const double dphi = 2.0 * kPi / phi_points;
    std::complex<double> total = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double theta = rule.nodes[i];
      const double s = std::sin(theta);
      std::complex<double> inner = 0.0;
      for (int k = 0; k < phi_points; ++k) inner += std::exp(delta * s * cos_phi[k]) * phase[k];
      inner *= dphi;
      const double polar = specfun::legendre_normalized(l, am, theta);
      total += rule.weights[i] * s * polar * std::pow(s, beta) * inner;
    }
    return sign * state.norm() * total.real();
  };
  int panels = 4;
  int points = 128;
  double previous = estimate(panels, points);
  for (int pass = 0; pass < 4; ++pass) {
    panels *= 2;
    points *= 2;
    const double current = estimate(panels, points);
    if (std::abs(current - previous) <= 1e-13) return current;
    previous = current;
  }
  throw AccuracyError("sss_coeff: quadrature did not converge for l=" + std::to_string(l) + " m=" + std::to_string(m),
                      previous);
}

}  // namespace

double sss_coeff(const SssState& state, int l, int m, AngularMethod method) {
  if (l < 0 || std::abs(m) > l) {
    throw DomainError("sss_coeff: need |m| <= l, got l=" + std::to_string(l) + " m=" + std::to_string(m));
  }
  if (method == AngularMethod::closed_form && m < 0) {
    throw UnsupportedMethodError("sss_coeff: closed form covers m >= 0 only; use AngularMethod::quadrature");
  }
  if ((l - m) % 2 != 0) return 0.0;
  if (state.delta() == 0.0) return (l == state.beta() && m == state.beta()) ? 1.0 : 0.0;
  return method == AngularMethod::closed_form ? sss_coeff_closed(state, l, m) : sss_coeff_quadrature(state, l, m);
}

}  // namespace kss
