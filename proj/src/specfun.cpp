#include "kss/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "kss/errors.hpp"

namespace kss::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRescaleAbove = 1e250;
constexpr double kRescaleFactor = 1e-250;
const double kLogRescaleFactor = std::log(kRescaleFactor);

bool is_integer(double v) { return std::floor(v) == v; }

// exp(-x) I_j(x) from the ascending series; used where it converges quickly.
double bessel_i_series_scaled(int j, double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k + j));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return std::exp(j * std::log(0.5 * x) - ln_gamma(j + 1.0) - x) * sum;
}

// exp(-x) I_j(x) by Miller's downward recurrence, normalized with
// I_0 + 2 sum_{k>=1} I_k = exp(x).
double bessel_i_miller_scaled(int j, double x) {
  const int start = j + 16 + static_cast<int>(std::sqrt(80.0 * x));
  const double two_over_x = 2.0 / x;
  double above = 0.0;  // I_{k+1}
  double cur = 1e-30;  // I_k
  double at_j = (start == j) ? cur : 0.0;
  double sum = 2.0 * cur;
  for (int k = start; k > 0; --k) {
    const double below = above + k * two_over_x * cur;
    above = cur;
    cur = below;
    if (k - 1 == j) at_j = cur;
    sum += (k - 1 == 0) ? cur : 2.0 * cur;
    if (std::abs(cur) > kRescaleAbove) {
      cur *= kRescaleFactor;
      above *= kRescaleFactor;
      at_j *= kRescaleFactor;
      sum *= kRescaleFactor;
    }
  }
  return at_j / sum;
}

// exp(-z) i_n(z), integer n, from the ascending series.
double sph_bessel_i_series_scaled(int n, double z) {
  const double q = 0.5 * z * z;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(2 * n + 2 * k + 1));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  const double lead = (n == 0 ? 0.0 : n * std::log(z)) - ln_double_factorial(2 * n + 1);
  return std::exp(lead - z) * sum;
}

// exp(-z) i_n(z), integer n, by downward recurrence normalized to i_0.
double sph_bessel_i_miller_scaled(int n, double z) {
  const int start = n + 16 + static_cast<int>(std::sqrt(80.0 * z));
  double above = 0.0;
  double cur = 1e-30;
  double at_n = (start == n) ? cur : 0.0;
  for (int k = start; k > 0; --k) {
    const double below = above + (2.0 * k + 1.0) / z * cur;
    above = cur;
    cur = below;
    if (k - 1 == n) at_n = cur;
    if (std::abs(cur) > kRescaleAbove) {
      cur *= kRescaleFactor;
      above *= kRescaleFactor;
      at_n *= kRescaleFactor;
    }
  }
  const double i0_scaled = -std::expm1(-2.0 * z) / (2.0 * z);
  return at_n * (i0_scaled / cur);
}

void check_order(double nu) {
  if (!(nu >= 0.0) || !std::isfinite(nu) || !is_integer(2.0 * nu)) {
    throw DomainError("sph_bessel_i: order must be a non-negative integer or half-integer, got " +
                      std::to_string(nu));
  }
}

}  // namespace

double ln_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("ln_gamma: argument must be positive and finite, got " + std::to_string(x));
  }
  int sign = 1;
  return ::lgamma_r(x, &sign);
}

double ln_double_factorial(int n) {
  if (n < -1) throw DomainError("double_factorial: n must be >= -1, got " + std::to_string(n));
  if (n <= 0) return 0.0;
  if (n % 2 == 0) {
    const int k = n / 2;
    return k * std::numbers::ln2 + ln_gamma(k + 1.0);
  }
  // (2k-1)!! = (2k)! / (2^k k!)
  const int k = (n + 1) / 2;
  return ln_gamma(2.0 * k + 1.0) - k * std::numbers::ln2 - ln_gamma(k + 1.0);
}

double double_factorial(int n) {
  if (n < -1) throw DomainError("double_factorial: n must be >= -1, got " + std::to_string(n));
  if (n > 300) return std::exp(ln_double_factorial(n));
  double result = 1.0;
  for (int k = n; k > 1; k -= 2) result *= k;
  return result;
}

double ln_binomial(int n, int k) {
  if (k < 0 || k > n) throw DomainError("ln_binomial: need 0 <= k <= n");
  return ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0);
}

double bessel_i_scaled(int j, double x) {
  if (j < 0) throw DomainError("bessel_i: order must be >= 0");
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("bessel_i: argument must be finite and >= 0");
  if (x == 0.0) return j == 0 ? 1.0 : 0.0;
  if (x < 2.0 || 0.25 * x * x < j + 1.0) return bessel_i_series_scaled(j, x);
  return bessel_i_miller_scaled(j, x);
}

double bessel_i(int j, double x) {
  if (x > 700.0) {
    throw RangeError("bessel_i: argument " + std::to_string(x) +
                     " overflows double precision; use bessel_i_scaled (exp(-x) I_j(x))");
  }
  const double scaled = bessel_i_scaled(j, x);
  return scaled == 0.0 ? 0.0 : scaled * std::exp(x);
}

double sph_bessel_i_scaled(double nu, double z) {
  check_order(nu);
  if (!(z >= 0.0) || !std::isfinite(z)) throw DomainError("sph_bessel_i: argument must be finite and >= 0");
  if (z == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  if (!is_integer(nu)) {
    const int j = static_cast<int>(nu + 0.5);
    return std::sqrt(0.5 * kPi / z) * bessel_i_scaled(j, z);
  }
  const int n = static_cast<int>(nu);
  if (z < 1.0 || 0.5 * z * z < 2.0 * n + 3.0) return sph_bessel_i_series_scaled(n, z);
  return sph_bessel_i_miller_scaled(n, z);
}

double sph_bessel_i(double nu, double z) {
  if (z > 700.0) {
    throw RangeError("sph_bessel_i: argument overflows double precision; use sph_bessel_i_scaled");
  }
  const double scaled = sph_bessel_i_scaled(nu, z);
  return scaled == 0.0 ? 0.0 : scaled * std::exp(z);
}

void legendre_normalized_column(int m, double theta, std::span<double> out) {
  if (m < 0) throw DomainError("legendre_normalized_column: m must be >= 0");
  if (out.empty()) return;
  const double x = std::cos(theta);
  const double s = std::sin(theta);
  double pmm = 1.0 / std::sqrt(4.0 * kPi);
  for (int k = 1; k <= m; ++k) pmm *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * s;
  out[0] = pmm;
  if (out.size() == 1) return;
  double prev2 = pmm;
  double prev1 = std::sqrt(2.0 * m + 3.0) * x * pmm;
  out[1] = prev1;
  for (std::size_t i = 2; i < out.size(); ++i) {
    const double l = static_cast<double>(m) + static_cast<double>(i);
    const double mm = static_cast<double>(m) * m;
    const double a = std::sqrt((4.0 * l * l - 1.0) / (l * l - mm));
    const double b = std::sqrt(((l - 1.0) * (l - 1.0) - mm) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
    const double next = a * (x * prev1 - b * prev2);
    out[i] = next;
    prev2 = prev1;
    prev1 = next;
  }
}

double legendre_normalized(int l, int m, double theta) {
  if (m < 0 || m > l) throw DomainError("legendre_normalized: need 0 <= m <= l");
  std::vector<double> column(static_cast<std::size_t>(l - m + 1));
  legendre_normalized_column(m, theta, column);
  return column.back();
}

std::complex<double> sph_harm(int l, int m, double theta, double phi) {
  if (l < 0 || std::abs(m) > l) {
    throw DomainError("sph_harm: need |m| <= l, got l=" + std::to_string(l) + " m=" + std::to_string(m));
  }
  if (l > 200) throw RangeError("sph_harm: l > 200 unsupported");
  const int am = std::abs(m);
  const double p = legendre_normalized(l, am, theta);
  const std::complex<double> y = p * std::complex<double>(std::cos(am * phi), std::sin(am * phi));
  if (m >= 0) return y;
  return (am % 2 == 0 ? 1.0 : -1.0) * std::conj(y);
}

ScaledValue laguerre_gen_scaled(int k, double a, double x) {
  if (k < 0) throw DomainError("laguerre_gen: degree must be >= 0");
  if (!(a > -1.0)) throw DomainError("laguerre_gen: order must be > -1, got " + std::to_string(a));
  ScaledValue out{1.0, 0.0};
  if (k == 0) return out;
  double prev = 1.0;
  double cur = 1.0 + a - x;
  for (int j = 1; j < k; ++j) {
    const double next = ((2.0 * j + 1.0 + a - x) * cur - (j + a) * prev) / (j + 1.0);
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescaleAbove) {
      cur *= kRescaleFactor;
      prev *= kRescaleFactor;
      out.log_scale -= kLogRescaleFactor;
    }
  }
  out.mantissa = cur;
  return out;
}

double laguerre_gen(int k, double a, double x) {
  const ScaledValue v = laguerre_gen_scaled(k, a, x);
  return v.log_scale == 0.0 ? v.mantissa : v.mantissa * std::exp(v.log_scale);
}

double coulomb_radial(double n_star, double l_star, int degree, double r) {
  if (degree < 0) throw DomainError("coulomb_radial: Laguerre degree must be >= 0");
  if (!(l_star > -1.0)) throw DomainError("coulomb_radial: l* must be > -1");
  if (!(n_star > l_star)) throw DomainError("coulomb_radial: need n* > l*");
  if (!(r >= 0.0)) throw DomainError("coulomb_radial: r must be >= 0");
  const double x = 2.0 * r / n_star;
  const double log_norm =
      1.5 * std::log(2.0 / n_star) +
      0.5 * (ln_gamma(degree + 1.0) - std::log(2.0 * n_star) - ln_gamma(n_star + l_star + 1.0));
  const ScaledValue lag = laguerre_gen_scaled(degree, 2.0 * l_star + 1.0, x);
  if (lag.mantissa == 0.0) return 0.0;
  if (r == 0.0) {
    if (l_star > 0.0) return 0.0;
    if (l_star < 0.0) return std::copysign(HUGE_VAL, lag.mantissa);
    return std::exp(log_norm + lag.log_scale) * lag.mantissa;
  }
  const double log_mag = log_norm - r / n_star + l_star * std::log(x) + lag.log_scale;
  return std::exp(log_mag) * lag.mantissa;
}

double hydro_radial(int n, int l, double r) {
  if (n < 1 || l < 0 || l >= n) {
    throw DomainError("hydro_radial: need 0 <= l < n, got n=" + std::to_string(n) + " l=" + std::to_string(l));
  }
  if (n > 120) throw RangeError("hydro_radial: n > 120 unsupported");
  return coulomb_radial(n, l, n - l - 1, r);
}

}  // namespace kss::specfun
