#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's own evaluation paths.

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

/// I_nu(x) for real nu >= 0 from the ascending series, in long double.
inline long double bessel_i_series(long double nu, long double x, int terms = 400) {
  if (x == 0.0L) return nu == 0.0L ? 1.0L : 0.0L;
  const long double q = 0.25L * x * x;
  long double term = std::exp(nu * std::log(0.5L * x) - std::lgamma(nu + 1.0L));
  long double sum = term;
  for (int k = 1; k < terms; ++k) {
    term *= q / (static_cast<long double>(k) * (k + nu));
    sum += term;
    if (term < 1e-22L * sum) break;
  }
  return sum;
}

/// i_nu(z) = sqrt(pi / 2z) I_{nu + 1/2}(z) through the real-order series.
inline long double sph_bessel_i_series(long double nu, long double z) {
  if (z == 0.0L) return nu == 0.0L ? 1.0L : 0.0L;
  return std::sqrt(static_cast<long double>(kPi) / (2.0L * z)) * bessel_i_series(nu + 0.5L, z);
}

/// L_k^{(a)}(x) from the explicit finite sum with generalized binomials.
inline long double laguerre_sum(int k, long double a, long double x) {
  long double sum = 0.0L;
  for (int i = 0; i <= k; ++i) {
    const long double binom =
        std::exp(std::lgamma(k + a + 1.0L) - std::lgamma(k - i + 1.0L) - std::lgamma(a + i + 1.0L));
    const long double term = binom * std::pow(x, static_cast<long double>(i)) / std::tgamma(i + 1.0L);
    sum += (i % 2 == 0) ? term : -term;
  }
  return sum;
}

/// Gauss-Legendre nodes and weights on [lo, hi] by Golub-Welsch-free Newton
/// iteration in long double (independent of the library rule).
struct Rule {
  std::vector<double> x, w;
};
inline Rule gauss_legendre(int n, double lo, double hi) {
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    long double z = std::cos(kPi * (i + 0.75L) / (n + 0.5L));
    long double dp = 0.0L;
    for (int it = 0; it < 100; ++it) {
      long double p0 = 1.0L, p1 = 0.0L;
      for (int k = 1; k <= n; ++k) {
        const long double p2 = p1;
        p1 = p0;
        p0 = ((2.0L * k - 1.0L) * z * p1 - (k - 1.0L) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0L);
      const long double dz = p0 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-19L) break;
    }
    r.x[i] = static_cast<double>(0.5L * (hi + lo) - 0.5L * (hi - lo) * z);
    r.w[i] = static_cast<double>((hi - lo) / ((1.0L - z * z) * dp * dp));
  }
  return r;
}

/// Composite Gauss-Legendre integral of f on [lo, hi].
inline double integrate(const std::function<double(double)>& f, double lo, double hi, int panels = 64,
                        int order = 32) {
  const Rule ref = gauss_legendre(order, -1.0, 1.0);
  long double sum = 0.0L;
  const double width = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * width;
    for (int i = 0; i < order; ++i) sum += 0.5L * width * ref.w[i] * f(mid + 0.5 * width * ref.x[i]);
  }
  return static_cast<double>(sum);
}

inline std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f, double lo,
                                              double hi, int panels = 64, int order = 32) {
  const double re = integrate([&](double x) { return f(x).real(); }, lo, hi, panels, order);
  const double im = integrate([&](double x) { return f(x).imag(); }, lo, hi, panels, order);
  return {re, im};
}

/// RSS moments by direct quadrature of psi(r) = N' r^alpha exp(-(gamma0 + i gamma1) r),
/// with p_r = -i (d/dr + 1/r) applied through a sixth-order central difference.
struct RadialMoments {
  double norm, r_mean, r_inv, r_sq, r_inv_sq, p_r, p_r_sq;
};
template <class Psi>
RadialMoments radial_moments(Psi psi, double r_max) {
  auto density = [&](double r) { return std::norm(psi(r)) * r * r; };
  auto moment = [&](auto weight) {
    return integrate([&](double r) { return density(r) * weight(r); }, 0.0, r_max, 256, 32);
  };
  const double h = 1e-3 * r_max / 64.0;
  auto u = [&](double r) { return r * psi(r); };  // p_r psi = -i (1/r) d(r psi)/dr
  auto du = [&](double r) {
    return (-u(r - 3 * h) + 9.0 * u(r - 2 * h) - 45.0 * u(r - h) + 45.0 * u(r + h) - 9.0 * u(r + 2 * h) +
            u(r + 3 * h)) /
           (60.0 * h);
  };
  RadialMoments m{};
  m.norm = moment([](double) { return 1.0; });
  m.r_mean = moment([](double r) { return r; });
  m.r_inv = moment([](double r) { return 1.0 / r; });
  m.r_sq = moment([](double r) { return r * r; });
  m.r_inv_sq = moment([](double r) { return 1.0 / (r * r); });
  // <p_r> = int conj(u) (-i u') dr; <p_r^2> = int |u'|^2 dr.
  const double lo = 4 * h;
  m.p_r = integrate([&](double r) { return (std::conj(u(r)) * std::complex<double>(0, -1) * du(r)).real(); }, lo,
                    r_max, 256, 32);
  m.p_r_sq = integrate([&](double r) { return std::norm(du(r)); }, lo, r_max, 256, 32);
  return m;
}

}  // namespace oracle
