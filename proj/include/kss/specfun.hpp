#pragma once

// Special functions used throughout the library: gamma and factorial helpers,
// modified Bessel functions, spherical harmonics, Coulomb radial
// eigenfunctions and generalized Laguerre polynomials.
//
// All functions are pure and safe to call concurrently.

#include <complex>
#include <span>

namespace kss::specfun {

/// ln Γ(x) for x > 0.
double ln_gamma(double x);

/// n!! for n >= -1, with (-1)!! = 0!! = 1.
double double_factorial(int n);

/// ln(n!!) for n >= -1. Finite for every n, unlike double_factorial.
double ln_double_factorial(int n);

/// ln C(n, k) for 0 <= k <= n.
double ln_binomial(int n, int k);

/// Modified Bessel function of the first kind I_j(x), integer j >= 0,
/// 0 <= x <= 700. Larger x throws RangeError; use bessel_i_scaled there.
double bessel_i(int j, double x);

/// exp(-x) I_j(x) for any finite x >= 0.
double bessel_i_scaled(int j, double x);

/// Modified spherical Bessel function i_nu(z) = sqrt(pi / 2z) I_{nu+1/2}(z).
/// nu must be a non-negative integer or half-odd-integer.
double sph_bessel_i(double nu, double z);

/// exp(-z) i_nu(z).
double sph_bessel_i_scaled(double nu, double z);

/// Orthonormal spherical harmonic Y_lm(theta, phi) with the Condon-Shortley
/// phase, 0 <= l <= 200, |m| <= l.
std::complex<double> sph_harm(int l, int m, double theta, double phi);

/// Polar factor of Y_lm for m >= 0, so that
/// Y_lm(theta, phi) = legendre_normalized(l, m, theta) * exp(i m phi).
double legendre_normalized(int l, int m, double theta);

/// Fills out[l - m] = legendre_normalized(l, m, theta) for l = m .. m + out.size() - 1
/// using a single upward recurrence.
void legendre_normalized_column(int m, double theta, std::span<double> out);

/// Hydrogen radial eigenfunction R_nl(r) (atomic units, Z = 1), normalized to
/// int_0^inf R_nl^2 r^2 dr = 1. Requires 0 <= l < n <= 120 and r >= 0.
double hydro_radial(int n, int l, double r);

/// Radial function with the hydrogenic functional form but real labels
/// (n_star, l_star) and integer Laguerre degree n_star - l_star - 1 = degree.
/// Reduces to hydro_radial for integer labels.
double coulomb_radial(double n_star, double l_star, int degree, double r);

/// Generalized Laguerre polynomial L_k^{(a)}(x), a > -1.
double laguerre_gen(int k, double a, double x);

/// L_k^{(a)}(x) as mantissa * exp(log_scale); never overflows.
struct ScaledValue {
  double mantissa = 0.0;
  double log_scale = 0.0;
};
ScaledValue laguerre_gen_scaled(int k, double a, double x);

}  // namespace kss::specfun
