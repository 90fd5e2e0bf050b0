#pragma once

// Radial squeezed states (RSS): psi(r) = N' r^alpha exp(-gamma0 r - i gamma1 r)
// with N' = [(2 gamma0)^(2 alpha + 3) / Gamma(2 alpha + 3)]^(1/2).

#include <complex>

namespace kss {

class RssState {
 public:
  RssState(double alpha, double gamma0, double gamma1);

  double alpha() const { return alpha_; }
  double gamma0() const { return gamma0_; }
  double gamma1() const { return gamma1_; }
  /// ln N'
  double log_norm() const { return log_norm_; }

  /// Radius beyond which |psi|^2 r^2 is below 1e-40 of its peak.
  double support_radius() const;

 private:
  double alpha_;
  double gamma0_;
  double gamma1_;
  double log_norm_;
};

struct RadialExpectations {
  double r_mean = 0.0;    // <r>
  double r_inv = 0.0;     // <1/r>
  double r_sq = 0.0;      // <r^2>
  double r_inv_sq = 0.0;  // <1/r^2>
  double p_r = 0.0;       // <p_r>, p_r = -i (d/dr + 1/r)
  double p_r_sq = 0.0;    // <p_r^2>
  double dr_dpr = 0.0;    // Delta r * Delta p_r
};

std::complex<double> rss_eval(const RssState& state, double r);

RadialExpectations rss_expectations(const RssState& state);

/// Hydrogen level energy -1 / (2 n^2) in hartree.
double energy_n(int n);

/// Options for radial overlap integrals over [0, r_max].
struct RadialQuadrature {
  double r_max = 0.0;    // 0 selects max(4 n^2, state support radius)
  int panels = 32;       // initial composite panels (64 nodes each)
  double rel_tol = 1e-8;
  double abs_tol = 1e-14;
};

/// c_nl = int R_nl(r) psi(r) r^2 dr, computed by adaptive quadrature.
std::complex<double> rss_coeff(const RssState& state, int n, int l, const RadialQuadrature& opt = {});

/// Overlap of psi with the real radial function R(r) = coulomb_radial(n_star, l_star, degree, r).
std::complex<double> rss_overlap(const RssState& state, double n_star, double l_star, int degree,
                                 const RadialQuadrature& opt = {});

}  // namespace kss
