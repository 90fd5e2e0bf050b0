#pragma once

// Spherical squeezed states (SSS): the angular factor
//
//   chi(theta, phi) = N sin^beta(theta) exp(delta sin(theta) cos(phi) + i beta phi)
//
// of a Keplerian squeezed state, together with the A_j^beta(delta) integrals
// that express its normalization and expectation values.

#include <complex>

namespace kss {

/// Angular squeezed state. beta is <L3> (an integer), delta >= 0 the
/// squeezing along the orbit, norm = 1 / sqrt(A_0^beta(delta)).
class SssState {
 public:
  SssState(int beta, double delta);

  /// State with an explicitly supplied normalization constant. No invariant
  /// is enforced; used to exercise the validation suite.
  static SssState with_norm(int beta, double delta, double norm);

  int beta() const { return beta_; }
  double delta() const { return delta_; }
  double norm() const { return norm_; }

 private:
  SssState(int beta, double delta, double norm) : beta_(beta), delta_(delta), norm_(norm) {}

  int beta_;
  double delta_;
  double norm_;
};

struct AngularExpectations {
  double a1 = 0.0;     // <sin(theta) cos(phi)>
  double a1_sq = 0.0;  // <a_1^2>
  double a2_sq = 0.0;  // <a_2^2>
  double a3_sq = 0.0;  // <a_3^2>
  double l3 = 0.0;     // <L3>
  double l3_sq = 0.0;  // <L3^2>
  double l_sq = 0.0;   // <L^2>
};

/// Limits of the validated parameter envelope for A_j^beta(delta).
inline constexpr int kMaxAOrder = 6;
inline constexpr int kMaxBeta = 60;
inline constexpr double kMaxDelta = 40.0;

/// A_j^beta(delta) = 2 pi int_0^pi sin^(2 beta + j + 1)(theta) I_j(2 delta sin theta) dtheta,
/// evaluated by Gauss-Legendre quadrature. Throws RangeError outside
/// j <= 6, beta <= 60, 0 <= delta <= 40.
double a_fn(int j, int beta, double delta);

/// The same function from its finite alternating sum over modified spherical
/// Bessel functions. Loses accuracy to cancellation for large beta; intended
/// as a cross-check for beta <= 10.
double a_fn_closed(int j, int beta, double delta);

namespace detail {
/// a_fn without the envelope check (beta + 1 and beta - 1 neighbours are
/// needed by the expectation values at the envelope edge).
double a_fn_quadrature(int j, int beta, double delta);
}  // namespace detail

/// chi(theta, phi) for 0 <= theta <= pi.
std::complex<double> sss_eval(const SssState& state, double theta, double phi);

/// Closed-form angular expectation values. delta == 0 returns the
/// eigenstate limits without evaluating any 1/delta term.
AngularExpectations sss_expectations(const SssState& state);

/// delta such that Delta L3 = sqrt(<L3^2> - <L3>^2) equals delta_l3.
/// Throws InfeasibleError when no root exists on [0, kMaxDelta].
double solve_delta(int beta, double delta_l3);

enum class AngularMethod { closed_form, quadrature };

/// Expansion coefficient c_lm = int conj(Y_lm) chi dOmega (real-valued).
/// Returns exactly 0 when l - m is odd. closed_form requires m >= 0
/// (UnsupportedMethodError otherwise); quadrature integrates over theta
/// and phi directly and accepts any m.
double sss_coeff(const SssState& state, int l, int m, AngularMethod method = AngularMethod::closed_form);

}  // namespace kss
