#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kss/angular.hpp"
#include "kss/errors.hpp"
#include "kss/specfun.hpp"
#include "oracles.hpp"

#include <boost/math/special_functions/legendre.hpp>

using namespace kss;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Worked-example squeezing, from a scipy/mpmath reference solve of
// (delta / 2) A_1 / A_0 = 2.5^2 at beta = 30.
constexpr double kWorkedDelta = 12.826300843865384;

// |chi|^2 integrated over the sphere with oracle quadrature.
double sphere_norm(const SssState& s) {
  const int nphi = 128;
  return oracle::integrate(
      [&](double theta) {
        double inner = 0.0;
        for (int k = 0; k < nphi; ++k) inner += std::norm(sss_eval(s, theta, 2.0 * oracle::kPi * k / nphi));
        return inner * (2.0 * oracle::kPi / nphi) * std::sin(theta);
      },
      0.0, oracle::kPi, 16, 32);
}
}  // namespace

TEST_CASE("a_fn at zero argument") {
  CHECK(a_fn(0, 0, 0.0) == doctest::Approx(4.0 * oracle::kPi).epsilon(1e-15));
  CHECK(a_fn(0, 1, 0.0) == doctest::Approx(8.0 * oracle::kPi / 3.0).epsilon(1e-15));
  CHECK(a_fn(2, 5, 0.0) == 0.0);
  CHECK(a_fn_closed(0, 1, 0.0) == doctest::Approx(8.0 * oracle::kPi / 3.0).epsilon(1e-15));
  // Small delta approaches the limit continuously.
  CHECK(rel(a_fn(0, 7, 1e-6), a_fn(0, 7, 0.0)) < 1e-10);
}

TEST_CASE("a_fn quadrature vs closed form") {
  CHECK(rel(a_fn(1, 3, 2.5), a_fn_closed(1, 3, 2.5)) < 1e-10);
  // A_0^0(1) = 4 sqrt(pi) Gamma(1/2) i_0(2) = 4 pi sinh(2) / 2
  CHECK(rel(a_fn(0, 0, 1.0), 4.0 * oracle::kPi * std::sinh(2.0) / 2.0) < 1e-13);
  for (int beta = 0; beta <= 10; ++beta)
    for (int j = 0; j <= 4; ++j)
      for (double delta : {0.3, 1.7, 5.0, 12.826, 30.0}) {
        INFO("j=" << j << " beta=" << beta << " delta=" << delta);
        CHECK(rel(a_fn(j, beta, delta), a_fn_closed(j, beta, delta)) < 1e-10);
      }
  // Against the defining integral with an oracle rule.
  for (auto [j, beta, delta] : {std::tuple{0, 30, kWorkedDelta}, std::tuple{1, 60, 40.0}, std::tuple{6, 12, 0.4}}) {
    const double ref = 2.0 * oracle::kPi * oracle::integrate(
                                               [&](double t) {
                                                 return std::pow(std::sin(t), 2 * beta + j + 1) *
                                                        static_cast<double>(oracle::bessel_i_series(
                                                            j, 2.0 * delta * std::sin(t)));
                                               },
                                               0.0, oracle::kPi, 16, 32);
    CHECK(rel(a_fn(j, beta, delta), ref) < 1e-11);
  }
  CHECK_THROWS_AS(a_fn(7, 3, 1.0), RangeError);
  CHECK_THROWS_AS(a_fn(1, 61, 1.0), RangeError);
  CHECK_THROWS_AS(a_fn(1, 3, 40.5), RangeError);
  CHECK_THROWS_AS(a_fn(1, 3, -1.0), DomainError);
}

TEST_CASE("A_j recursion identity") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> jd(0, 3), bd(0, 40);
  std::uniform_real_distribution<double> dd(0.1, 30.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int j = jd(rng), beta = bd(rng);
    const double delta = dd(rng);
    const double lhs = a_fn(j, beta + 1, delta);
    const double rhs = a_fn(j + 2, beta, delta) + (j + 1.0) / delta * a_fn(j + 1, beta, delta);
    INFO("j=" << j << " beta=" << beta << " delta=" << delta);
    CHECK(rel(lhs, rhs) < 1e-9);
  }
}

TEST_CASE("sss_eval") {
  const SssState s(30, kWorkedDelta);
  CHECK(std::abs(sss_eval(s, 0.0, 0.4)) == 0.0);
  CHECK(std::abs(sss_eval(s, oracle::kPi, 1.1)) < 1e-300);
  const double ratio = std::norm(sss_eval(s, oracle::kPi / 2, 0.0)) / std::norm(sss_eval(s, oracle::kPi / 2, oracle::kPi));
  CHECK(rel(ratio, std::exp(4.0 * kWorkedDelta)) < 1e-12);
  CHECK(std::abs(sss_eval(s, 1.2, 0.7)) == doctest::Approx(std::abs(sss_eval(s, 1.2, -0.7))).epsilon(1e-15));
  CHECK(std::abs(sphere_norm(s) - 1.0) < 1e-9);
  CHECK(std::abs(sphere_norm(SssState(0, 0.0)) - 1.0) < 1e-9);
  CHECK(std::abs(sphere_norm(SssState(7, 3.3)) - 1.0) < 1e-9);
  CHECK(std::abs(s.norm() - 1.0 / std::sqrt(a_fn(0, 30, kWorkedDelta))) < 1e-15 * s.norm());
  CHECK_THROWS_AS(SssState(-1, 1.0), DomainError);
  CHECK_THROWS_AS(SssState(2, -0.1), DomainError);
}

TEST_CASE("sss_expectations") {
  SUBCASE("eigenstate limit") {
    const auto e = sss_expectations(SssState(7, 0.0));
    CHECK(e.l3 == 7.0);
    CHECK(e.l3_sq == 49.0);
    CHECK(e.l_sq == 56.0);
    CHECK(e.a1 == 0.0);
    CHECK(std::abs(e.a1_sq + e.a2_sq + e.a3_sq - 1.0) < 1e-14);
  }
  SUBCASE("worked example") {
    const auto e = sss_expectations(SssState(30, kWorkedDelta));
    CHECK(std::abs(e.l_sq - 938.1) < 0.5);
    CHECK(std::abs(std::sqrt(e.l3_sq - 900.0) - 2.5) < 0.01);
    // l_bar (l_bar + 1) = <L^2>
    CHECK(std::abs((-1.0 + std::sqrt(1.0 + 4.0 * e.l_sq)) / 2.0 - 30.1) < 0.05);
  }
  SUBCASE("invariants across parameters") {
    for (int beta : {0, 1, 5, 30, 59})
      for (double delta : {0.0, 0.05, 1.0, 12.826, 39.0}) {
        const auto e = sss_expectations(SssState(beta, delta));
        INFO("beta=" << beta << " delta=" << delta);
        CHECK(std::abs(e.a1_sq + e.a2_sq + e.a3_sq - 1.0) < 1e-10);
        CHECK(e.l3_sq >= e.l3 * e.l3);
        CHECK(e.l_sq >= e.l3_sq - 1e-8);
        if (delta > 0.0) {
          // Delta a2 Delta L3 = <a1> / 2, with <a2> = 0.
          const double var = e.l3_sq - e.l3 * e.l3;
          const double product = std::sqrt(e.a2_sq) * std::sqrt(var);
          // var loses digits to the subtraction of beta^2
          CHECK(rel(product, 0.5 * e.a1) < 1e-12 + 1e-15 * e.l3_sq / var);
        }
      }
  }
  SUBCASE("against direct quadrature of chi") {
    const SssState s(4, 2.2);
    const auto e = sss_expectations(s);
    const int nphi = 128;
    auto avg = [&](auto g) {
      return oracle::integrate(
          [&](double theta) {
            double inner = 0.0;
            for (int k = 0; k < nphi; ++k) {
              const double phi = 2.0 * oracle::kPi * k / nphi;
              inner += std::norm(sss_eval(s, theta, phi)) * g(theta, phi);
            }
            return inner * (2.0 * oracle::kPi / nphi) * std::sin(theta);
          },
          0.0, oracle::kPi, 16, 32);
    };
    CHECK(rel(e.a1, avg([](double t, double p) { return std::sin(t) * std::cos(p); })) < 1e-10);
    CHECK(rel(e.a2_sq, avg([](double t, double p) { return std::pow(std::sin(t) * std::sin(p), 2); })) < 1e-10);
    CHECK(rel(e.a3_sq, avg([](double t, double) { return std::pow(std::cos(t), 2); })) < 1e-10);
  }
}

TEST_CASE("solve_delta") {
  CHECK(std::abs(solve_delta(30, 2.5) - 12.826) < 0.01);
  CHECK(std::abs(solve_delta(30, 2.5) - kWorkedDelta) < 1e-9);
  // small Delta L3: delta grows linearly
  const double d_small = solve_delta(30, 1e-4);
  CHECK(d_small > 0.0);
  CHECK(std::abs(solve_delta(30, 2e-4) / d_small - 2.0) < 1e-4);
  for (auto [beta, dl3] : {std::pair{10, 1.0}, std::pair{30, 2.5}, std::pair{50, 4.0}}) {
    const auto e = sss_expectations(SssState(beta, solve_delta(beta, dl3)));
    CHECK(std::abs(std::sqrt(e.l3_sq - e.l3 * e.l3) - dl3) < 1e-8);
  }
  CHECK_THROWS_AS(solve_delta(30, 10.0), InfeasibleError);
  CHECK_THROWS_AS(solve_delta(0, 1.0), DomainError);
  CHECK_THROWS_AS(solve_delta(5, -1.0), DomainError);
}

TEST_CASE("sss_coeff") {
  const SssState s(30, kWorkedDelta);
  SUBCASE("parity zeros") {
    for (int l = 25; l <= 40; ++l)
      for (int m = 20; m <= std::min(l, 35); ++m)
        if ((l - m) % 2) {
          CHECK(sss_coeff(s, l, m) == 0.0);
          CHECK(sss_coeff(s, l, m, AngularMethod::quadrature) == 0.0);
        }
  }
  SUBCASE("eigenstate limit") {
    const SssState e(6, 0.0);
    CHECK(sss_coeff(e, 6, 6) == 1.0);
    CHECK(sss_coeff(e, 8, 6) == 0.0);
    CHECK(sss_coeff(e, 6, 4) == 0.0);
    const SssState nearly(6, 1e-7);
    CHECK(std::abs(sss_coeff(nearly, 6, 6) - 1.0) < 1e-10);
    CHECK(std::abs(sss_coeff(nearly, 8, 6)) < 1e-6);
  }
  SUBCASE("closed form vs quadrature") {
    double worst = 0.0;
    for (int l = 25; l <= 40; ++l)
      for (int m = 20; m <= l; ++m) {
        if ((l - m) % 2) continue;
        worst = std::max(worst, std::abs(sss_coeff(s, l, m) - sss_coeff(s, l, m, AngularMethod::quadrature)));
      }
    CHECK(worst < 1e-8);
    // Against a 1D oracle built from
    // int e^{delta s cos phi + i (beta - m) phi} dphi = 2 pi I_{beta - m}(delta s).
    for (auto [l, m] : {std::pair{30, 30}, std::pair{32, 28}, std::pair{35, 33}, std::pair{40, 20}}) {
      const double norm_lm = std::sqrt((2.0 * l + 1.0) / (4.0 * oracle::kPi) *
                                       std::exp(std::lgamma(l - m + 1.0) - std::lgamma(l + m + 1.0)));
      const double ref = s.norm() * 2.0 * oracle::kPi * norm_lm *
                         oracle::integrate(
                             [&](double t) {
                               return boost::math::legendre_p(l, m, std::cos(t)) * std::pow(std::sin(t), 31) *
                                      static_cast<double>(oracle::bessel_i_series(std::abs(30 - m),
                                                                                  kWorkedDelta * std::sin(t)));
                             },
                             0.0, oracle::kPi, 16, 32);
      INFO("l=" << l << " m=" << m);
      CHECK(std::abs(sss_coeff(s, l, m) - ref) < 1e-10);
    }
  }
  SUBCASE("negative m via quadrature") {
    CHECK_THROWS_AS(sss_coeff(s, 30, -2), UnsupportedMethodError);
    const double c = sss_coeff(s, 30, -2, AngularMethod::quadrature);
    CHECK(std::abs(c) < 1e-6 * std::abs(sss_coeff(s, 30, 30)));
  }
  SUBCASE("completeness and L^2") {
    double total = 0.0, l2 = 0.0, m_mean = 0.0;
    for (int l = 0; l <= 70; ++l)
      for (int m = -l; m <= l; ++m) {
        if ((l - m) % 2) continue;
        const double c = m >= 0 ? sss_coeff(s, l, m) : sss_coeff(s, l, m, AngularMethod::quadrature);
        total += c * c;
        l2 += c * c * l * (l + 1.0);
        m_mean += c * c * m;
      }
    const auto e = sss_expectations(s);
    CHECK(std::abs(total - 1.0) < 1e-6);
    CHECK(rel(l2, e.l_sq) < 1e-6);
    CHECK(std::abs(m_mean - 30.0) < 1e-3);
  }
  SUBCASE("mass peaks at l = m = beta") {
    const double peak = std::abs(sss_coeff(s, 30, 30));
    for (int l = 30; l <= 36; l += 2) {
      double previous = HUGE_VAL;
      for (int m = l; m >= 20; m -= 2) {
        const double c = std::abs(sss_coeff(s, l, m));
        CHECK(c <= peak);
        if (m <= 30) {
          CHECK(c < previous);
          previous = c;
        }
      }
    }
  }
  CHECK_THROWS_AS(sss_coeff(s, 3, 4), DomainError);
}
