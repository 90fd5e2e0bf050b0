#include "checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "kss/quadrature.hpp"
#include "kss/specfun.hpp"

namespace kss::cli {

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

class Suite {
 public:
  Suite(std::string module, std::vector<CheckResult>& out) : module_(std::move(module)), out_(out) {}
  void at_most(const std::string& name, double value, double limit) { add(name, value, limit, false); }
  void at_least(const std::string& name, double value, double limit) { add(name, value, limit, true); }

 private:
  void add(const std::string& name, double value, double limit, bool ge) {
    const bool pass = std::isfinite(value) && (ge ? value >= limit : value <= limit);
    out_.push_back({module_, name, value, limit, ge, pass});
  }
  std::string module_;
  std::vector<CheckResult>& out_;
};

InitConditions worked() {
  InitConditions c;
  c.n_bar = 45;
  c.l3_target = 30;
  c.delta_l3 = 2.5;
  return c;
}

void specfun_checks(Suite& s) {
  int bad = 0;
  for (int j = 0; j <= 10; ++j)
    for (double x : {0.01, 0.5, 3.0, 25.6, 120.0, 600.0}) bad += !(specfun::bessel_i(j, x) > 0.0);
  for (int j = 0; j <= 10; ++j) bad += specfun::bessel_i(j, 0.0) != (j == 0 ? 1.0 : 0.0);
  s.at_most("bessel_i positive, I_j(0) = delta_j0 (violations)", bad, 0);

  double worst = 0.0;
  for (int n = 1; n <= 59; ++n)
    for (double z : {0.5, 2.0, 10.0, 25.652, 60.0}) {
      const double lhs = specfun::sph_bessel_i_scaled(n - 1, z) - specfun::sph_bessel_i_scaled(n + 1, z);
      const double rhs = (2.0 * n + 1.0) / z * specfun::sph_bessel_i_scaled(n, z);
      worst = std::max(worst, rel(lhs, rhs));
    }
  s.at_most("sph_bessel_i recurrence residual", worst, 1e-10);

  const auto rule = composite_gauss_legendre(96, 64, 0.0, 4.0 * 55 * 55);
  worst = 0.0;
  for (int l : {20, 30, 40}) {
    std::vector<std::vector<double>> f;
    const int n0 = std::max(35, l + 1);
    for (int n = n0; n <= 55; ++n) {
      std::vector<double> v(rule.size());
      for (std::size_t i = 0; i < rule.size(); ++i) v[i] = specfun::hydro_radial(n, l, rule.nodes[i]) * rule.nodes[i];
      f.push_back(std::move(v));
    }
    for (std::size_t a = 0; a < f.size(); ++a)
      for (std::size_t b = a; b < f.size(); ++b) {
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * f[a][i] * f[b][i];
        worst = std::max(worst, std::abs(sum - (a == b ? 1.0 : 0.0)));
      }
  }
  s.at_most("hydrogenic radial Gram matrix, n in [35,55]", worst, 1e-8);

  const int l_max = 12;
  const auto xr = gauss_legendre(l_max + 2, -1.0, 1.0);
  const int nphi = 2 * l_max + 2;
  worst = 0.0;
  for (int l1 = 0; l1 <= l_max; ++l1)
    for (int m1 = -l1; m1 <= l1; ++m1)
      for (int l2 = l1; l2 <= l_max; ++l2)
        for (int m2 = -l2; m2 <= l2; ++m2) {
          std::complex<double> sum = 0.0;
          for (std::size_t i = 0; i < xr.size(); ++i) {
            const double th = std::acos(xr.nodes[i]);
            for (int k = 0; k < nphi; ++k) {
              const double ph = 2.0 * kPi * k / nphi;
              sum += xr.weights[i] * (2.0 * kPi / nphi) * std::conj(specfun::sph_harm(l1, m1, th, ph)) *
                     specfun::sph_harm(l2, m2, th, ph);
            }
          }
          worst = std::max(worst, std::abs(sum - ((l1 == l2 && m1 == m2) ? 1.0 : 0.0)));
        }
  s.at_most("spherical harmonic Gram matrix, l <= 12", worst, 1e-9);
}

void angular_checks(Suite& s, const RunConfig& cfg) {
  const double delta = solve_delta(30, 2.5);
  const SssState base(30, delta);
  const SssState state =
      cfg.inject.norm_scale == 1.0 ? base : SssState::with_norm(30, delta, base.norm() * cfg.inject.norm_scale);
  const auto rule = gauss_legendre(128, 0.0, kPi);
  const int nphi = 256;
  double norm = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double th = rule.nodes[i];
    double inner = 0.0;
    for (int k = 0; k < nphi; ++k) inner += std::norm(sss_eval(state, th, 2.0 * kPi * k / nphi));
    norm += rule.weights[i] * std::sin(th) * inner * 2.0 * kPi / nphi;
  }
  s.at_most("SSS norm by quadrature, |1 - norm|", std::abs(norm - 1.0), 1e-9);

  double sum_dev = 0.0, sat = 0.0;
  for (int beta : {0, 1, 5, 30, 59})
    for (double d : {0.0, 0.05, 1.0, 12.826, 39.0}) {
      const auto e = sss_expectations(SssState(beta, d));
      sum_dev = std::max(sum_dev, std::abs(e.a1_sq + e.a2_sq + e.a3_sq - 1.0));
      if (beta >= 1 && d >= 1.0) {
        const double product = std::sqrt(e.a2_sq) * std::sqrt(e.l3_sq - e.l3 * e.l3);
        sat = std::max(sat, rel(product, 0.5 * e.a1));
      }
    }
  s.at_most("sum of <a_j^2> minus 1", sum_dev, 1e-10);
  s.at_most("Delta a2 Delta L3 = <a1>/2, relative", sat, 1e-12);

  std::mt19937 rng(20240611u);
  std::uniform_int_distribution<int> jd(0, 3), bd(0, 40);
  std::uniform_real_distribution<double> dd(0.1, 30.0);
  double ident = 0.0;
  for (int k = 0; k < 200; ++k) {
    const int j = jd(rng), b = bd(rng);
    const double d = dd(rng);
    const double lhs = a_fn(j, b + 1, d);
    const double rhs = a_fn(j + 2, b, d) + (j + 1) / d * a_fn(j + 1, b, d);
    ident = std::max(ident, rel(lhs, rhs));
  }
  s.at_most("A_j^(beta+1) recurrence identity, relative", ident, 1e-9);

  double lim = 0.0;
  for (int beta : {0, 1, 7, 30, 60}) {
    const auto e = sss_expectations(SssState(beta, 0.0));
    lim = std::max(lim, std::abs(e.l3_sq - double(beta) * beta));
    lim = std::max(lim, std::abs(e.l_sq - double(beta) * (beta + 1)));
  }
  s.at_most("delta -> 0 limits of <L3^2>, <L^2>", lim, 0.0);

  double coeff = 0.0;
  for (int l = 30; l <= 40; ++l)
    for (int m = 27; m <= 30; ++m)
      coeff = std::max(coeff, std::abs(sss_coeff(base, l, m, AngularMethod::closed_form) -
                                       sss_coeff(base, l, m, AngularMethod::quadrature)));
  s.at_most("c_lm closed form vs quadrature, worked window", coeff, 1e-8);
}

void radial_checks(Suite& s) {
  double norm_dev = 0.0, moment_dev = 0.0;
  int below = 0;
  for (double a : {5.0, 30.0, 63.0})
    for (double g0 : {0.018, 0.1, 0.5})
      for (double g1 : {0.0, 0.05, 0.2}) {
        const RssState st(a, g0, g1);
        const auto e = rss_expectations(st);
        const auto rule = composite_gauss_legendre(64, 64, 0.0, st.support_radius());
        double m[7] = {0, 0, 0, 0, 0, 0, 0};
        for (std::size_t i = 0; i < rule.size(); ++i) {
          const double r = rule.nodes[i];
          const auto psi = rss_eval(st, r);
          const double w = rule.weights[i] * std::norm(psi) * r * r;
          // p_r psi = -i (psi' + psi / r), psi' = (alpha / r - gamma0 - i gamma1) psi
          const std::complex<double> p_psi =
              std::complex<double>(0.0, -1.0) * ((a + 1.0) / r - g0 - std::complex<double>(0.0, g1)) * psi;
          m[0] += w;
          m[1] += w * r;
          m[2] += w / r;
          m[3] += w * r * r;
          m[4] += w / (r * r);
          m[5] += rule.weights[i] * r * r * (std::conj(psi) * p_psi).real();
          m[6] += rule.weights[i] * r * r * std::norm(p_psi);
        }
        norm_dev = std::max(norm_dev, std::abs(m[0] - 1.0));
        for (auto [q, c] : {std::pair{m[1], e.r_mean}, {m[2], e.r_inv}, {m[3], e.r_sq}, {m[4], e.r_inv_sq},
                            {m[6], e.p_r_sq}})
          moment_dev = std::max(moment_dev, rel(q, c));
        moment_dev = std::max(moment_dev, std::abs(m[5] - e.p_r) / std::sqrt(e.p_r_sq));
        below += !(e.dr_dpr >= 0.5);
      }
  s.at_most("RSS norm by quadrature, 27-point lattice", norm_dev, 1e-9);
  s.at_most("RSS closed-form moments vs quadrature, relative", moment_dev, 1e-8);
  s.at_most("Delta r Delta p_r >= 1/2 (violations)", below, 0);
}

void kss_checks(Suite& s, const RunConfig& cfg) {
  const KssState fitted = fit_params(worked());
  s.at_most("fit |alpha - 62.846|", std::abs(fitted.rss.alpha() - 62.846), 0.3);
  s.at_most("fit |gamma0 - 0.01834|", std::abs(fitted.rss.gamma0() - 0.01834), 1e-4);
  s.at_most("fit |gamma1|", std::abs(fitted.rss.gamma1()), 0.0);
  s.at_most("fit |delta - 12.826|", std::abs(fitted.sss.delta() - 12.826), 0.06);
  s.at_most("fit |beta - 30|", std::abs(fitted.sss.beta() - 30), 0.0);

  const auto a = sss_expectations(fitted.sss);
  const auto r = rss_expectations(fitted.rss);
  s.at_most("|<r> - 3508.6|", std::abs(r.r_mean - 3508.6), 2.0);
  s.at_most("|<L^2> - 938.1|", std::abs(a.l_sq - 938.1), 1.0);
  s.at_most("|l_bar - 30.1|", std::abs((std::sqrt(1.0 + 4.0 * a.l_sq) - 1.0) / 2.0 - 30.1), 0.05);
  s.at_most("|<H> + 2.4691e-4|", std::abs(kss_energy(fitted) + 2.4691e-4), 1e-7);

  const KssState state =
      cfg.inject.norm_scale == 1.0
          ? fitted
          : KssState{fitted.rss, SssState::with_norm(30, fitted.sss.delta(), fitted.sss.norm() * cfg.inject.norm_scale)};
  s.at_most("KSS product norm, |1 - norm|", std::abs(kss_norm(state) - 1.0), 1e-8);

  ExpandOptions opt;
  opt.workers = cfg.workers;
  const CoeffTable t = expand(fitted, ExpansionWindow::standard(45, 30), opt);
  s.at_most("standard window |entries - 484|", std::abs(double(t.entries.size()) - 484.0), 0.0);
  s.at_most("standard window |parity zeros - 242|", std::abs(double(t.parity_zeros) - 242.0), 0.0);
  s.at_least("standard window captured norm", t.captured_norm, 0.95);

  const auto geo = orbit_geometry(45, a.l_sq);
  double norm_drift = 0.0, energy_drift = 0.0;
  for (double f : {0.25, 0.5, 1.0, 3.0}) {
    double n = 0.0, e = 0.0;
    for (const auto& x : t.entries) {
      const auto c = x.c * std::exp(std::complex<double>(0.0, -x.energy * f * geo.t_cl));
      n += std::norm(c);
      e += std::norm(c) * x.energy;
    }
    norm_drift = std::max(norm_drift, rel(n, t.captured_norm));
    energy_drift = std::max(energy_drift, rel(e / n, t.mean_energy()));
  }
  s.at_most("norm drift under evolution", norm_drift, 1e-12);
  s.at_most("energy drift under evolution", energy_drift, 1e-5);

  RadialMatrixCache cache(table_r_max(t));
  s.at_most("<r>(0) vs r_out, relative", rel(expectation_r_t(t, 0.0, &cache), geo.r_out), 0.02);

  const auto g = density_slice(t, default_grid(Plane::XZ, geo.r_out), cfg.workers);
  double neg = 0.0;
  std::size_t best = 0;
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    neg += g.values[i] < 0.0;
    if (g.values[i] > g.values[best]) best = i;
  }
  const double cell = g.axis0.at(1) - g.axis0.at(0);
  const double x = g.axis0.at(static_cast<int>(best % g.axis0.count));
  const double z = g.axis1.at(static_cast<int>(best / g.axis0.count));
  s.at_most("negative density cells", neg, 0.0);
  s.at_most("XZ t=0 argmax |x - r_out| in cells", std::abs(x - geo.r_out) / cell, 1.0);
  s.at_most("XZ t=0 argmax |z| in cells", std::abs(z) / cell, 1.0);
}

void qdt_checks(Suite& s, const RunConfig& cfg) {
  DefectTable zero;
  for (int l = 20; l <= 40; ++l) zero.defects[l] = 0.0;
  double red = 0.0;
  for (int n : {35, 45, 55})
    for (int l : {20, 30})
      for (double r : {5.0, 500.0, 3000.0, 6000.0}) {
        const double h = specfun::hydro_radial(n, l, r);
        red = std::max(red, std::abs(sqdt_radial(sqdt_labels(n, l, zero), r) - h) / std::max(std::abs(h), 1e-300));
        red = std::max(red, rel(sqdt_energy(n, l, zero), energy_n(n)));
      }
  const KssState fitted = fit_params(worked());
  const KssState fitted_q = fit_params_qdt(worked(), zero);
  red = std::max(red, rel(fitted_q.rss.alpha(), fitted.rss.alpha()));
  red = std::max(red, rel(fitted_q.rss.gamma0(), fitted.rss.gamma0()));
  ExpandOptions opt;
  opt.workers = cfg.workers;
  const ExpansionWindow w{{43, 47}, {28, 32}, {-3, 0}, MWindowMode::l_relative};
  const auto h = expand(fitted, w, opt);
  const auto q = sqdt_expand(fitted, w, zero, opt);
  for (std::size_t i = 0; i < h.entries.size(); ++i) {
    red = std::max(red, std::abs(h.entries[i].c - q.entries[i].c) / std::max(std::abs(h.entries[i].c), 1e-300));
  }
  s.at_most("zero defects reproduce hydrogen, relative", red, 1e-12);

  DefectTable shifted;
  shifted.defects[30] = 0.5;
  const KssState sq = fit_params_qdt(worked(), shifted);
  s.at_most("delta(30) = 0.5 fitted |<H> + 1/(2 44.5^2)|", std::abs(kss_energy(sq) + 0.5 / (44.5 * 44.5)), 1e-9);

  DefectTable t;
  t.defects[30] = 0.35;
  const auto rule = composite_gauss_legendre(96, 64, 0.0, 4.0 * 51 * 51);
  double gram = 0.0;
  for (int n1 = 40; n1 <= 50; ++n1)
    for (int n2 = n1; n2 <= 50; ++n2) {
      const auto a = sqdt_labels(n1, 30, t), b = sqdt_labels(n2, 30, t);
      double sum = 0.0;
      for (std::size_t i = 0; i < rule.size(); ++i) {
        const double r = rule.nodes[i];
        sum += rule.weights[i] * sqdt_radial(a, r) * sqdt_radial(b, r) * r * r;
      }
      gram = std::max(gram, std::abs(sum - (n1 == n2 ? 1.0 : 0.0)));
    }
  s.at_most("SQDT radial Gram matrix, delta = 0.35", gram, 1e-7);
}

}  // namespace

std::optional<std::string> canonical_module(const std::string& name) {
  if (name == "specfun") return "specfun";
  if (name == "angular" || name == "angular-sss") return "angular";
  if (name == "radial" || name == "radial-rss") return "radial";
  if (name == "kss" || name == "kss-core") return "kss";
  if (name == "qdt") return "qdt";
  return std::nullopt;
}

std::vector<CheckResult> run_checks(const RunConfig& cfg, const std::optional<std::string>& only) {
  std::vector<CheckResult> out;
  auto want = [&](const char* m) { return !only || *only == m; };
  if (want("specfun")) {
    Suite s("specfun", out);
    specfun_checks(s);
  }
  if (want("angular")) {
    Suite s("angular", out);
    angular_checks(s, cfg);
  }
  if (want("radial")) {
    Suite s("radial", out);
    radial_checks(s);
  }
  if (want("kss")) {
    Suite s("kss", out);
    kss_checks(s, cfg);
  }
  if (want("qdt")) {
    Suite s("qdt", out);
    qdt_checks(s, cfg);
  }
  return out;
}

nlohmann::json checks_json(const std::vector<CheckResult>& results) {
  nlohmann::json list = nlohmann::json::array();
  bool all = true;
  for (const auto& r : results) {
    list.push_back({{"module", r.module},
                    {"name", r.name},
                    {"value", r.value},
                    {"limit", r.limit},
                    {"compare", r.at_least ? ">=" : "<="},
                    {"pass", r.pass}});
    all = all && r.pass;
  }
  return {{"checks", list}, {"passed", all}};
}

}  // namespace kss::cli
