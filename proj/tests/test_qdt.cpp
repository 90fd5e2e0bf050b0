#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kss/errors.hpp"
#include "kss/qdt.hpp"
#include "kss/specfun.hpp"
#include "oracles.hpp"

using namespace kss;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

InitConditions worked() {
  InitConditions c;
  c.n_bar = 45;
  c.l3_target = 30;
  c.delta_l3 = 2.5;
  return c;
}

DefectTable zero_table() { return DefectTable::from_json(R"({"defects": {"29": 0.0, "30": 0, "31": 0.0}})"); }
}  // namespace

TEST_CASE("DefectTable JSON") {
  const auto t = DefectTable::from_json(R"({"defects": {"0": 1.35, "1": 0.85, "2": 0.01}, "integer_shift": {"0": 1}})");
  CHECK(t.defect(0) == 1.35);
  CHECK(t.defect(1) == 0.85);
  CHECK(t.shift(0) == 1);
  CHECK(t.shift(1) == 0);
  std::vector<std::string> warnings;
  CHECK(t.defect(7, &warnings) == 0.0);
  CHECK(warnings.size() == 1);
  const auto back = DefectTable::from_json(t.to_json());
  CHECK(back.defects == t.defects);
  CHECK(back.integer_shift == t.integer_shift);
  CHECK(DefectTable::from_json("{}").all_zero());
  CHECK_THROWS_AS(DefectTable::from_json(R"({"defects": {"x": 1.0}})"), DomainError);
  CHECK_THROWS_AS(DefectTable::from_json(R"({"defects": {"0": -0.5}})"), DomainError);
  CHECK_THROWS_AS(DefectTable::from_json(R"({"integer_shift": {"0": 0.5}})"), DomainError);
  CHECK_THROWS_AS(DefectTable::from_json("[1, 2"), DomainError);
}

TEST_CASE("sqdt_energy") {
  DefectTable t;
  CHECK(sqdt_energy(45, 30, t) == energy_n(45));
  t.defects[30] = 0.5;
  CHECK(sqdt_energy(45, 30, t) == -0.5 / (44.5 * 44.5));
  double prev = sqdt_energy(45, 30, DefectTable{});
  for (double d : {0.1, 0.4, 1.3, 2.9}) {
    t.defects[30] = d;
    const double e = sqdt_energy(45, 30, t);
    CHECK(e < prev);
    prev = e;
  }
  t.defects[0] = 3.0;
  CHECK_THROWS_AS(sqdt_energy(3, 0, t), DomainError);
}

TEST_CASE("sqdt_labels and radial functions") {
  DefectTable t;
  t.defects[30] = 0.35;
  t.defects[0] = 1.35;
  t.integer_shift[0] = 1;
  SUBCASE("degree is an integer") {
    for (int n = 35; n <= 55; ++n)
      for (int l : {0, 30}) {
        const auto x = sqdt_labels(n, l, t);
        CHECK(x.degree == n - l - t.shift(l) - 1);
        CHECK(x.n_star - x.l_star - 1.0 == doctest::Approx(x.degree).epsilon(1e-13));
      }
    CHECK_THROWS_AS(sqdt_labels(5, 5, t), DomainError);
  }
  SUBCASE("reduction to hydrogen") {
    const DefectTable z = zero_table();
    for (int n : {31, 45, 60})
      for (double r : {0.0, 10.0, 800.0, 3500.0, 7000.0}) {
        const auto x = sqdt_labels(n, 30, z);
        const double h = specfun::hydro_radial(n, 30, r);
        CHECK(std::abs(sqdt_radial(x, r) - h) <= 1e-12 * std::abs(h));
      }
  }
  SUBCASE("normalization and orthogonality") {
    auto overlap = [&](int n1, int n2, int l) {
      const auto a = sqdt_labels(n1, l, t);
      const auto b = sqdt_labels(n2, l, t);
      return oracle::integrate([&](double r) { return sqdt_radial(a, r) * sqdt_radial(b, r) * r * r; }, 0.0,
                               4.0 * 56 * 56, 512, 32);
    };
    CHECK(std::abs(overlap(45, 45, 30) - 1.0) < 1e-8);
    for (int n1 = 40; n1 <= 50; n1 += 2)
      for (int n2 = n1; n2 <= 50; n2 += 3) {
        INFO("n1=" << n1 << " n2=" << n2);
        CHECK(std::abs(overlap(n1, n2, 30) - (n1 == n2 ? 1.0 : 0.0)) < 1e-7);
      }
    // shifted l* with I(l) = 1
    CHECK(std::abs(overlap(20, 20, 0) - 1.0) < 1e-8);
    CHECK(std::abs(overlap(20, 23, 0)) < 1e-7);
  }
}

TEST_CASE("sqdt_expand") {
  const KssState s = fit_params(worked());
  const auto w = ExpansionWindow::standard(45, 30);
  SUBCASE("zero defects reproduce the hydrogenic table") {
    const auto h = expand(s, w);
    const auto q = sqdt_expand(s, w, zero_table());
    REQUIRE(h.entries.size() == q.entries.size());
    CHECK(q.basis == RadialBasis::sqdt);
    for (std::size_t i = 0; i < h.entries.size(); ++i) {
      CHECK(std::abs(q.entries[i].c - h.entries[i].c) <= 1e-12 * std::abs(h.entries[i].c));
      CHECK(q.entries[i].energy == h.entries[i].energy);
    }
    CHECK(rel(q.captured_norm, h.captured_norm) < 1e-12);
    // l values missing from the table are reported
    CHECK(q.warnings.size() == 8);
  }
  SUBCASE("small defects") {
    DefectTable t;
    for (int l = 25; l <= 35; ++l) t.defects[l] = 0.05;
    const auto h = expand(s, w);
    const auto q = sqdt_expand(s, w, t);
    CHECK(q.warnings.empty());
    CHECK(std::abs(q.captured_norm - h.captured_norm) < 0.01 * h.captured_norm);
    const double e = q.mean_energy();
    CHECK(std::isfinite(e));
    for (const auto& x : q.entries) CHECK(x.energy == -0.5 / ((x.n - 0.05) * (x.n - 0.05)));
  }
}

TEST_CASE("fit_params_qdt") {
  SUBCASE("zero defects") {
    const auto a = fit_params(worked());
    const auto b = fit_params_qdt(worked(), zero_table());
    CHECK(a.rss.alpha() == b.rss.alpha());
    CHECK(a.rss.gamma0() == b.rss.gamma0());
    CHECK(a.rss.gamma1() == b.rss.gamma1());
    CHECK(a.sss.delta() == b.sss.delta());
  }
  SUBCASE("shifted n_bar") {
    DefectTable t;
    t.defects[30] = 0.5;
    const auto s = fit_params_qdt(worked(), t);
    CHECK(std::abs(kss_energy(s) + 0.5 / (44.5 * 44.5)) < 1e-9);
    const auto geo = orbit_geometry(44.5, sss_expectations(s.sss).l_sq);
    CHECK(rel(rss_expectations(s.rss).r_mean, geo.r_out) < 1e-12);
    CHECK(sqdt_n_bar(worked(), t) == 44.5);
  }
}
