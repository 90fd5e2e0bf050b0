#include "report.hpp"

#include <fmt/format.h>

#include "kss/errors.hpp"

namespace kss::cli {

using nlohmann::json;

json to_json(const FitReport& r) {
  json j;
  j["alpha"] = r.alpha;
  j["beta"] = r.beta;
  j["gamma0"] = r.gamma0;
  j["gamma1"] = r.gamma1;
  j["delta"] = r.delta;
  j["r_out"] = r.r_out;
  j["r_in"] = r.r_in;
  j["t_cl_au"] = r.t_cl_au;
  j["l_sq"] = r.l_sq;
  j["energy"] = r.energy;
  if (r.n_star) j["n_star"] = *r.n_star;
  if (r.energy_n_star) j["energy_n_star"] = *r.energy_n_star;
  return j;
}

FitReport fit_report_from_json(const json& j) {
  FitReport r;
  r.alpha = j.at("alpha").get<double>();
  r.beta = j.at("beta").get<int>();
  r.gamma0 = j.at("gamma0").get<double>();
  r.gamma1 = j.at("gamma1").get<double>();
  r.delta = j.at("delta").get<double>();
  r.r_out = j.at("r_out").get<double>();
  r.r_in = j.at("r_in").get<double>();
  r.t_cl_au = j.at("t_cl_au").get<double>();
  r.l_sq = j.at("l_sq").get<double>();
  r.energy = j.at("energy").get<double>();
  if (j.contains("n_star")) r.n_star = j["n_star"].get<double>();
  if (j.contains("energy_n_star")) r.energy_n_star = j["energy_n_star"].get<double>();
  return r;
}

Fitted run_fit(const RunConfig& cfg) {
  std::optional<DefectTable> defects;
  if (cfg.defects) {
    try {
      defects = DefectTable::load(*cfg.defects);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  const double n_eff = defects ? sqdt_n_bar(cfg.init, *defects) : cfg.init.n_bar;
  const KssState state = defects ? fit_params_qdt(cfg.init, *defects) : fit_params(cfg.init);
  const double l_sq = sss_expectations(state.sss).l_sq;
  const OrbitGeometry geo = orbit_geometry(n_eff, l_sq);
  FitReport r;
  r.alpha = state.rss.alpha();
  r.beta = state.sss.beta();
  r.gamma0 = state.rss.gamma0();
  r.gamma1 = state.rss.gamma1();
  r.delta = state.sss.delta();
  r.r_out = geo.r_out;
  r.r_in = geo.r_in;
  r.t_cl_au = geo.t_cl;
  r.l_sq = l_sq;
  r.energy = kss_energy(state);
  if (defects) {
    r.n_star = n_eff;
    r.energy_n_star = -0.5 / (n_eff * n_eff);
  }
  return Fitted{state, geo, r, defects};
}

CoeffTable run_expand(const RunConfig& cfg, const Fitted& fit) {
  ExpandOptions opt;
  opt.workers = cfg.workers;
  opt.angular = cfg.angular;
  const auto window = cfg.effective_window();
  if (fit.defects) return sqdt_expand(fit.state, window, *fit.defects, opt);
  return expand(fit.state, window, opt);
}

SliceGrid make_grid(const RunConfig& cfg, const Fitted& fit, Plane plane, double t) {
  SliceGrid g = default_grid(plane, fit.geometry.r_out, cfg.grid.count);
  const double half = cfg.grid.extent * fit.geometry.r_out;
  g.axis0 = {-half, half, cfg.grid.count};
  g.axis1 = g.axis0;
  if (cfg.grid.axis0) g.axis0 = {cfg.grid.axis0->first, cfg.grid.axis0->second, cfg.grid.count};
  if (cfg.grid.axis1) g.axis1 = {cfg.grid.axis1->first, cfg.grid.axis1->second, cfg.grid.count};
  g.time = t;
  return g;
}

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string fit_table(const FitReport& r) {
  std::string s;
  auto row = [&](const char* name, double v, const char* unit) {
    s += fmt::format("  {:<14} {:>24.12g}  {}\n", name, v, unit);
  };
  s += "KSS parameters\n";
  row("alpha", r.alpha, "");
  row("beta", r.beta, "");
  row("gamma0", r.gamma0, "1/a0");
  row("gamma1", r.gamma1, "a.u. momentum");
  row("delta", r.delta, "");
  s += "Orbit\n";
  row("r_out", r.r_out, "a0");
  row("r_in", r.r_in, "a0");
  row("T_cl", r.t_cl_au, "a.u. time");
  row("<L^2>", r.l_sq, "");
  row("<H>", r.energy, "hartree");
  if (r.n_star) row("n_bar*", *r.n_star, "");
  if (r.energy_n_star) row("E_n_bar*", *r.energy_n_star, "hartree");
  return s;
}

void write_coeffs_csv(std::ostream& out, const CoeffTable& t) {
  out << "# basis=" << (t.basis == RadialBasis::hydrogenic ? "hydrogenic" : "sqdt") << " entries=" << t.entries.size()
      << " parity_zeros=" << t.parity_zeros << " skipped=" << t.skipped << " captured_norm=" << num(t.captured_norm)
      << "\n";
  for (const auto& w : t.warnings) out << "# warning: " << w << "\n";
  out << "n,l,m,re,im,energy\n";
  for (const auto& e : t.entries) {
    out << e.n << ',' << e.l << ',' << e.m << ',' << num(e.c.real()) << ',' << num(e.c.imag()) << ','
        << num(e.energy) << '\n';
  }
}

json coeffs_json(const CoeffTable& t) {
  json j;
  j["basis"] = t.basis == RadialBasis::hydrogenic ? "hydrogenic" : "sqdt";
  j["captured_norm"] = t.captured_norm;
  j["parity_zeros"] = t.parity_zeros;
  j["skipped"] = t.skipped;
  j["window"] = {{"n", {t.window.n.lo, t.window.n.hi}},
                 {"l", {t.window.l.lo, t.window.l.hi}},
                 {"m", {t.window.m.lo, t.window.m.hi}},
                 {"m_mode", t.window.m_mode == MWindowMode::l_relative ? "l_relative" : "absolute"}};
  j["warnings"] = t.warnings;
  json entries = json::array();
  for (const auto& e : t.entries) {
    entries.push_back({{"n", e.n}, {"l", e.l}, {"m", e.m}, {"re", e.c.real()}, {"im", e.c.imag()}, {"energy", e.energy}});
  }
  j["entries"] = std::move(entries);
  return j;
}

void write_slice_csv(std::ostream& out, const SliceGrid& g) {
  const char* b = g.plane == Plane::XY ? "y" : "z";
  out << "# plane=" << plane_name(g.plane) << " t=" << num(g.time) << " x_min=" << num(g.axis0.min)
      << " x_max=" << num(g.axis0.max) << " x_count=" << g.axis0.count << ' ' << b << "_min=" << num(g.axis1.min)
      << ' ' << b << "_max=" << num(g.axis1.max) << ' ' << b << "_count=" << g.axis1.count << "\n";
  out << "x," << b << ",value\n";
  for (int j = 0; j < g.axis1.count; ++j)
    for (int i = 0; i < g.axis0.count; ++i)
      out << num(g.axis0.at(i)) << ',' << num(g.axis1.at(j)) << ',' << num(g.at(i, j)) << '\n';
}

json slice_json(const SliceGrid& g) {
  const char* b = g.plane == Plane::XY ? "y" : "z";
  json j;
  j["plane"] = plane_name(g.plane);
  j["t"] = g.time;
  j["x"] = {{"min", g.axis0.min}, {"max", g.axis0.max}, {"count", g.axis0.count}};
  j[b] = {{"min", g.axis1.min}, {"max", g.axis1.max}, {"count", g.axis1.count}};
  json rows = json::array();
  for (int r = 0; r < g.axis1.count; ++r) {
    json row = json::array();
    for (int i = 0; i < g.axis0.count; ++i) row.push_back(g.at(i, r));
    rows.push_back(std::move(row));
  }
  j["values"] = std::move(rows);
  return j;
}

}  // namespace kss::cli
