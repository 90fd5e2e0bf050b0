#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "checks.hpp"
#include "config.hpp"
#include "kss/errors.hpp"
#include "report.hpp"

namespace kss::cli {

namespace fs = std::filesystem;

namespace {

struct Flags {
  std::string config;
  std::string output;
  std::string format;
  std::string defects;
  std::string only;
  int workers = -1;
};

void add_common(CLI::App* cmd, Flags& f, bool config_required) {
  auto* opt = cmd->add_option("--config", f.config, "run configuration (JSON)");
  if (config_required) opt->required();
  cmd->add_option("--output", f.output, "output directory");
  cmd->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--defects", f.defects, "quantum defect table (JSON)");
  cmd->add_option("--workers", f.workers, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
}

RunConfig resolve(const Flags& f) {
  RunConfig c = f.config.empty() ? default_config() : load_config(f.config);
  if (!f.output.empty()) c.output_dir = f.output;
  if (!f.format.empty()) c.format = f.format;
  if (!f.defects.empty()) c.defects = f.defects;
  if (f.workers >= 0) c.workers = static_cast<unsigned>(f.workers);
  return c;
}

fs::path prepare_dir(const RunConfig& c) {
  const fs::path dir(c.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("I/O error: cannot create output directory " + dir.string());
  return dir;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("I/O error: cannot write " + p.string());
  return out;
}

void close_out(std::ofstream& out, const fs::path& p) {
  out.close();
  if (!out) throw ConfigError("I/O error: failed writing " + p.string());
}

int cmd_fit(const RunConfig& c, std::ostream& out) {
  const Fitted fit = run_fit(c);
  const fs::path dir = prepare_dir(c);
  const fs::path p = dir / "fit.json";
  auto f = open_out(p);
  f << to_json(fit.report).dump(2) << '\n';
  close_out(f, p);
  out << fit_table(fit.report) << "wrote " << p.string() << '\n';
  return kOk;
}

int cmd_expand(const RunConfig& c, std::ostream& out) {
  const Fitted fit = run_fit(c);
  const CoeffTable t = run_expand(c, fit);
  const fs::path dir = prepare_dir(c);
  const fs::path p = dir / (c.format == "json" ? "coefficients.json" : "coefficients.csv");
  auto f = open_out(p);
  if (c.format == "json") {
    f << coeffs_json(t).dump(1) << '\n';
  } else {
    write_coeffs_csv(f, t);
  }
  close_out(f, p);
  out << fmt::format("entries {}  parity zeros {}  skipped {}  captured norm {:.10f}  <E> {:.10e}\n",
                     t.entries.size(), t.parity_zeros, t.skipped, t.captured_norm, t.mean_energy());
  for (const auto& w : t.warnings) out << "warning: " << w << '\n';
  out << "wrote " << p.string() << '\n';
  return kOk;
}

int cmd_evolve(const RunConfig& c, std::ostream& out) {
  if (c.times.empty()) throw ConfigError("config: 'times' must be nonempty for evolve");
  const Fitted fit = run_fit(c);
  const CoeffTable t = run_expand(c, fit);
  RadialMatrixCache cache(table_r_max(t));
  const double t_cl = fit.geometry.t_cl;
  nlohmann::json rows = nlohmann::json::array();
  std::string csv = "t_au,t_over_tcl,r_mean,norm,energy\n";
  for (const auto& ts : c.times) {
    const double time = ts.resolve(t_cl);
    double norm = 0.0, energy = 0.0;
    for (const auto& e : t.entries) {
      const auto amp = e.c * std::exp(std::complex<double>(0.0, -e.energy * time));
      norm += std::norm(amp);
      energy += std::norm(amp) * e.energy;
    }
    energy /= norm;
    const double r = expectation_r_t(t, time, &cache);
    rows.push_back({{"t_au", time}, {"t_over_tcl", time / t_cl}, {"r_mean", r}, {"norm", norm}, {"energy", energy}});
    csv += num(time) + ',' + num(time / t_cl) + ',' + num(r) + ',' + num(norm) + ',' + num(energy) + '\n';
    out << fmt::format("t = {:.6g} a.u. ({:.4f} T_cl)  <r> = {:.4f}  norm = {:.12f}  <E> = {:.10e}\n", time,
                       time / t_cl, r, norm, energy);
  }
  const fs::path dir = prepare_dir(c);
  const fs::path p = dir / (c.format == "json" ? "evolve.json" : "evolve.csv");
  auto f = open_out(p);
  if (c.format == "json") {
    f << rows.dump(1) << '\n';
  } else {
    f << csv;
  }
  close_out(f, p);
  out << "wrote " << p.string() << '\n';
  return kOk;
}

int cmd_slice(const RunConfig& c, std::ostream& out) {
  if (c.times.empty()) throw ConfigError("config: 'times' must be nonempty for slice");
  const Fitted fit = run_fit(c);
  const CoeffTable t = run_expand(c, fit);
  const fs::path dir = prepare_dir(c);
  for (Plane plane : c.planes) {
    for (std::size_t k = 0; k < c.times.size(); ++k) {
      const double time = c.times[k].resolve(fit.geometry.t_cl);
      const SliceGrid g = density_slice(t, make_grid(c, fit, plane, time), c.workers);
      const std::string stem = "slice_" + plane_name(plane) + "_" + std::to_string(k);
      const fs::path p = dir / (stem + (c.format == "json" ? ".json" : ".csv"));
      auto f = open_out(p);
      if (c.format == "json") {
        f << slice_json(g).dump() << '\n';
      } else {
        write_slice_csv(f, g);
      }
      close_out(f, p);
      out << "wrote " << p.string() << " (t = " << num(time) << " a.u.)\n";
    }
  }
  return kOk;
}

int cmd_check(const RunConfig& c, const std::string& only, bool write_file, std::ostream& out, std::ostream& err) {
  std::optional<std::string> module;
  if (!only.empty()) {
    module = canonical_module(only);
    if (!module) throw ConfigError("--only: unknown module '" + only + "'");
  }
  const auto results = run_checks(c, module);
  for (const auto& r : results) {
    err << fmt::format("{} [{}] {}: {:.6g} ({} {:.3g})\n", r.pass ? "PASS" : "FAIL", r.module, r.name, r.value,
                       r.at_least ? ">=" : "<=", r.limit);
  }
  const auto report = checks_json(results);
  out << report.dump(2) << '\n';
  if (write_file) {
    const fs::path dir = prepare_dir(c);
    const fs::path p = dir / "check.json";
    auto f = open_out(p);
    f << report.dump(2) << '\n';
    close_out(f, p);
  }
  return report["passed"].get<bool>() ? kOk : kValidationFailed;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Keplerian squeezed states: fit, expand, evolve and slice Rydberg wave packets", "kss"};
  app.require_subcommand(1);
  Flags flags;
  auto* fit = app.add_subcommand("fit", "fit the five KSS parameters and write fit.json");
  auto* expand = app.add_subcommand("expand", "expand the fitted state in the eigenbasis");
  auto* evolve = app.add_subcommand("evolve", "<r>, norm and energy at the configured times");
  auto* slice = app.add_subcommand("slice", "density slices r^2 |Psi|^2 per plane and time");
  auto* check = app.add_subcommand("check", "run the validation suite");
  for (auto* cmd : {fit, expand, evolve, slice}) add_common(cmd, flags, true);
  add_common(check, flags, false);
  check->add_option("--only", flags.only, "specfun, angular, radial, kss or qdt");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    const RunConfig c = resolve(flags);
    if (*fit) return cmd_fit(c, out);
    if (*expand) return cmd_expand(c, out);
    if (*evolve) return cmd_evolve(c, out);
    if (*slice) return cmd_slice(c, out);
    return cmd_check(c, flags.only, !flags.output.empty(), out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const AccuracyError& e) {
    err << "numerical failure: " << e.what() << " (best estimate " << e.best_estimate() << ")\n";
    return kNumerical;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
}

}  // namespace kss::cli
