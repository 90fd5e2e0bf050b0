#pragma once

#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "config.hpp"

namespace kss::cli {

struct FitReport {
  double alpha = 0.0;
  int beta = 0;
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  double delta = 0.0;
  double r_out = 0.0;
  double r_in = 0.0;
  double t_cl_au = 0.0;
  double l_sq = 0.0;
  double energy = 0.0;
  std::optional<double> n_star;         // with a defect table
  std::optional<double> energy_n_star;  // -1 / (2 n_star^2)

  bool operator==(const FitReport&) const = default;
};

nlohmann::json to_json(const FitReport& r);
FitReport fit_report_from_json(const nlohmann::json& j);

struct Fitted {
  KssState state;
  OrbitGeometry geometry;
  FitReport report;
  std::optional<DefectTable> defects;
};

/// Fits the configured conditions (SQDT variant when defects are present).
Fitted run_fit(const RunConfig& cfg);

CoeffTable run_expand(const RunConfig& cfg, const Fitted& fit);

SliceGrid make_grid(const RunConfig& cfg, const Fitted& fit, Plane plane, double t);

/// Shortest decimal form that keeps 17 significant digits.
std::string num(double v);

std::string fit_table(const FitReport& r);

void write_coeffs_csv(std::ostream& out, const CoeffTable& t);
nlohmann::json coeffs_json(const CoeffTable& t);

void write_slice_csv(std::ostream& out, const SliceGrid& g);
nlohmann::json slice_json(const SliceGrid& g);

}  // namespace kss::cli
