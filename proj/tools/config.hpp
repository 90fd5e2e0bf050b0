#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "kss/kss.hpp"
#include "kss/qdt.hpp"

namespace kss::cli {

/// Bad command line or configuration document (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A time given in atomic units or as a multiple of the classical period.
struct TimeSpec {
  double value = 0.0;
  bool in_tcl = false;
  double resolve(double t_cl) const { return in_tcl ? value * t_cl : value; }
};

/// Parses 1000, "1000", "Tcl", "0.5 Tcl", "1/3 Tcl".
TimeSpec parse_time(const nlohmann::json& v);

struct GridConfig {
  int count = 201;
  double extent = 1.2;  // half-width in units of r_out
  std::optional<std::pair<double, double>> axis0;  // explicit [min, max] in a.u.
  std::optional<std::pair<double, double>> axis1;
};

struct FaultInjection {
  double norm_scale = 1.0;  // multiplies the SSS normalization constant
};

struct RunConfig {
  InitConditions init;
  std::optional<ExpansionWindow> window;  // default: ExpansionWindow::standard
  std::vector<TimeSpec> times;
  std::vector<Plane> planes{Plane::XY};
  GridConfig grid;
  std::optional<std::string> defects;
  std::string output_dir = ".";
  std::string format = "csv";
  unsigned workers = 0;
  AngularMethod angular = AngularMethod::closed_form;
  FaultInjection inject;

  ExpansionWindow effective_window() const;
};

/// Throws ConfigError naming the offending field.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// The worked scenario: n_bar = 45, <L3> = 30, Delta L3 = 2.5.
RunConfig default_config();

std::string plane_name(Plane p);

}  // namespace kss::cli
