#include "config.hpp"

#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

namespace kss::cli {

using nlohmann::json;

namespace {

double parse_number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v)) throw ConfigError(what + ": cannot read \"" + s + "\"");
  return v;
}

double get_number(const json& doc, const char* key) {
  const auto& v = doc.at(key);
  if (!v.is_number()) throw ConfigError(std::string("config: field '") + key + "' must be a number");
  return v.get<double>();
}

double require_number(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ConfigError(std::string("config: missing required field '") + key + "'");
  return get_number(doc, key);
}

IntRange parse_range(const json& v, const std::string& name) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
    throw ConfigError("config: window." + name + " must be a pair of integers [lo, hi]");
  }
  IntRange r{v[0].get<int>(), v[1].get<int>()};
  if (r.lo > r.hi) throw ConfigError("config: window." + name + " has lo > hi");
  return r;
}

std::pair<double, double> parse_extent(const json& v, const std::string& name) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError("config: grid." + name + " must be [min, max]");
  }
  const double lo = v[0].get<double>(), hi = v[1].get<double>();
  if (!(lo < hi)) throw ConfigError("config: grid." + name + " needs min < max");
  return {lo, hi};
}

Plane parse_plane(const json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "XY" || s == "xy") return Plane::XY;
    if (s == "XZ" || s == "xz") return Plane::XZ;
  }
  throw ConfigError("config: planes entries must be \"XY\" or \"XZ\"");
}

}  // namespace

TimeSpec parse_time(const json& v) {
  if (v.is_number()) return {v.get<double>(), false};
  if (!v.is_string()) throw ConfigError("config: times entries must be numbers or strings");
  const std::string s = v.get<std::string>();
  static const std::regex tcl(R"(^\s*(?:([0-9.eE+-]+)\s*(?:/\s*([0-9.eE+-]+))?\s*\*?\s*)?T_?cl\s*$)",
                              std::regex::icase);
  std::smatch m;
  if (std::regex_match(s, m, tcl)) {
    double value = 1.0;
    if (m[1].matched) value = parse_number(m[1].str(), "time");
    if (m[2].matched) {
      const double den = parse_number(m[2].str(), "time");
      if (den == 0.0) throw ConfigError("time: zero denominator in \"" + s + "\"");
      value /= den;
    }
    return {value, true};
  }
  return {parse_number(s, "time"), false};
}

ExpansionWindow RunConfig::effective_window() const {
  if (window) return *window;
  return ExpansionWindow::standard(static_cast<int>(std::lround(init.n_bar)), init.l3_target);
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  RunConfig c;
  try {
    c.init.n_bar = require_number(doc, "n_bar");
    if (!doc.contains("l3")) throw ConfigError("config: missing required field 'l3'");
    if (!doc["l3"].is_number_integer()) throw ConfigError("config: field 'l3' must be an integer");
    c.init.l3_target = doc["l3"].get<int>();
    c.init.delta_l3 = require_number(doc, "delta_l3");
    if (!(c.init.n_bar > 0.0)) throw ConfigError("config: field 'n_bar' must be positive");
    if (c.init.l3_target < 1) throw ConfigError("config: field 'l3' must be positive");
    if (!(c.init.delta_l3 > 0.0)) throw ConfigError("config: field 'delta_l3' must be positive");
    if (doc.contains("p_r")) c.init.p_r_target = get_number(doc, "p_r");
    if (doc.contains("r_target")) {
      c.init.r_target = get_number(doc, "r_target");
      if (!(*c.init.r_target > 0.0)) throw ConfigError("config: field 'r_target' must be positive");
    }
    if (doc.contains("window")) {
      const auto& w = doc["window"];
      if (!w.is_object()) throw ConfigError("config: 'window' must be an object");
      ExpansionWindow win = c.effective_window();
      if (w.contains("n")) win.n = parse_range(w["n"], "n");
      if (w.contains("l")) win.l = parse_range(w["l"], "l");
      if (w.contains("m_mode")) {
        const auto mode = w["m_mode"].is_string() ? w["m_mode"].get<std::string>() : std::string();
        if (mode == "l_relative") {
          win.m_mode = MWindowMode::l_relative;
        } else if (mode == "absolute") {
          win.m_mode = MWindowMode::absolute;
          if (!w.contains("m")) win.m = {c.init.l3_target - 3, c.init.l3_target};
        } else {
          throw ConfigError("config: window.m_mode must be \"l_relative\" or \"absolute\"");
        }
      }
      if (w.contains("m")) win.m = parse_range(w["m"], "m");
      if (win.n.lo < 1 || win.l.lo < 0) throw ConfigError("config: window needs n >= 1 and l >= 0");
      if (win.n.hi > 120) throw ConfigError("config: window.n exceeds 120");
      c.window = win;
    }
    if (doc.contains("times")) {
      if (!doc["times"].is_array()) throw ConfigError("config: 'times' must be a list");
      for (const auto& t : doc["times"]) c.times.push_back(parse_time(t));
    }
    if (doc.contains("planes")) {
      if (!doc["planes"].is_array() || doc["planes"].empty()) {
        throw ConfigError("config: 'planes' must be a nonempty list");
      }
      c.planes.clear();
      for (const auto& p : doc["planes"]) c.planes.push_back(parse_plane(p));
    }
    if (doc.contains("grid")) {
      const auto& g = doc["grid"];
      if (!g.is_object()) throw ConfigError("config: 'grid' must be an object");
      if (g.contains("count")) {
        if (!g["count"].is_number_integer() || g["count"].get<int>() < 2) {
          throw ConfigError("config: grid.count must be an integer >= 2");
        }
        c.grid.count = g["count"].get<int>();
      }
      if (g.contains("extent")) {
        c.grid.extent = get_number(g, "extent");
        if (!(c.grid.extent > 0.0)) throw ConfigError("config: grid.extent must be positive");
      }
      if (g.contains("x")) c.grid.axis0 = parse_extent(g["x"], "x");
      if (g.contains("y")) c.grid.axis1 = parse_extent(g["y"], "y");
    }
    if (doc.contains("defects")) {
      if (!doc["defects"].is_string()) throw ConfigError("config: 'defects' must be a path");
      c.defects = doc["defects"].get<std::string>();
    }
    if (doc.contains("output_dir")) {
      if (!doc["output_dir"].is_string()) throw ConfigError("config: 'output_dir' must be a path");
      c.output_dir = doc["output_dir"].get<std::string>();
    }
    if (doc.contains("format")) {
      c.format = doc["format"].is_string() ? doc["format"].get<std::string>() : std::string();
      if (c.format != "csv" && c.format != "json") throw ConfigError("config: 'format' must be csv or json");
    }
    if (doc.contains("workers")) {
      if (!doc["workers"].is_number_unsigned()) throw ConfigError("config: 'workers' must be a non-negative integer");
      c.workers = doc["workers"].get<unsigned>();
    }
    if (doc.contains("angular_method")) {
      const auto m = doc["angular_method"].is_string() ? doc["angular_method"].get<std::string>() : std::string();
      if (m == "closed_form") {
        c.angular = AngularMethod::closed_form;
      } else if (m == "quadrature") {
        c.angular = AngularMethod::quadrature;
      } else {
        throw ConfigError("config: 'angular_method' must be closed_form or quadrature");
      }
    }
    if (doc.contains("inject")) {
      const auto& inj = doc["inject"];
      if (!inj.is_object()) throw ConfigError("config: 'inject' must be an object");
      if (inj.contains("norm_scale")) c.inject.norm_scale = get_number(inj, "norm_scale");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

RunConfig default_config() {
  RunConfig c;
  c.init.n_bar = 45;
  c.init.l3_target = 30;
  c.init.delta_l3 = 2.5;
  return c;
}

std::string plane_name(Plane p) { return p == Plane::XY ? "XY" : "XZ"; }

}  // namespace kss::cli
