#include "kss/qdt.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kss/errors.hpp"
#include "kss/specfun.hpp"

namespace kss {

namespace {

int parse_l(const std::string& key) {
  std::size_t used = 0;
  int l = -1;
  try {
    l = std::stoi(key, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != key.size() || l < 0) throw DomainError("defect table: key \"" + key + "\" is not an l value");
  return l;
}

}  // namespace

double DefectTable::defect(int l, std::vector<std::string>* warnings) const {
  const auto it = defects.find(l);
  if (it != defects.end()) return it->second;
  if (warnings) warnings->push_back("no quantum defect for l=" + std::to_string(l) + "; using 0");
  return 0.0;
}

int DefectTable::shift(int l) const {
  const auto it = integer_shift.find(l);
  return it == integer_shift.end() ? 0 : it->second;
}

bool DefectTable::all_zero() const {
  for (const auto& [l, d] : defects)
    if (d != 0.0) return false;
  for (const auto& [l, i] : integer_shift)
    if (i != 0) return false;
  return true;
}

DefectTable DefectTable::from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(std::string("defect table: ") + e.what());
  }
  if (!doc.is_object()) throw DomainError("defect table: top level must be an object");
  DefectTable t;
  if (doc.contains("defects")) {
    const auto& d = doc["defects"];
    if (!d.is_object()) throw DomainError("defect table: \"defects\" must be an object");
    for (const auto& [key, value] : d.items()) {
      if (!value.is_number()) throw DomainError("defect table: defect for l=" + key + " is not a number");
      const double v = value.get<double>();
      if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("defect table: defect for l=" + key + " must be >= 0");
      t.defects[parse_l(key)] = v;
    }
  }
  if (doc.contains("integer_shift")) {
    const auto& s = doc["integer_shift"];
    if (!s.is_object()) throw DomainError("defect table: \"integer_shift\" must be an object");
    for (const auto& [key, value] : s.items()) {
      if (!value.is_number_integer()) throw DomainError("defect table: shift for l=" + key + " is not an integer");
      t.integer_shift[parse_l(key)] = value.get<int>();
    }
  }
  return t;
}

DefectTable DefectTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("defect table: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

std::string DefectTable::to_json() const {
  nlohmann::json doc;
  doc["defects"] = nlohmann::json::object();
  doc["integer_shift"] = nlohmann::json::object();
  for (const auto& [l, d] : defects) doc["defects"][std::to_string(l)] = d;
  for (const auto& [l, i] : integer_shift) doc["integer_shift"][std::to_string(l)] = i;
  return doc.dump();
}

SqdtLabels sqdt_labels(int n, int l, const DefectTable& table) {
  if (n < 1 || l < 0) throw DomainError("sqdt_labels: need n >= 1 and l >= 0");
  const double d = table.defect(l);
  const int shift = table.shift(l);
  SqdtLabels x;
  x.n_star = n - d;
  x.l_star = l - d + shift;
  x.degree = n - l - shift - 1;
  if (x.degree < 0 || !(x.n_star > x.l_star) || !(x.l_star > -1.0)) {
    throw DomainError("sqdt_labels: invalid labels for n=" + std::to_string(n) + " l=" + std::to_string(l));
  }
  return x;
}

double sqdt_energy(int n, int l, const DefectTable& table) {
  const double n_star = n - table.defect(l);
  if (!(n_star > 0.0)) throw DomainError("sqdt_energy: n* = " + std::to_string(n_star) + " must be positive");
  return -0.5 / (n_star * n_star);
}

double sqdt_radial(const SqdtLabels& labels, double r) {
  return specfun::coulomb_radial(labels.n_star, labels.l_star, labels.degree, r);
}

CoeffTable sqdt_expand(const KssState& state, const ExpansionWindow& window, const DefectTable& table,
                       const ExpandOptions& opt) {
  std::vector<std::string> warnings;
  for (int l = std::max(window.l.lo, 0); l <= window.l.hi; ++l) table.defect(l, &warnings);
  auto labels = [&](int n, int l) -> std::optional<RadialLabels> {
    if (n > 120) throw RangeError("sqdt_expand: n > 120 unsupported");
    try {
      return sqdt_labels(n, l, table);
    } catch (const DomainError&) {
      return std::nullopt;
    }
  };
  auto energy = [&](int n, int l) { return sqdt_energy(n, l, table); };
  CoeffTable out = detail::expand_with(state, window, labels, energy, RadialBasis::sqdt, opt);
  out.warnings.insert(out.warnings.end(), warnings.begin(), warnings.end());
  return out;
}

double sqdt_n_bar(const InitConditions& cond, const DefectTable& table) {
  return cond.n_bar - table.defect(cond.l3_target);
}

KssState fit_params_qdt(const InitConditions& cond, const DefectTable& table) {
  return detail::fit_params_with(cond, sqdt_n_bar(cond, table));
}

}  // namespace kss
