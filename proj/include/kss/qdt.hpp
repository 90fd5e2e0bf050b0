#pragma once

// Quantum-defect (SQDT) basis: defect-shifted labels n* = n - delta(l),
// l* = l - delta(l) + I(l), and the matching energies and radial functions.

#include <map>
#include <string>
#include <vector>

#include "kss/kss.hpp"

namespace kss {

struct DefectTable {
  std::map<int, double> defects;     // l -> delta(l) >= 0
  std::map<int, int> integer_shift;  // l -> I(l), default 0

  /// delta(l); a missing l gives 0 and, if warnings is given, a note.
  double defect(int l, std::vector<std::string>* warnings = nullptr) const;
  int shift(int l) const;
  bool all_zero() const;

  /// {"defects": {"0": 1.35, ...}, "integer_shift": {"0": 1, ...}}
  static DefectTable from_json(const std::string& text);
  static DefectTable load(const std::string& path);
  std::string to_json() const;
};

using SqdtLabels = RadialLabels;

/// Labels for (n, l). Throws DomainError when n* <= l* or the Laguerre
/// degree n - l - I(l) - 1 is negative.
SqdtLabels sqdt_labels(int n, int l, const DefectTable& table);

/// -1 / (2 n*^2).
double sqdt_energy(int n, int l, const DefectTable& table);

double sqdt_radial(const SqdtLabels& labels, double r);

CoeffTable sqdt_expand(const KssState& state, const ExpansionWindow& window, const DefectTable& table,
                       const ExpandOptions& opt = {});

/// Effective principal number n_bar* = n_bar - delta(l3_target).
double sqdt_n_bar(const InitConditions& cond, const DefectTable& table);

/// fit_params with E_n* and r_out* taken at n_bar*.
KssState fit_params_qdt(const InitConditions& cond, const DefectTable& table);

}  // namespace kss
