#pragma once

// Keplerian squeezed states: fitting, eigenbasis expansion, time evolution
// and density slices.

#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "kss/angular.hpp"
#include "kss/radial.hpp"

namespace kss {

struct KssState {
  RssState rss;
  SssState sss;
};

struct InitConditions {
  double n_bar = 0.0;
  int l3_target = 0;
  double delta_l3 = 0.0;
  double p_r_target = 0.0;
  std::optional<double> r_target;  // defaults to r_out
};

struct OrbitGeometry {
  double r_out = 0.0;
  double r_in = 0.0;
  double t_cl = 0.0;  // atomic units of time
  double eccentricity = 0.0;
};

/// Inclusive integer range.
struct IntRange {
  int lo = 0;
  int hi = -1;
  int count() const { return hi >= lo ? hi - lo + 1 : 0; }
};

enum class MWindowMode {
  absolute,    // m in [m.lo, m.hi]
  l_relative,  // m in [l + m.lo, l + m.hi]
};

struct ExpansionWindow {
  IntRange n;
  IntRange l;
  IntRange m;
  MWindowMode m_mode = MWindowMode::absolute;

  /// 11 n-values and 11 l-values centred on (n_bar, beta), four m-values
  /// m in [l - 3, l].
  static ExpansionWindow standard(int n_bar, int beta);
  /// Same n and l ranges, m in {beta - 3, ..., beta}.
  static ExpansionWindow standard_absolute(int n_bar, int beta);
};

/// Radial basis labels: R(r) = coulomb_radial(n_star, l_star, degree, r).
struct RadialLabels {
  double n_star = 0.0;
  double l_star = 0.0;
  int degree = 0;
};

struct CoeffEntry {
  int n = 0;
  int l = 0;
  int m = 0;
  std::complex<double> c;
  double energy = 0.0;
  RadialLabels radial;
};

enum class RadialBasis { hydrogenic, sqdt };

struct CoeffTable {
  std::vector<CoeffEntry> entries;  // sorted by (n, l, m)
  ExpansionWindow window;
  RadialBasis basis = RadialBasis::hydrogenic;
  double captured_norm = 0.0;  // sum |c|^2
  std::size_t parity_zeros = 0;
  std::size_t skipped = 0;  // (n, l, m) combinations outside l < n, |m| <= l
  std::vector<std::string> warnings;

  double mean_energy() const;  // sum |c|^2 E / sum |c|^2
};

struct ExpandOptions {
  unsigned workers = 0;  // 0: hardware concurrency
  AngularMethod angular = AngularMethod::closed_form;
  RadialQuadrature radial;
};

enum class Plane { XY, XZ };

struct AxisSpec {
  double min = 0.0;
  double max = 0.0;
  int count = 0;
  double at(int i) const { return count > 1 ? min + (max - min) * i / (count - 1) : min; }
};

struct SliceGrid {
  Plane plane = Plane::XY;
  AxisSpec axis0;  // x
  AxisSpec axis1;  // y (XY) or z (XZ)
  double time = 0.0;
  std::vector<double> values;  // row-major, axis1 index outer
  double at(int i0, int i1) const { return values[static_cast<std::size_t>(i1) * axis0.count + i0]; }
};

/// Closed-form <H> = <p_r^2>/2 + <1/r^2><L^2>/2 - <1/r>.
double kss_energy(const KssState& state);

/// Normalization of the product state (radial norm times angular norm).
double kss_norm(const KssState& state);

std::complex<double> kss_eval(const KssState& state, double r, double theta, double phi);

OrbitGeometry orbit_geometry(double n_bar, double l_sq);

KssState fit_params(const InitConditions& cond);

namespace detail {
/// Fit with energy target -1/(2 n_eff^2) and default <r> = r_out(n_eff).
KssState fit_params_with(const InitConditions& cond, double n_eff);

using LabelFn = std::function<std::optional<RadialLabels>(int n, int l)>;
using EnergyFn = std::function<double(int n, int l)>;
CoeffTable expand_with(const KssState& state, const ExpansionWindow& window, const LabelFn& labels,
                       const EnergyFn& energy, RadialBasis basis, const ExpandOptions& opt);
}  // namespace detail

CoeffTable expand(const KssState& state, const ExpansionWindow& window, const ExpandOptions& opt = {});

/// Psi(r, theta, phi, t) = sum c R Y exp(-i E t).
std::complex<double> evolve_eval(const CoeffTable& coeffs, double r, double theta, double phi, double t);

/// Default grid: count x count cells over [-1.2 r_out, 1.2 r_out] on both axes.
SliceGrid default_grid(Plane plane, double r_out, int count = 201);

/// Fills grid.values with r^2 |Psi|^2 at time grid.time.
SliceGrid density_slice(const CoeffTable& coeffs, SliceGrid grid, unsigned workers = 0);

/// Radial matrix elements <R_a| r |R_b> on a shared quadrature grid, cached.
class RadialMatrixCache {
 public:
  explicit RadialMatrixCache(double r_max, int panels = 64);
  double element(const RadialLabels& a, const RadialLabels& b);

 private:
  const std::vector<double>& samples(const RadialLabels& x);
  using Key = std::tuple<double, double, int>;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::mutex mutex_;
  std::map<Key, std::vector<double>> samples_;
  std::map<std::pair<Key, Key>, double> elements_;
};

/// <r>(t) of the truncated packet, normalized by the captured norm.
double expectation_r_t(const CoeffTable& coeffs, double t, RadialMatrixCache* cache = nullptr);

/// Default radius of the radial matrix element grid for a table.
double table_r_max(const CoeffTable& coeffs);

}  // namespace kss
