#include "kss/kss.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>

#include "kss/errors.hpp"
#include "kss/quadrature.hpp"
#include "kss/roots.hpp"
#include "kss/specfun.hpp"
#include "parallel.hpp"

namespace kss {

namespace {

constexpr double kPi = std::numbers::pi;

std::tuple<double, double, int> key_of(const RadialLabels& x) { return {x.n_star, x.l_star, x.degree}; }

// Sum over a coefficient table at arbitrary points. Radial functions are
// evaluated once per distinct label and Legendre columns once per distinct m.
class PointEvaluator {
 public:
  explicit PointEvaluator(const CoeffTable& table) {
    std::map<std::tuple<double, double, int>, std::size_t> radial_index;
    std::map<int, std::size_t> m_index;
    for (const auto& e : table.entries) {
      if (e.c == 0.0) continue;
      auto [rit, rnew] = radial_index.try_emplace(key_of(e.radial), radials_.size());
      if (rnew) radials_.push_back(e.radial);
      auto [mit, mnew] = m_index.try_emplace(e.m, groups_.size());
      if (mnew) groups_.push_back({e.m, std::abs(e.m)});
      auto& g = groups_[mit->second];
      g.l_max = std::max(g.l_max, e.l);
      terms_.push_back({rit->second, mit->second, e.l, e.c, e.energy, e.c});
    }
  }

  void set_time(double t) {
    for (auto& term : terms_) {
      const double arg = -term.energy * t;
      term.amp = term.c * std::complex<double>(std::cos(arg), std::sin(arg));
    }
  }

  struct Scratch {
    std::vector<double> radial;
    std::vector<std::vector<double>> legendre;
    std::vector<std::complex<double>> phase;
  };

  std::complex<double> operator()(double r, double theta, double phi, Scratch& s) const {
    s.radial.resize(radials_.size());
    for (std::size_t k = 0; k < radials_.size(); ++k) {
      const auto& x = radials_[k];
      s.radial[k] = specfun::coulomb_radial(x.n_star, x.l_star, x.degree, r);
    }
    s.legendre.resize(groups_.size());
    s.phase.resize(groups_.size());
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      const auto& grp = groups_[g];
      auto& col = s.legendre[g];
      col.resize(static_cast<std::size_t>(grp.l_max - grp.abs_m + 1));
      specfun::legendre_normalized_column(grp.abs_m, theta, col);
      // Y_{l,-m} = (-1)^m conj(Y_lm)
      if (grp.m < 0 && grp.abs_m % 2 == 1)
        for (auto& v : col) v = -v;
      s.phase[g] = {std::cos(grp.m * phi), std::sin(grp.m * phi)};
    }
    std::complex<double> sum = 0.0;
    for (const auto& term : terms_) {
      const auto& grp = groups_[term.group];
      const double real = s.radial[term.radial] * s.legendre[term.group][term.l - grp.abs_m];
      sum += term.amp * (real * s.phase[term.group]);
    }
    return sum;
  }

 private:
  struct Group {
    int m;
    int abs_m;
    int l_max = 0;
  };
  struct Term {
    std::size_t radial;
    std::size_t group;
    int l;
    std::complex<double> c;
    double energy;
    std::complex<double> amp;
  };
  std::vector<RadialLabels> radials_;
  std::vector<Group> groups_;
  std::vector<Term> terms_;
};

}  // namespace

ExpansionWindow ExpansionWindow::standard(int n_bar, int beta) {
  return {{n_bar - 5, n_bar + 5}, {beta - 5, beta + 5}, {-3, 0}, MWindowMode::l_relative};
}

ExpansionWindow ExpansionWindow::standard_absolute(int n_bar, int beta) {
  return {{n_bar - 5, n_bar + 5}, {beta - 5, beta + 5}, {beta - 3, beta}, MWindowMode::absolute};
}

double CoeffTable::mean_energy() const {
  double num = 0.0;
  double den = 0.0;
  for (const auto& e : entries) {
    const double p = std::norm(e.c);
    num += p * e.energy;
    den += p;
  }
  if (den == 0.0) throw DomainError("mean_energy: empty table");
  return num / den;
}

double kss_energy(const KssState& state) {
  const auto r = rss_expectations(state.rss);
  const auto a = sss_expectations(state.sss);
  return 0.5 * r.p_r_sq + 0.5 * r.r_inv_sq * a.l_sq - r.r_inv;
}

double kss_norm(const KssState& state) {
  const auto& rss = state.rss;
  auto density = [&](double r) { return std::norm(rss_eval(rss, r)) * r * r; };
  AdaptiveOptions opt;
  opt.initial_panels = 8;
  opt.rel_tol = 1e-12;
  const double radial = integrate_adaptive(density, 0.0, rss.support_radius(), opt);
  const auto& sss = state.sss;
  const double angular = sss.norm() * sss.norm() * detail::a_fn_quadrature(0, sss.beta(), sss.delta());
  return radial * angular;
}

std::complex<double> kss_eval(const KssState& state, double r, double theta, double phi) {
  return rss_eval(state.rss, r) * sss_eval(state.sss, theta, phi);
}

OrbitGeometry orbit_geometry(double n_bar, double l_sq) {
  if (!(n_bar > 0.0) || !std::isfinite(n_bar)) throw DomainError("orbit_geometry: n_bar must be positive");
  if (!(l_sq >= 0.0)) throw DomainError("orbit_geometry: <L^2> must be >= 0");
  const double n2 = n_bar * n_bar;
  if (!(l_sq < n2)) {
    throw DomainError("orbit_geometry: <L^2> = " + std::to_string(l_sq) + " must be below n_bar^2 = " +
                      std::to_string(n2));
  }
  OrbitGeometry g;
  g.eccentricity = std::sqrt(1.0 - l_sq / n2);
  g.r_out = n2 * (1.0 + g.eccentricity);
  g.r_in = n2 * (1.0 - g.eccentricity);
  g.t_cl = 2.0 * kPi * (n2 * n_bar);
  return g;
}

namespace detail {

KssState fit_params_with(const InitConditions& cond, double n_eff) {
  if (!(cond.n_bar > 0.0) || !std::isfinite(cond.n_bar)) throw DomainError("fit: n_bar must be positive");
  if (cond.l3_target < 1) throw DomainError("fit: <L3> must be a positive integer");
  if (!(cond.l3_target < cond.n_bar)) throw DomainError("fit: <L3> must be below n_bar");
  if (!(cond.delta_l3 > 0.0)) throw DomainError("fit: Delta L3 must be positive");
  if (!std::isfinite(cond.p_r_target)) throw DomainError("fit: <p_r> must be finite");
  if (!(n_eff > 0.0)) throw DomainError("fit: effective n_bar must be positive");

  const int beta = cond.l3_target;
  const SssState sss(beta, solve_delta(beta, cond.delta_l3));
  const double l_sq = sss_expectations(sss).l_sq;
  double r_mean;
  if (cond.r_target) {
    r_mean = *cond.r_target;
    if (!(r_mean > 0.0)) throw DomainError("fit: <r> target must be positive");
  } else {
    r_mean = orbit_geometry(n_eff, l_sq).r_out;
  }
  const double gamma1 = cond.p_r_target == 0.0 ? 0.0 : -cond.p_r_target;
  const double target = -0.5 / (n_eff * n_eff);

  auto residual = [&](double alpha) {
    const double g0 = (2.0 * alpha + 3.0) / (2.0 * r_mean);
    return 0.5 * g0 * g0 / (2.0 * alpha + 1.0) + l_sq * g0 * g0 / ((alpha + 1.0) * (2.0 * alpha + 1.0)) -
           g0 / (alpha + 1.0) + 0.5 * gamma1 * gamma1 - target;
  };
  // The residual need not be monotone in alpha; take the lowest sign change
  // on a scan of the bracket.
  const double lo = beta;
  const double hi = 10.0 * cond.n_bar;
  constexpr int kScan = 128;
  double a_prev = lo;
  double f_prev = residual(lo);
  const double f_lo = f_prev;
  std::optional<RootBracket> bracket;
  for (int k = 1; k <= kScan && !bracket; ++k) {
    const double a = lo + (hi - lo) * k / kScan;
    const double f = residual(a);
    if (f_prev == 0.0) return KssState{RssState(a_prev, (2.0 * a_prev + 3.0) / (2.0 * r_mean), gamma1), sss};
    if ((f > 0.0) != (f_prev > 0.0)) bracket = RootBracket{a_prev, a, 1e-12};
    a_prev = a;
    f_prev = f;
  }
  if (!bracket) {
    throw InfeasibleError("fit: energy condition has no root for alpha in (" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]; residual " + std::to_string(f_lo) + " at the lower end, " +
                          std::to_string(f_prev) + " at the upper end");
  }
  const double alpha = solve_root(residual, *bracket);
  const double gamma0 = (2.0 * alpha + 3.0) / (2.0 * r_mean);
  return KssState{RssState(alpha, gamma0, gamma1), sss};
}

CoeffTable expand_with(const KssState& state, const ExpansionWindow& window, const LabelFn& labels,
                       const EnergyFn& energy, RadialBasis basis, const ExpandOptions& opt) {
  CoeffTable table;
  table.window = window;
  table.basis = basis;

  struct Cell {
    int n, l, m;
    std::size_t radial, angular;
  };
  std::vector<Cell> cells;
  std::vector<std::pair<int, int>> radial_jobs;  // (n, l)
  std::vector<RadialLabels> radial_labels;
  std::vector<std::pair<int, int>> angular_jobs;  // (l, m)
  std::map<std::pair<int, int>, std::size_t> radial_at, angular_at;

  for (int n = window.n.lo; n <= window.n.hi; ++n) {
    for (int l = window.l.lo; l <= window.l.hi; ++l) {
      const int m_lo = window.m_mode == MWindowMode::l_relative ? l + window.m.lo : window.m.lo;
      const int m_hi = window.m_mode == MWindowMode::l_relative ? l + window.m.hi : window.m.hi;
      std::optional<RadialLabels> lab;
      if (n >= 1 && l >= 0) lab = labels(n, l);
      for (int m = m_lo; m <= m_hi; ++m) {
        if (!lab || std::abs(m) > l) {
          ++table.skipped;
          continue;
        }
        auto [rit, rnew] = radial_at.try_emplace({n, l}, radial_jobs.size());
        if (rnew) {
          radial_jobs.emplace_back(n, l);
          radial_labels.push_back(*lab);
        }
        auto [ait, anew] = angular_at.try_emplace({l, m}, angular_jobs.size());
        if (anew) angular_jobs.emplace_back(l, m);
        cells.push_back({n, l, m, rit->second, ait->second});
      }
    }
  }

  std::vector<double> angular(angular_jobs.size());
  std::vector<std::complex<double>> radial(radial_jobs.size());
  const std::size_t n_ang = angular_jobs.size();
  parallel_for(n_ang + radial_jobs.size(), opt.workers, [&](std::size_t i) {
    if (i < n_ang) {
      const auto [l, m] = angular_jobs[i];
      const auto method = m < 0 ? AngularMethod::quadrature : opt.angular;
      angular[i] = sss_coeff(state.sss, l, m, method);
    } else {
      const std::size_t k = i - n_ang;
      const auto& x = radial_labels[k];
      radial[k] = rss_overlap(state.rss, x.n_star, x.l_star, x.degree, opt.radial);
    }
  });

  table.entries.reserve(cells.size());
  for (const auto& cell : cells) {
    CoeffEntry e;
    e.n = cell.n;
    e.l = cell.l;
    e.m = cell.m;
    e.radial = radial_labels[cell.radial];
    e.energy = energy(cell.n, cell.l);
    if ((cell.l - cell.m) % 2 != 0) {
      e.c = 0.0;
      ++table.parity_zeros;
    } else {
      e.c = radial[cell.radial] * angular[cell.angular];
    }
    table.captured_norm += std::norm(e.c);
    table.entries.push_back(e);
  }
  return table;
}

}  // namespace detail

KssState fit_params(const InitConditions& cond) { return detail::fit_params_with(cond, cond.n_bar); }

CoeffTable expand(const KssState& state, const ExpansionWindow& window, const ExpandOptions& opt) {
  auto labels = [](int n, int l) -> std::optional<RadialLabels> {
    if (l >= n) return std::nullopt;
    if (n > 120) throw RangeError("expand: n > 120 unsupported");
    return RadialLabels{static_cast<double>(n), static_cast<double>(l), n - l - 1};
  };
  auto energy = [](int n, int) { return energy_n(n); };
  return detail::expand_with(state, window, labels, energy, RadialBasis::hydrogenic, opt);
}

std::complex<double> evolve_eval(const CoeffTable& coeffs, double r, double theta, double phi, double t) {
  if (coeffs.entries.empty()) throw DomainError("evolve_eval: empty coefficient table");
  if (!(r >= 0.0)) throw DomainError("evolve_eval: r must be >= 0");
  if (!(theta >= 0.0 && theta <= kPi)) throw DomainError("evolve_eval: theta must lie in [0, pi]");
  PointEvaluator eval(coeffs);
  eval.set_time(t);
  PointEvaluator::Scratch scratch;
  return eval(r, theta, phi, scratch);
}

SliceGrid default_grid(Plane plane, double r_out, int count) {
  SliceGrid g;
  g.plane = plane;
  g.axis0 = {-1.2 * r_out, 1.2 * r_out, count};
  g.axis1 = g.axis0;
  return g;
}

SliceGrid density_slice(const CoeffTable& coeffs, SliceGrid grid, unsigned workers) {
  if (coeffs.entries.empty()) throw DomainError("density_slice: empty coefficient table");
  if (grid.axis0.count < 1 || grid.axis1.count < 1) throw DomainError("density_slice: empty grid");
  PointEvaluator eval(coeffs);
  eval.set_time(grid.time);
  const int nx = grid.axis0.count;
  grid.values.assign(static_cast<std::size_t>(nx) * grid.axis1.count, 0.0);
  detail::parallel_for(static_cast<std::size_t>(grid.axis1.count), workers, [&](std::size_t row) {
    PointEvaluator::Scratch scratch;
    const double b = grid.axis1.at(static_cast<int>(row));
    for (int i = 0; i < nx; ++i) {
      const double x = grid.axis0.at(i);
      double r, theta, phi;
      if (grid.plane == Plane::XY) {
        r = std::hypot(x, b);
        theta = 0.5 * kPi;
        phi = std::atan2(b, x);
      } else {
        r = std::hypot(x, b);
        theta = std::atan2(std::abs(x), b);
        phi = x < 0.0 ? kPi : 0.0;
      }
      grid.values[row * nx + i] = r * r * std::norm(eval(r, theta, phi, scratch));
    }
  });
  return grid;
}

RadialMatrixCache::RadialMatrixCache(double r_max, int panels) {
  if (!(r_max > 0.0)) throw DomainError("RadialMatrixCache: r_max must be positive");
  const auto rule = composite_gauss_legendre(panels, 64, 0.0, r_max);
  nodes_ = rule.nodes;
  weights_ = rule.weights;
}

const std::vector<double>& RadialMatrixCache::samples(const RadialLabels& x) {
  auto [it, fresh] = samples_.try_emplace(key_of(x));
  if (fresh) {
    it->second.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const double r = nodes_[i];
      it->second[i] = specfun::coulomb_radial(x.n_star, x.l_star, x.degree, r) * r * std::sqrt(r * weights_[i]);
    }
  }
  return it->second;
}

double RadialMatrixCache::element(const RadialLabels& a, const RadialLabels& b) {
  std::lock_guard lock(mutex_);
  auto ka = key_of(a);
  auto kb = key_of(b);
  if (kb < ka) std::swap(ka, kb);
  const auto found = elements_.find({ka, kb});
  if (found != elements_.end()) return found->second;
  const auto& sa = samples(a);
  const auto& sb = samples(b);
  double sum = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) sum += sa[i] * sb[i];
  elements_.emplace(std::pair{ka, kb}, sum);
  return sum;
}

double table_r_max(const CoeffTable& coeffs) {
  double n_max = 1.0;
  for (const auto& e : coeffs.entries) n_max = std::max(n_max, e.radial.n_star);
  return 4.0 * n_max * n_max;
}

double expectation_r_t(const CoeffTable& coeffs, double t, RadialMatrixCache* cache) {
  std::unique_ptr<RadialMatrixCache> own;
  if (!cache) {
    own = std::make_unique<RadialMatrixCache>(table_r_max(coeffs));
    cache = own.get();
  }
  // Only states sharing (l, m) couple through r.
  std::map<std::pair<int, int>, std::vector<const CoeffEntry*>> blocks;
  double norm = 0.0;
  for (const auto& e : coeffs.entries) {
    if (e.c == 0.0) continue;
    blocks[{e.l, e.m}].push_back(&e);
    norm += std::norm(e.c);
  }
  if (norm == 0.0) throw DomainError("expectation_r_t: table has no nonzero coefficient");
  std::complex<double> sum = 0.0;
  for (const auto& [lm, list] : blocks) {
    for (const auto* a : list) {
      for (const auto* b : list) {
        const double arg = (a->energy - b->energy) * t;
        sum += std::conj(a->c) * b->c * cache->element(a->radial, b->radial) *
               std::complex<double>(std::cos(arg), std::sin(arg));
      }
    }
  }
  if (std::abs(sum.imag()) > 1e-10 * std::max(1.0, std::abs(sum.real()))) {
    throw AccuracyError("expectation_r_t: imaginary residue " + std::to_string(sum.imag()), sum.real() / norm);
  }
  return sum.real() / norm;
}

}  // namespace kss
