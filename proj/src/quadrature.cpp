#include "kss/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace kss {

namespace {

struct ReferenceRule {
  std::vector<double> x;  // ascending nodes on [-1, 1]
  std::vector<double> w;
};

ReferenceRule compute_reference(int n) {
  ReferenceRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0;
    double p1 = 0.0;
    for (int k = 1; k <= n; ++k) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.x[i] = -z;
    rule.x[n - 1 - i] = z;
    rule.w[i] = w;
    rule.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.x[n / 2] = 0.0;
  return rule;
}

// Reference rules are computed once per order and shared read-only.
const ReferenceRule& reference_rule(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<const ReferenceRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<const ReferenceRule>(compute_reference(n));
  return *slot;
}

}  // namespace

QuadratureRule gauss_legendre(int n, double lo, double hi) {
  return composite_gauss_legendre(1, n, lo, hi);
}

QuadratureRule composite_gauss_legendre(int panels, int order, double lo, double hi) {
  if (order < 2) throw DomainError("gauss_legendre: need at least 2 nodes");
  if (panels < 1) throw DomainError("composite_gauss_legendre: need at least 1 panel");
  if (!(lo < hi)) throw DomainError("gauss_legendre: need lo < hi");
  const ReferenceRule& ref = reference_rule(order);
  QuadratureRule rule;
  rule.lo = lo;
  rule.hi = hi;
  rule.nodes.reserve(static_cast<std::size_t>(panels) * order);
  rule.weights.reserve(static_cast<std::size_t>(panels) * order);
  const double width = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = lo + p * width;
    const double half = 0.5 * width;
    const double mid = a + half;
    for (int i = 0; i < order; ++i) {
      rule.nodes.push_back(mid + half * ref.x[i]);
      rule.weights.push_back(half * ref.w[i]);
    }
  }
  return rule;
}

}  // namespace kss
