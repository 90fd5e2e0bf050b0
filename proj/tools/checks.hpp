#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace kss::cli {

struct CheckResult {
  std::string module;
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool at_least = false;  // pass when value >= limit instead of value <= limit
  bool pass = false;
};

/// Module names accepted by --only: specfun, angular, radial, kss, qdt
/// (angular-sss, radial-rss and kss-core are accepted as aliases).
std::optional<std::string> canonical_module(const std::string& name);

/// Runs the invariant suites on the worked scenario (n_bar = 45, <L3> = 30,
/// Delta L3 = 2.5). cfg supplies workers and fault injection only.
std::vector<CheckResult> run_checks(const RunConfig& cfg, const std::optional<std::string>& only);

nlohmann::json checks_json(const std::vector<CheckResult>& results);

}  // namespace kss::cli
