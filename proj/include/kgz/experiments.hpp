#pragma once

// Experiment suites driven by an ExperimentConfig, and the property audits.
// Every run writes CSV series plus summary.json and manifest.json into the
// output directory; numbers needed by callers come back in the report.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "kgz/config.hpp"

namespace kgz {

struct ExperimentReport {
  std::string experiment;
  std::vector<std::pair<std::string, double>> metrics;  // in emission order

  /// Throws RangeError for an unknown name.
  double metric(const std::string& name) const;
  bool has(const std::string& name) const;
};

/// Names accepted in [experiment] name.
std::vector<std::string> experiment_names();

/// Runs the configured experiment into `out` (created if missing). On
/// DivergenceError the last emitted state is saved as last_good.kgz, the
/// manifest is written, and the error is rethrown.
ExperimentReport run_experiment(const ExperimentConfig& config, const std::filesystem::path& out);

struct AuditLine {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool upper = true;  // value <= bound when true, value >= bound otherwise
  bool pass() const { return upper ? value <= bound : value >= bound; }
};

/// transform, phase, special, spectral, or all. Throws ConfigError otherwise.
std::vector<AuditLine> run_audit(const std::string& suite);
std::vector<std::string> audit_names();

}  // namespace kgz
