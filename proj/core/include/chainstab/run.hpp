#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "chainstab/scenario.hpp"
#include "chainstab/simulation.hpp"

namespace chainstab {

/// Process exit codes shared by every subcommand.
enum ExitStatus : int {
  kExitSuccess = 0,
  kExitConfigError = 1,
  kExitDivergence = 2,
};

struct RunOutcome {
  int exit_status = kExitSuccess;
  std::string message;
  std::filesystem::path trajectory_file;
  std::filesystem::path metrics_file;
};

/// Simulates the scenario and writes <directory>/<name>_trajectory.csv and
/// <directory>/<name>_metrics.json. Diagnostics go to `log`.
RunOutcome run_scenario(const Scenario& scenario, std::ostream& log);

/// Columns t, z1..zr, u0, u, V1, phi_t, gamma_t [, phi_hat, gamma_hat],
/// header first, values with 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

/// Metrics document. Adaptive runs also carry the homogeneity constants and
/// the analytic ultimate bounds computed from the true uncertainty bounds.
std::string metrics_json(const Scenario& scenario, const Trajectory& trajectory,
                         const RunMetrics& metrics);

/// Homogeneity certificate, convergence-time bound from V1(z0) and, for
/// adaptive scenarios, the ultimate bounds; as a JSON document.
std::string bounds_json(const Scenario& scenario);

}  // namespace chainstab
