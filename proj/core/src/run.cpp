#include "chainstab/run.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <system_error>

#include "chainstab/errors.hpp"
#include "chainstab/lyapunov.hpp"
#include "json.hpp"

namespace chainstab {
namespace {

using nlohmann::ordered_json;

// JSON has no representation for infinity or NaN; both become null.
ordered_json number_or_null(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

void append_field(std::string& line, double x) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", x);
  line.push_back(',');
  line.append(buf, static_cast<std::size_t>(n));
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  std::string header = "t";
  for (std::size_t i = 1; i <= traj.order; ++i) header += ",z" + std::to_string(i);
  header += ",u0,u,V1,phi_t,gamma_t";
  if (traj.adaptive) header += ",phi_hat,gamma_hat";
  out << header << '\n';

  std::string line;
  for (std::size_t n = 0; n < traj.size(); ++n) {
    char buf[40];
    line.assign(buf, static_cast<std::size_t>(std::snprintf(buf, sizeof buf, "%.17g", traj.t[n])));
    for (double zi : traj.state(n)) append_field(line, zi);
    append_field(line, traj.u0[n]);
    append_field(line, traj.u[n]);
    append_field(line, traj.v1[n]);
    append_field(line, traj.phi[n]);
    append_field(line, traj.gamma[n]);
    if (traj.adaptive) {
      append_field(line, traj.phi_hat[n]);
      append_field(line, traj.gamma_hat[n]);
    }
    line.push_back('\n');
    out << line;
  }
}

std::string metrics_json(const Scenario& scenario, const Trajectory& traj,
                         const RunMetrics& m) {
  ordered_json doc;
  doc["controller"] = to_string(scenario.controller);
  doc["order"] = scenario.order;
  doc["records"] = traj.size();
  doc["convergence_time"] = number_or_null(m.convergence_time);
  doc["tail_inf_V1"] = number_or_null(m.tail_inf_v1);
  doc["tail_sup_V1"] = number_or_null(m.tail_sup_v1);
  doc["peak_V1_after_crossing"] = number_or_null(m.peak_v1_after_crossing);
  doc["tail_sup_phi_hat"] = number_or_null(m.tail_sup_phi_hat);
  doc["tail_sup_state_norm"] = number_or_null(m.tail_sup_state_norm);

  if (scenario.controller == ControllerKind::kAdaptive) {
    const auto params = hong_params(scenario.order, scenario.k_hom, scenario_gains(scenario));
    try {
      const auto cert =
          estimate_constants(params, scenario.certificate_samples, scenario.seed);
      const auto bounds = adaptive_bounds(scenario.bounds, *scenario.adaptive, cert);
      doc["phi_bar_cap"] = bounds.phi_bar_cap;
      doc["delta_cap"] = bounds.delta_cap;
      doc["phi_hat_ceiling"] = bounds.phi_hat_ceiling;
      doc["c"] = cert.c;
      doc["alpha"] = cert.alpha;
      doc["c_prime"] = cert.c_prime;
      doc["alpha_prime"] = cert.alpha_prime;
    } catch (const std::exception& e) {
      for (const char* key : {"phi_bar_cap", "delta_cap", "phi_hat_ceiling", "c", "alpha",
                              "c_prime", "alpha_prime"}) {
        doc[key] = nullptr;
      }
      doc["certificate_error"] = e.what();
    }
  }
  return doc.dump(2) + "\n";
}

std::string bounds_json(const Scenario& scenario) {
  const auto params = hong_params(scenario.order, scenario.k_hom, scenario_gains(scenario));
  const auto degrees = homogeneity_degrees(params);
  ordered_json doc;
  doc["order"] = scenario.order;
  doc["k_hom"] = scenario.k_hom;
  doc["gains"] = std::vector<double>(params.gains.values().begin(), params.gains.values().end());
  doc["kappa1"] = degrees.kappa1;
  doc["kappa2"] = degrees.kappa2;
  doc["alpha_prime"] = degrees.alpha_prime;
  const double v1_initial = v1(scenario.z0, params);
  doc["V1_initial"] = v1_initial;

  const auto cert = estimate_constants(params, scenario.certificate_samples, scenario.seed);
  doc["certificate_samples"] = scenario.certificate_samples;
  doc["c_prime"] = cert.c_prime;
  doc["c"] = cert.c;
  doc["alpha"] = cert.alpha;
  if (cert.alpha < 1.0) {
    doc["convergence_time_bound"] = convergence_time_bound(v1_initial, cert.c, cert.alpha);
  } else {
    doc["convergence_time_bound"] = nullptr;
  }
  if (scenario.adaptive) {
    const auto b = adaptive_bounds(scenario.bounds, *scenario.adaptive, cert);
    doc["phi_bar_cap"] = b.phi_bar_cap;
    doc["delta_cap"] = b.delta_cap;
    doc["phi_hat_ceiling"] = b.phi_hat_ceiling;
  }
  return doc.dump(2) + "\n";
}

RunOutcome run_scenario(const Scenario& scenario, std::ostream& log) {
  RunOutcome outcome;
  const std::filesystem::path dir(scenario.directory);
  outcome.trajectory_file = dir / (scenario.name + "_trajectory.csv");
  outcome.metrics_file = dir / (scenario.name + "_metrics.json");

  Trajectory traj;
  RunMetrics metrics{};
  try {
    const auto config = simulation_config(scenario);
    traj = simulate(scenario.z0, config);
    const double epsilon =
        scenario.adaptive ? scenario.adaptive->epsilon : scenario.v1_epsilon;
    metrics = compute_metrics(traj, epsilon, scenario.tail_fraction, scenario.band);
  } catch (const DivergenceError& e) {
    outcome.exit_status = kExitDivergence;
    outcome.message = std::string("divergence: ") + e.what();
    log << outcome.message << '\n';
    return outcome;
  } catch (const std::exception& e) {
    outcome.exit_status = kExitConfigError;
    outcome.message = std::string("configuration error: ") + e.what();
    log << outcome.message << '\n';
    return outcome;
  }

  std::string metrics_doc;
  try {
    metrics_doc = metrics_json(scenario, traj, metrics);
  } catch (const std::exception& e) {
    outcome.exit_status = kExitConfigError;
    outcome.message = std::string("configuration error: ") + e.what();
    log << outcome.message << '\n';
    return outcome;
  }

  std::error_code ec;
  if (!dir.empty()) std::filesystem::create_directories(dir, ec);
  std::ofstream csv(outcome.trajectory_file, std::ios::binary);
  std::ofstream json(outcome.metrics_file, std::ios::binary);
  if (ec || !csv || !json) {
    outcome.exit_status = kExitConfigError;
    outcome.message = "I/O error: cannot write to " + dir.string();
    log << outcome.message << '\n';
    return outcome;
  }
  write_trajectory_csv(csv, traj);
  json << metrics_doc;
  csv.close();
  json.close();
  if (!csv || !json) {
    outcome.exit_status = kExitConfigError;
    outcome.message = "I/O error: write to " + dir.string() + " failed";
    log << outcome.message << '\n';
    return outcome;
  }
  outcome.message = "wrote " + outcome.trajectory_file.string() + " and " +
                    outcome.metrics_file.string();
  log << outcome.message << '\n';
  return outcome;
}

}  // namespace chainstab
