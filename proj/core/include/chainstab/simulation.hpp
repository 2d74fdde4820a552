#pragma once

// Fixed-step closed-loop integration of the perturbed integrator chain.
//
// The feedback laws are discontinuous at u0 = 0. They are evaluated pointwise
// at every stage of an explicit scheme; no event detection or regularization
// is applied (unless boundary_layer > 0), so solutions approximate the
// set-valued ones only up to a chattering band that scales with dt.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "chainstab/controllers.hpp"
#include "chainstab/disturbance.hpp"

namespace chainstab {

enum class ControllerKind {
  kOpenLoop,  ///< u = 0
  kPure,      ///< u = u0
  kRobust,    ///< robust_u with known bounds
  kAdaptive,  ///< adaptive_u with phi_hat co-integrated
};

enum class NominalLaw { kHong, kSimplified };

enum class Integrator { kRk4, kEuler };

struct SimulationConfig {
  explicit SimulationConfig(HongParams hong) : params(std::move(hong)) {}

  ControllerKind controller = ControllerKind::kPure;
  NominalLaw law = NominalLaw::kHong;
  SimplifiedExponents exponents = SimplifiedExponents::kMatched;
  HongParams params;
  /// Bounds known to the robust controller. Required for kRobust.
  std::optional<UncertaintyBounds> known_bounds;
  /// Required for kAdaptive; the adaptive law is paired with hong_u0 only.
  std::optional<AdaptiveConfig> adaptive;
  Disturbance disturbance = nominal_disturbance();
  double dt = 1e-4;
  double horizon = 1.0;
  Integrator integrator = Integrator::kRk4;
  /// sign(u0) -> saturate(u0 / boundary_layer) when positive. Off by default.
  double boundary_layer = 0.0;
};

/// Throws ConfigError on inconsistent configurations.
void validate(const SimulationConfig& config);

/// Number of grid steps, floor(horizon / dt) with a 1e-9 relative guard
/// against round-off in the quotient.
std::size_t step_count(double horizon, double dt);

/// One recorded grid point. V1 is always the hong_u0 Lyapunov function.
struct Sample {
  double t;
  std::span<const double> z;
  double u0;
  double u;
  double v1;
  double phi;
  double gamma;
  double phi_hat;    ///< adaptive runs only, else 0
  double gamma_hat;  ///< adaptive runs only, else 0
};

/// Column storage for a full run; z is stored row-major (record x order).
struct Trajectory {
  std::size_t order = 0;
  bool adaptive = false;
  double dt = 0.0;
  std::vector<double> t;
  std::vector<double> z;
  std::vector<double> u0;
  std::vector<double> u;
  std::vector<double> v1;
  std::vector<double> phi;
  std::vector<double> gamma;
  std::vector<double> phi_hat;
  std::vector<double> gamma_hat;

  std::size_t size() const noexcept { return t.size(); }
  std::span<const double> state(std::size_t n) const {
    return std::span<const double>(z).subspan(n * order, order);
  }
  void reserve(std::size_t n);
  void append(const Sample& s);
};

using SampleObserver = std::function<void(const Sample&)>;

/// Integrates from z0 over [0, horizon], calling `observer` at every one of
/// the step_count + 1 grid points. Throws DivergenceError when the state
/// becomes non-finite.
void simulate(std::span<const double> z0, const SimulationConfig& config,
              const SampleObserver& observer);

/// Records every grid point.
Trajectory simulate(std::span<const double> z0, const SimulationConfig& config);

/// Tail and convergence statistics of one run.
///
/// convergence_time is the first grid time with |z|_inf <= band, or for
/// adaptive runs with V1 <= epsilon; +infinity when never reached.
/// peak_v1_after_crossing is the largest V1 from the first V1 <= epsilon
/// onwards (NaN if V1 never crosses). tail_sup_phi_hat is NaN for
/// non-adaptive runs.
struct RunMetrics {
  double convergence_time;
  double tail_inf_v1;
  double tail_sup_v1;
  double peak_v1_after_crossing;
  double tail_sup_phi_hat;
  double tail_sup_state_norm;
};

/// Tail window: the last round(tail_fraction * (N - 1)) + 1 records.
/// Throws DomainError when that window holds fewer than 10 samples.
RunMetrics compute_metrics(const Trajectory& trajectory, double epsilon, double tail_fraction,
                           double band);

}  // namespace chainstab
