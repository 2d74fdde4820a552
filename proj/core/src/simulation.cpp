#include "chainstab/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "chainstab/errors.hpp"
#include "chainstab/lyapunov.hpp"

namespace chainstab {
namespace {

struct StageOutput {
  double u0 = 0.0;
  double u = 0.0;
  double v1 = 0.0;
  double phi = 0.0;
  double gamma = 0.0;
  double phi_hat = 0.0;
  double gamma_hat = 0.0;
};

class ClosedLoop {
 public:
  explicit ClosedLoop(const SimulationConfig& config)
      : config_(config),
        order_(config.params.order),
        adaptive_(config.controller == ControllerKind::kAdaptive) {}

  std::size_t dimension() const { return order_ + (adaptive_ ? 1 : 0); }

  // Writes the time derivative of x into dx. When want_v1 is false, V1 is
  // only computed if the adaptation law needs it.
  StageOutput evaluate(double t, std::span<const double> x, std::span<double> dx,
                       bool want_v1) const {
    for (double xi : x) {
      if (!std::isfinite(xi)) {
        std::ostringstream msg;
        msg << "state became non-finite at t = " << t;
        throw DivergenceError(msg.str(), t);
      }
    }
    const auto z = x.first(order_);
    StageOutput out;

    const bool hong = config_.law == NominalLaw::kHong;
    const Feedback fb = hong ? hong_u0(z, config_.params)
                             : simplified_u0(z, config_.params, config_.exponents);
    out.u0 = fb.u0;
    if (want_v1 || adaptive_) {
      out.v1 = hong ? v1_from_virtual(z, fb.virtual_controls, config_.params)
                    : v1(z, config_.params);
    }

    switch (config_.controller) {
      case ControllerKind::kOpenLoop:
        out.u = 0.0;
        break;
      case ControllerKind::kPure:
        out.u = out.u0;
        break;
      case ControllerKind::kRobust:
        out.u = robust_u(out.u0, *config_.known_bounds, config_.boundary_layer);
        break;
      case ControllerKind::kAdaptive: {
        out.phi_hat = std::max(0.0, x[order_]);
        const auto control =
            adaptive_u(out.u0, AdaptiveState{out.phi_hat}, *config_.adaptive,
                       config_.boundary_layer);
        out.u = control.u;
        out.gamma_hat = control.gamma_hat;
        break;
      }
    }

    out.phi = config_.disturbance.phi(t);
    out.gamma = config_.disturbance.gamma(t);
    for (std::size_t i = 0; i + 1 < order_; ++i) dx[i] = x[i + 1];
    dx[order_ - 1] = out.phi + out.gamma * out.u;
    if (adaptive_) dx[order_] = phi_hat_rate(out.v1, out.phi_hat, *config_.adaptive);
    return out;
  }

 private:
  const SimulationConfig& config_;
  std::size_t order_;
  bool adaptive_;
};

}  // namespace

void validate(const SimulationConfig& config) {
  if (!std::isfinite(config.dt) || config.dt <= 0.0) {
    throw ConfigError("simulation: dt must be finite and positive");
  }
  if (!std::isfinite(config.horizon) || config.horizon < config.dt) {
    throw ConfigError("simulation: horizon must be at least dt");
  }
  if (!(config.boundary_layer >= 0.0) || !std::isfinite(config.boundary_layer)) {
    throw ConfigError("simulation: boundary_layer must be >= 0");
  }
  if (config.controller == ControllerKind::kRobust && !config.known_bounds) {
    throw ConfigError("simulation: robust controller requires uncertainty bounds");
  }
  if (config.controller == ControllerKind::kAdaptive) {
    if (!config.adaptive) {
      throw ConfigError("simulation: adaptive controller requires an adaptive configuration");
    }
    if (config.law != NominalLaw::kHong) {
      throw ConfigError("simulation: the adaptive controller is paired with the hong law only");
    }
  }
}

std::size_t step_count(double horizon, double dt) {
  return static_cast<std::size_t>(std::floor(horizon / dt * (1.0 + 1e-9)));
}

void Trajectory::reserve(std::size_t n) {
  t.reserve(n);
  z.reserve(n * order);
  u0.reserve(n);
  u.reserve(n);
  v1.reserve(n);
  phi.reserve(n);
  gamma.reserve(n);
  if (adaptive) {
    phi_hat.reserve(n);
    gamma_hat.reserve(n);
  }
}

void Trajectory::append(const Sample& s) {
  t.push_back(s.t);
  z.insert(z.end(), s.z.begin(), s.z.end());
  u0.push_back(s.u0);
  u.push_back(s.u);
  v1.push_back(s.v1);
  phi.push_back(s.phi);
  gamma.push_back(s.gamma);
  if (adaptive) {
    phi_hat.push_back(s.phi_hat);
    gamma_hat.push_back(s.gamma_hat);
  }
}

void simulate(std::span<const double> z0, const SimulationConfig& config,
              const SampleObserver& observer) {
  validate(config);
  const std::size_t r = config.params.order;
  if (z0.size() != r) {
    throw ConfigError("simulation: z0 has " + std::to_string(z0.size()) +
                      " components, chain order is " + std::to_string(r));
  }
  for (double zi : z0) {
    if (!std::isfinite(zi)) throw ConfigError("simulation: z0 must be finite");
  }

  const ClosedLoop loop(config);
  const std::size_t dim = loop.dimension();
  const bool adaptive = config.controller == ControllerKind::kAdaptive;
  const std::size_t steps = step_count(config.horizon, config.dt);
  const double dt = config.dt;

  std::vector<double> x(dim, 0.0);
  std::copy(z0.begin(), z0.end(), x.begin());
  std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), stage(dim);

  for (std::size_t n = 0;; ++n) {
    const double t = static_cast<double>(n) * dt;
    const auto out = loop.evaluate(t, x, k1, true);
    observer(Sample{t, std::span<const double>(x).first(r), out.u0, out.u, out.v1, out.phi,
                    out.gamma, adaptive ? out.phi_hat : 0.0, adaptive ? out.gamma_hat : 0.0});
    if (n == steps) break;

    if (config.integrator == Integrator::kEuler) {
      for (std::size_t i = 0; i < dim; ++i) x[i] += dt * k1[i];
    } else {
      for (std::size_t i = 0; i < dim; ++i) stage[i] = x[i] + 0.5 * dt * k1[i];
      loop.evaluate(t + 0.5 * dt, stage, k2, false);
      for (std::size_t i = 0; i < dim; ++i) stage[i] = x[i] + 0.5 * dt * k2[i];
      loop.evaluate(t + 0.5 * dt, stage, k3, false);
      for (std::size_t i = 0; i < dim; ++i) stage[i] = x[i] + dt * k3[i];
      loop.evaluate(t + dt, stage, k4, false);
      for (std::size_t i = 0; i < dim; ++i) {
        x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      }
    }
    if (adaptive) x[r] = std::max(0.0, x[r]);
    const double t_next = static_cast<double>(n + 1) * dt;
    for (double xi : x) {
      if (!std::isfinite(xi)) {
        std::ostringstream msg;
        msg << "state became non-finite at t = " << t_next;
        throw DivergenceError(msg.str(), t_next);
      }
    }
  }
}

Trajectory simulate(std::span<const double> z0, const SimulationConfig& config) {
  Trajectory traj;
  traj.order = config.params.order;
  traj.adaptive = config.controller == ControllerKind::kAdaptive;
  traj.dt = config.dt;
  if (std::isfinite(config.dt) && config.dt > 0.0 && std::isfinite(config.horizon)) {
    traj.reserve(step_count(config.horizon, config.dt) + 1);
  }
  simulate(z0, config, [&traj](const Sample& s) { traj.append(s); });
  return traj;
}

RunMetrics compute_metrics(const Trajectory& trajectory, double epsilon, double tail_fraction,
                           double band) {
  const std::size_t n = trajectory.size();
  if (n == 0) throw DomainError("compute_metrics: empty trajectory");
  if (!(tail_fraction > 0.0 && tail_fraction < 1.0)) {
    throw DomainError("compute_metrics: tail_fraction must lie in (0, 1)");
  }
  if (!(epsilon > 0.0) || !(band >= 0.0)) {
    throw DomainError("compute_metrics: epsilon must be > 0 and band >= 0");
  }
  const auto tail_count = static_cast<std::size_t>(
                              std::llround(tail_fraction * static_cast<double>(n - 1))) +
                          1;
  if (tail_count < 10) {
    throw DomainError("compute_metrics: tail window holds " + std::to_string(tail_count) +
                      " samples, at least 10 are required");
  }
  const std::size_t start = n - tail_count;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

  RunMetrics m{kInf, kInf, -kInf, kNaN, kNaN, 0.0};

  for (std::size_t i = 0; i < n; ++i) {
    bool converged = false;
    if (trajectory.adaptive) {
      converged = trajectory.v1[i] <= epsilon;
    } else {
      double norm = 0.0;
      for (double zi : trajectory.state(i)) norm = std::max(norm, std::abs(zi));
      converged = norm <= band;
    }
    if (converged) {
      m.convergence_time = trajectory.t[i];
      break;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(m.peak_v1_after_crossing)) {
      if (trajectory.v1[i] <= epsilon) m.peak_v1_after_crossing = trajectory.v1[i];
    } else {
      m.peak_v1_after_crossing = std::max(m.peak_v1_after_crossing, trajectory.v1[i]);
    }
  }

  for (std::size_t i = start; i < n; ++i) {
    m.tail_inf_v1 = std::min(m.tail_inf_v1, trajectory.v1[i]);
    m.tail_sup_v1 = std::max(m.tail_sup_v1, trajectory.v1[i]);
    for (double zi : trajectory.state(i)) {
      m.tail_sup_state_norm = std::max(m.tail_sup_state_norm, std::abs(zi));
    }
  }
  if (trajectory.adaptive && !trajectory.phi_hat.empty()) {
    m.tail_sup_phi_hat = 0.0;
    for (std::size_t i = start; i < n; ++i) {
      m.tail_sup_phi_hat = std::max(m.tail_sup_phi_hat, trajectory.phi_hat[i]);
    }
  }
  return m;
}

}  // namespace chainstab
