#include "chainstab/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "chainstab/errors.hpp"

namespace chainstab {
namespace {

void require_order(std::span<const double> z, const HongParams& params, const char* what) {
  if (z.size() != params.order) {
    throw DomainError(std::string(what) + ": state has " + std::to_string(z.size()) +
                      " components, chain order is " + std::to_string(params.order));
  }
}

double inf_norm(std::span<const double> z) {
  double m = 0.0;
  for (double x : z) m = std::max(m, std::abs(x));
  return m;
}

// Keeps the k directions with the smallest objective values.
class BestDirections {
 public:
  explicit BestDirections(std::size_t k) : k_(k) {}

  void offer(double value, const std::vector<double>& direction) {
    if (entries_.size() == k_ && value >= entries_.back().first) return;
    auto pos = std::upper_bound(entries_.begin(), entries_.end(), value,
                                [](double v, const auto& e) { return v < e.first; });
    entries_.insert(pos, {value, direction});
    if (entries_.size() > k_) entries_.pop_back();
  }

  const std::vector<std::pair<double, std::vector<double>>>& entries() const { return entries_; }

 private:
  std::size_t k_;
  std::vector<std::pair<double, std::vector<double>>> entries_;
};

void normalize(std::vector<double>& d) {
  double norm = 0.0;
  for (double x : d) norm += x * x;
  norm = std::sqrt(norm);
  for (auto& x : d) x /= norm;
}

// Compass search over unit directions, minimizing objective(direction).
template <typename Objective>
double compass_minimize(std::vector<double> d, double value, const Objective& objective) {
  double step = 0.05;
  std::vector<double> trial(d.size());
  int evaluations = 0;
  while (step > 1e-8 && evaluations < 20000) {
    bool improved = false;
    for (std::size_t i = 0; i < d.size() && !improved; ++i) {
      for (double direction : {1.0, -1.0}) {
        trial = d;
        trial[i] += direction * step;
        normalize(trial);
        const double v = objective(trial);
        ++evaluations;
        if (v < value) {
          d = trial;
          value = v;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return value;
}

constexpr std::size_t kRefineStarts = 8;

}  // namespace

double v1_from_virtual(std::span<const double> z, std::span<const double> virtual_controls,
                       const HongParams& params) {
  double total = 0.0;
  for (std::size_t j = 0; j < params.order; ++j) {
    const double b = params.beta[j];
    const double zj = z[j];
    const double vj = virtual_controls[j];
    // Antiderivative of [s]^b is |s|^{b+1} / (b+1).
    const double term = (std::pow(std::abs(zj), b + 1.0) - std::pow(std::abs(vj), b + 1.0)) /
                            (b + 1.0) -
                        signed_power(vj, b) * (zj - vj);
    total += term;
  }
  // Each term is a non-negative integral; round-off can leave a tiny negative.
  return std::max(total, 0.0);
}

double v1(std::span<const double> z, const HongParams& params) {
  require_order(z, params, "v1");
  const auto fb = hong_u0(z, params);
  return v1_from_virtual(z, fb.virtual_controls, params);
}

double dv1_dzr(std::span<const double> z, const HongParams& params) {
  require_order(z, params, "dv1_dzr");
  const auto fb = hong_u0(z, params);
  const std::size_t r = params.order;
  const double b = params.beta[r - 1];
  return signed_power(z[r - 1], b) - signed_power(fb.virtual_controls[r - 1], b);
}

std::vector<double> v1_gradient_fd(std::span<const double> z, const HongParams& params,
                                   double h) {
  require_order(z, params, "v1_gradient_fd");
  if (!std::isfinite(h) || h <= 0.0) {
    throw DomainError("v1_gradient_fd: step must be finite and positive");
  }
  std::vector<double> grad(z.size());
  std::vector<double> probe(z.begin(), z.end());
  for (std::size_t i = 0; i < z.size(); ++i) {
    probe[i] = z[i] + h;
    const double up = v1(probe, params);
    probe[i] = z[i] - h;
    const double down = v1(probe, params);
    probe[i] = z[i];
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

std::vector<double> v1_gradient_fd(std::span<const double> z, const HongParams& params) {
  return v1_gradient_fd(z, params, 1e-6 * std::max(1.0, inf_norm(z)));
}

double v1_dot_nominal(std::span<const double> z, const HongParams& params) {
  require_order(z, params, "v1_dot_nominal");
  const std::size_t r = params.order;
  const auto fb = hong_u0(z, params);
  const double b = params.beta[r - 1];
  const double last = signed_power(z[r - 1], b) - signed_power(fb.virtual_controls[r - 1], b);
  double rate = last * fb.u0;
  if (r > 1) {
    const auto grad = v1_gradient_fd(z, params);
    for (std::size_t i = 0; i + 1 < r; ++i) rate += grad[i] * z[i + 1];
  }
  return rate;
}

HomogeneityDegrees homogeneity_degrees(const HongParams& params) {
  const double k = params.k_hom;
  const double r = static_cast<double>(params.order);
  HomogeneityDegrees d{2.0 + k, 1.0 + (2.0 - r) * k, 0.0};
  d.alpha_prime = d.kappa2 / d.kappa1;
  if (!(d.alpha_prime > 0.0 && d.alpha_prime < 1.0)) {
    throw ConfigError("homogeneity_degrees: alpha' = " + std::to_string(d.alpha_prime) +
                      " is outside (0, 1)");
  }
  return d;
}

std::vector<double> project_to_unit_level(std::span<const double> z, const HongParams& params) {
  const double level = v1(z, params);
  if (!(level > 0.0)) {
    throw DomainError("project_to_unit_level: V1 vanishes at this point");
  }
  const double kappa1 = 2.0 + params.k_hom;
  return dilate(z, std::pow(level, -1.0 / kappa1), params.weights);
}

HomogeneityCertificate estimate_constants(const HongParams& params, std::size_t n_samples,
                                          std::uint64_t seed, LevelSetSearch search) {
  if (n_samples == 0) {
    throw DomainError("estimate_constants: n_samples must be at least 1");
  }
  const auto degrees = homogeneity_degrees(params);
  HomogeneityCertificate cert{degrees.kappa1, degrees.kappa2, degrees.alpha_prime,
                              0.0,            std::numeric_limits<double>::infinity(),
                              (degrees.kappa1 + params.k_hom) / degrees.kappa1};

  const auto neg_abs_partial = [&](const std::vector<double>& d) {
    return -std::abs(dv1_dzr(project_to_unit_level(d, params), params));
  };
  const auto decrease_rate = [&](const std::vector<double>& d) {
    return -v1_dot_nominal(project_to_unit_level(d, params), params);
  };

  const bool refine = search == LevelSetSearch::kSamplingRefined;
  BestDirections best_partial(refine ? kRefineStarts : 0);
  BestDirections best_decrease(refine ? kRefineStarts : 0);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> direction(params.order);
  for (std::size_t n = 0; n < n_samples; ++n) {
    double norm = 0.0;
    do {
      norm = 0.0;
      for (auto& x : direction) {
        x = normal(rng);
        norm += x * x;
      }
    } while (norm == 0.0);
    norm = std::sqrt(norm);
    for (auto& x : direction) x /= norm;

    const double partial = neg_abs_partial(direction);
    const double decrease = decrease_rate(direction);
    cert.c_prime = std::max(cert.c_prime, -partial);
    cert.c = std::min(cert.c, decrease);
    if (refine) {
      best_partial.offer(partial, direction);
      best_decrease.offer(decrease, direction);
    }
  }

  if (refine) {
    for (const auto& [value, start] : best_partial.entries()) {
      cert.c_prime = std::max(cert.c_prime, -compass_minimize(start, value, neg_abs_partial));
    }
    for (const auto& [value, start] : best_decrease.entries()) {
      cert.c = std::min(cert.c, compass_minimize(start, value, decrease_rate));
    }
  }

  if (!(cert.c > 0.0)) {
    throw ConfigError(
        "estimate_constants: closed loop is not certified decreasing on {V1 = 1} "
        "(sampled min of -dV1/dt = " +
        std::to_string(cert.c) + ")");
  }
  return cert;
}

double convergence_time_bound(double v1_initial, double c, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("convergence_time_bound: alpha must lie in (0, 1)");
  }
  if (!std::isfinite(c) || c <= 0.0) {
    throw DomainError("convergence_time_bound: c must be finite and positive");
  }
  if (!std::isfinite(v1_initial) || v1_initial < 0.0) {
    throw DomainError("convergence_time_bound: V1(z0) must be finite and >= 0");
  }
  return std::pow(v1_initial, 1.0 - alpha) / (c * (1.0 - alpha));
}

AdaptiveBounds adaptive_bounds(const UncertaintyBounds& bounds, const AdaptiveConfig& cfg,
                               const HomogeneityCertificate& cert) {
  if (!(cert.alpha_prime > 0.0 && cert.alpha_prime < 1.0)) {
    throw DomainError("adaptive_bounds: alpha' must lie in (0, 1)");
  }
  if (!(cert.alpha > 0.0 && cert.alpha < 1.0)) {
    throw DomainError("adaptive_bounds: alpha must lie in (0, 1)");
  }
  const double gm = bounds.gamma_m;
  const double mismatch = cfg.kappa * gm - 1.0;
  const double phi_bar_cap =
      (bounds.phi_bar + mismatch * mismatch / (4.0 * gm * cfg.delta)) / gm;

  const double one_minus_ap = 1.0 - cert.alpha_prime;
  const double delta_cap =
      std::pow(std::pow(cfg.epsilon, one_minus_ap) +
                   cert.c_prime * one_minus_ap * gm * phi_bar_cap * phi_bar_cap /
                       (2.0 * cfg.k_adapt),
               1.0 / one_minus_ap);

  const double ceiling =
      2.0 * phi_bar_cap + cfg.k_adapt * convergence_time_bound(delta_cap, cert.c, cert.alpha);
  return {phi_bar_cap, delta_cap, ceiling};
}

}  // namespace chainstab
