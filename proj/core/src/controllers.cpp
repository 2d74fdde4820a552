#include "chainstab/controllers.hpp"

#include <cmath>
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

double switching(double u0, double boundary_layer) {
  if (boundary_layer > 0.0) return saturate(u0 / boundary_layer);
  return static_cast<double>(sign(u0));
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

HongParams hong_params(std::size_t order, double k_hom, GainVector gains) {
  if (order == 0) {
    throw ConfigError("hong_params: chain order must be at least 1");
  }
  if (!std::isfinite(k_hom)) {
    throw ConfigError("hong_params: k_hom is not finite");
  }
  if (k_hom > 0.0) {
    throw ConfigError("hong_params: k_hom must be <= 0");
  }
  const double r = static_cast<double>(order);
  if (!(1.0 + r * k_hom > 0.0)) {
    throw ConfigError("hong_params: k_hom must exceed -1/r so that every p_i > 0 (p_" +
                      std::to_string(order + 1) + " = " + std::to_string(1.0 + r * k_hom) +
                      ")");
  }
  if (gains.size() != order) {
    throw ConfigError("hong_params: expected " + std::to_string(order) + " gains, got " +
                      std::to_string(gains.size()));
  }

  std::vector<double> p(order + 1);
  for (std::size_t i = 0; i <= order; ++i) p[i] = 1.0 + static_cast<double>(i) * k_hom;

  std::vector<double> alpha(order), beta(order), outer(order);
  for (std::size_t i = 0; i < order; ++i) alpha[i] = p[i + 1] / p[i];
  beta[0] = p[1];
  for (std::size_t i = 1; i < order; ++i) beta[i] = (beta[0] + 1.0) / p[i] - 1.0;
  for (std::size_t i = 0; i < order; ++i) outer[i] = alpha[i] / beta[i];

  auto weights = DilationWeights::for_chain(order, k_hom);
  return HongParams{order,           k_hom,           std::move(gains), std::move(p),
                    std::move(alpha), std::move(beta), std::move(weights), std::move(outer)};
}

double default_k_hom(std::size_t order) {
  if (order == 0) throw ConfigError("default_k_hom: chain order must be at least 1");
  return -0.1 / static_cast<double>(order);
}

Feedback hong_u0(std::span<const double> z, const HongParams& params) {
  require_order(z, params, "hong_u0");
  Feedback fb;
  fb.virtual_controls.assign(params.order + 1, 0.0);
  auto& v = fb.virtual_controls;
  for (std::size_t i = 0; i < params.order; ++i) {
    const double b = params.beta[i];
    const double inner = signed_power(z[i], b) - signed_power(v[i], b);
    v[i + 1] = -params.gains[i] * signed_power(inner, params.outer_exponent[i]);
  }
  fb.u0 = v.back();
  return fb;
}

Feedback simplified_u0(std::span<const double> z, const HongParams& params,
                       SimplifiedExponents exponents) {
  require_order(z, params, "simplified_u0");
  Feedback fb;
  fb.virtual_controls.assign(params.order + 1, 0.0);
  auto& v = fb.virtual_controls;
  const double k = params.k_hom;
  for (std::size_t i = 0; i < params.order; ++i) {
    const double di = static_cast<double>(i);
    const double e = exponents == SimplifiedExponents::kMatched
                         ? params.alpha[i]
                         : (1.0 + (di + 2.0) * k) / (1.0 + (di + 1.0) * k);
    if (!(e > 0.0)) {
      throw DomainError("simplified_u0: exponent at step " + std::to_string(i) +
                        " is not positive for this k_hom");
    }
    v[i + 1] = -params.gains[i] * signed_power(z[i] - v[i], e);
  }
  fb.u0 = v.back();
  return fb;
}

UncertaintyBounds::UncertaintyBounds(double phi_bar_, double gamma_m_, double gamma_M_)
    : phi_bar(phi_bar_), gamma_m(gamma_m_), gamma_M(gamma_M_) {
  if (!std::isfinite(phi_bar) || phi_bar < 0.0) {
    throw ConfigError("uncertainty: phi_bar must be finite and >= 0");
  }
  if (!finite_positive(gamma_m)) {
    throw ConfigError("uncertainty: gamma_m must be finite and > 0");
  }
  if (!std::isfinite(gamma_M) || gamma_M < gamma_m) {
    throw ConfigError("uncertainty: gamma_M must be finite and >= gamma_m");
  }
}

double robust_u(double u0, const UncertaintyBounds& bounds, double boundary_layer) {
  return (u0 + bounds.phi_bar * switching(u0, boundary_layer)) / bounds.gamma_m;
}

AdaptiveConfig::AdaptiveConfig(double kappa_, double delta_, double eta_, double k_adapt_,
                               double epsilon_)
    : kappa(kappa_), delta(delta_), eta(eta_), k_adapt(k_adapt_), epsilon(epsilon_) {
  if (!finite_positive(kappa)) throw ConfigError("adaptive: kappa must be > 0");
  if (!finite_positive(delta)) throw ConfigError("adaptive: delta must be > 0");
  if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("adaptive: eta must lie in (0, 1)");
  if (!finite_positive(k_adapt)) throw ConfigError("adaptive: k_adapt must be > 0");
  if (!finite_positive(epsilon)) throw ConfigError("adaptive: epsilon must be > 0");
}

AdaptiveControl adaptive_u(double u0, const AdaptiveState& state, const AdaptiveConfig& cfg,
                           double boundary_layer) {
  const double gamma_hat = cfg.kappa + cfg.delta * std::abs(u0);
  return {gamma_hat * u0 + state.phi_hat * switching(u0, boundary_layer), gamma_hat};
}

double phi_hat_rate(double v1, double phi_hat, const AdaptiveConfig& cfg) {
  if (!(v1 >= 0.0) || !std::isfinite(v1)) {
    throw DomainError("phi_hat_rate: V1 must be finite and >= 0");
  }
  if (!(phi_hat >= 0.0) || !std::isfinite(phi_hat)) {
    throw DomainError("phi_hat_rate: phi_hat must be finite and >= 0");
  }
  const double nu = nu_epsilon(v1, cfg.epsilon);
  return cfg.k_adapt * nu - (1.0 - nu) * signed_power(phi_hat, cfg.eta);
}

}  // namespace chainstab
