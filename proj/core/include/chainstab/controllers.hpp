#pragma once

// Feedback laws for the perturbed chain
//   z_i' = z_{i+1},  z_r' = phi(t) + gamma(t) u.
//
// hong_u0 and simplified_u0 are nominal laws for the pure chain (phi = 0,
// gamma = 1). robust_u and adaptive_u wrap a nominal u0 for the perturbed
// chain with known and unknown uncertainty bounds respectively.

#include <cstddef>
#include <span>
#include <vector>

#include "chainstab/gain_synthesis.hpp"
#include "chainstab/signed_algebra.hpp"

namespace chainstab {

/// Exponent tables of the homogeneous backstepping law.
///
/// Index conventions (all zero-based containers):
///   p[i]     = p_{i+1} = 1 + i k_hom,        i = 0..r
///   alpha[i] = alpha_{i+1} = p_{i+2}/p_{i+1}, i = 0..r-1
///   beta[i]  = beta_i,  beta_0 = p_2, (beta_i + 1) p_{i+1} = beta_0 + 1
struct HongParams {
  std::size_t order;
  double k_hom;
  GainVector gains;
  std::vector<double> p;
  std::vector<double> alpha;
  std::vector<double> beta;
  DilationWeights weights;
  /// alpha_{i+1} / beta_i, the outer exponent of step i.
  std::vector<double> outer_exponent;
};

/// Builds the exponent tables. Requires k_hom <= 0 and 1 + r k_hom > 0.
HongParams hong_params(std::size_t order, double k_hom, GainVector gains);

/// Library default k_hom = -0.1 / r.
double default_k_hom(std::size_t order);

/// u0 together with the virtual controls v_0 = 0, v_1, ..., v_r = u0.
struct Feedback {
  double u0 = 0.0;
  std::vector<double> virtual_controls;
};

/// v_{i+1} = -l_{i+1} [ [z_{i+1}]^{beta_i} - [v_i]^{beta_i} ]^{alpha_{i+1}/beta_i}
Feedback hong_u0(std::span<const double> z, const HongParams& params);

/// Exponent convention for the simplified law (all beta_i = 1).
enum class SimplifiedExponents {
  /// Step i uses alpha_{i+1} = (1 + (i+1) k) / (1 + i k). Homogeneous of
  /// degree 1 + r k under the weights p_i = 1 + (i-1) k.
  kMatched,
  /// Step i uses (1 + (i+2) k) / (1 + (i+1) k), i.e. the exponent table
  /// shifted one index up. Homogeneous of degree 1 + (r+1) k under the
  /// weights 1 + i k instead.
  kShifted,
};

/// v_{i+1} = -l_{i+1} [z_{i+1} - v_i]^{e_i}, e_i chosen by `exponents`.
Feedback simplified_u0(std::span<const double> z, const HongParams& params,
                       SimplifiedExponents exponents = SimplifiedExponents::kMatched);

/// Bounds on the drift phi in [-phi_bar, phi_bar] and the control gain
/// gamma in [gamma_m, gamma_M].
struct UncertaintyBounds {
  UncertaintyBounds(double phi_bar, double gamma_m, double gamma_M);

  double phi_bar;
  double gamma_m;
  double gamma_M;

  friend bool operator==(const UncertaintyBounds&, const UncertaintyBounds&) = default;
};

/// (u0 + phi_bar sign(u0)) / gamma_m.
///
/// A positive boundary_layer replaces sign(u0) by saturate(u0 / boundary_layer);
/// that is a smoothed study variant, not the discontinuous law.
double robust_u(double u0, const UncertaintyBounds& bounds, double boundary_layer = 0.0);

struct AdaptiveConfig {
  AdaptiveConfig(double kappa, double delta, double eta, double k_adapt, double epsilon);

  double kappa;
  double delta;
  double eta;      ///< decay exponent, in (0, 1)
  double k_adapt;  ///< growth rate of phi_hat while V1 >= epsilon
  double epsilon;  ///< V1 threshold

  friend bool operator==(const AdaptiveConfig&, const AdaptiveConfig&) = default;
};

struct AdaptiveState {
  double phi_hat = 0.0;
};

struct AdaptiveControl {
  double u;
  double gamma_hat;
};

/// gamma_hat = kappa + delta |u0|;  u = gamma_hat u0 + phi_hat sign(u0).
AdaptiveControl adaptive_u(double u0, const AdaptiveState& state, const AdaptiveConfig& cfg,
                           double boundary_layer = 0.0);

/// k nu_eps(V1) - (1 - nu_eps(V1)) [phi_hat]^eta.
double phi_hat_rate(double v1, double phi_hat, const AdaptiveConfig& cfg);

}  // namespace chainstab
