#pragma once

// The Lyapunov function paired with hong_u0,
//
//   V1(z) = sum_j  int_{v_{j-1}}^{z_j} ([s]^{beta_{j-1}} - [v_{j-1}]^{beta_{j-1}}) ds,
//
// its z_r partial, homogeneity constants sampled on the level set {V1 = 1},
// and the closed-form time and overshoot bounds built from them.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "chainstab/controllers.hpp"

namespace chainstab {

/// Closed-form V1. Non-negative, zero only at the origin.
double v1(std::span<const double> z, const HongParams& params);

/// V1 given the virtual controls already computed by hong_u0 for the same z.
double v1_from_virtual(std::span<const double> z, std::span<const double> virtual_controls,
                       const HongParams& params);

/// [z_r]^{beta_{r-1}} - [v_{r-1}]^{beta_{r-1}}.
double dv1_dzr(std::span<const double> z, const HongParams& params);

/// Central-difference gradient of V1 with step h in every coordinate.
std::vector<double> v1_gradient_fd(std::span<const double> z, const HongParams& params, double h);

/// Same with h = 1e-6 max(1, |z|_inf).
std::vector<double> v1_gradient_fd(std::span<const double> z, const HongParams& params);

/// dV1/dt along the nominal closed loop z_r' = hong_u0(z): the first r-1
/// partials by finite differences, the last in closed form.
double v1_dot_nominal(std::span<const double> z, const HongParams& params);

struct HomogeneityDegrees {
  double kappa1;       ///< degree of V1, 2 + k_hom
  double kappa2;       ///< degree of dV1/dz_r, 1 + (2 - r) k_hom
  double alpha_prime;  ///< kappa2 / kappa1
};

/// Throws ConfigError if alpha_prime falls outside (0, 1).
HomogeneityDegrees homogeneity_degrees(const HongParams& params);

/// Constants of |dV1/dz_r| <= c' V1^{alpha'} and dV1/dt <= -c V1^{alpha}.
///
/// alpha = (kappa1 + k_hom) / kappa1 equals 1 for the linear case k_hom = 0;
/// finite-time bounds then do not apply and convergence_time_bound rejects it.
struct HomogeneityCertificate {
  double kappa1;
  double kappa2;
  double alpha_prime;
  double c_prime;
  double c;
  double alpha;
};

/// Maps a nonzero point onto {V1 = 1} along its dilation orbit.
std::vector<double> project_to_unit_level(std::span<const double> z, const HongParams& params);

enum class LevelSetSearch {
  /// Extrema over the sampled points only.
  kSampling,
  /// Sampling, then a compass search on the sphere of directions started
  /// from the best sampled points. Tightens c when the minimizer of -dV1/dt
  /// occupies a small region of the level set.
  kSamplingRefined,
};

/// Samples n_samples uniform directions on the unit sphere, projects them onto
/// {V1 = 1}, and takes c' = max |dV1/dz_r| and c = min (-dV1/dt) over them.
/// Draws are sequential from one seeded stream, so with kSampling a run with
/// more samples extends the point set of a run with fewer (c' never
/// decreases, c never increases).
/// Throws ConfigError when the estimated c is not positive.
HomogeneityCertificate estimate_constants(const HongParams& params, std::size_t n_samples,
                                          std::uint64_t seed,
                                          LevelSetSearch search = LevelSetSearch::kSampling);

/// V1_0^{1-alpha} / (c (1-alpha)).
double convergence_time_bound(double v1_initial, double c, double alpha);

/// Ultimate bounds of the adaptive closed loop.
struct AdaptiveBounds {
  double phi_bar_cap;      ///< (phi_bar + (kappa gamma_m - 1)^2 / (4 gamma_m delta)) / gamma_m
  double delta_cap;        ///< limsup bound on V1
  double phi_hat_ceiling;  ///< limsup bound on phi_hat
};

AdaptiveBounds adaptive_bounds(const UncertaintyBounds& bounds, const AdaptiveConfig& cfg,
                               const HomogeneityCertificate& cert);

}  // namespace chainstab
