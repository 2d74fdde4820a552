#pragma once

// Bounded uncertainty signals phi(t) and gamma(t).

#include <cstdint>
#include <limits>

#include "chainstab/controllers.hpp"

namespace chainstab {

enum class DisturbanceKind { kConstant, kSinusoid, kPiecewiseRandom };

/// Parameters of one scalar signal.
///
///   constant:         offset
///   sinusoid:         offset + amplitude sin(omega t + phase)
///   piecewise_random: uniform in [low, high], redrawn every `dwell` seconds
///
/// For piecewise_random an unset (NaN) low/high defaults to the edge of the
/// admissible interval.
struct DisturbanceSpec {
  DisturbanceKind kind = DisturbanceKind::kConstant;
  double offset = 0.0;
  double amplitude = 0.0;
  double omega = 0.0;
  double phase = 0.0;
  double dwell = 0.1;
  double low = kUnset;
  double high = kUnset;
  std::uint64_t seed = 0;

  static constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

  static DisturbanceSpec constant(double value);
  static DisturbanceSpec sinusoid(double amplitude, double omega, double phase = 0.0,
                                  double offset = 0.0);
  static DisturbanceSpec piecewise_random(double dwell, std::uint64_t seed);
};

/// One scalar signal confined to [lower, upper]. Evaluation is a pure
/// function of t.
class Signal {
 public:
  /// Throws ConfigError when the spec can leave [lower, upper].
  Signal(const DisturbanceSpec& spec, double lower, double upper);

  double operator()(double t) const;

  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }

 private:
  DisturbanceSpec spec_;
  double lower_;
  double upper_;
};

/// The pair (phi(t), gamma(t)) with phi in [-phi_bar, phi_bar] and
/// gamma in [gamma_m, gamma_M].
class Disturbance {
 public:
  Disturbance(Signal phi, Signal gamma) : phi_(phi), gamma_(gamma) {}

  double phi(double t) const { return phi_(t); }
  double gamma(double t) const { return gamma_(t); }

 private:
  Signal phi_;
  Signal gamma_;
};

Disturbance make_disturbance(const DisturbanceSpec& phi, const DisturbanceSpec& gamma,
                             const UncertaintyBounds& bounds);

/// Nominal chain: phi = 0, gamma = 1.
Disturbance nominal_disturbance();

}  // namespace chainstab
