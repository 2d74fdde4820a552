#include "chainstab/disturbance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chainstab/errors.hpp"

namespace chainstab {
namespace {

// splitmix64 finalizer: maps (seed, segment index) to an independent draw
// without any sequential state, so evaluation order does not matter.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit_draw(std::uint64_t seed, std::int64_t segment) {
  const std::uint64_t bits = mix(mix(seed) ^ static_cast<std::uint64_t>(segment));
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

constexpr double kSlack = 1e-12;

}  // namespace

DisturbanceSpec DisturbanceSpec::constant(double value) {
  DisturbanceSpec s;
  s.kind = DisturbanceKind::kConstant;
  s.offset = value;
  return s;
}

DisturbanceSpec DisturbanceSpec::sinusoid(double amplitude, double omega, double phase,
                                          double offset) {
  DisturbanceSpec s;
  s.kind = DisturbanceKind::kSinusoid;
  s.amplitude = amplitude;
  s.omega = omega;
  s.phase = phase;
  s.offset = offset;
  return s;
}

DisturbanceSpec DisturbanceSpec::piecewise_random(double dwell, std::uint64_t seed) {
  DisturbanceSpec s;
  s.kind = DisturbanceKind::kPiecewiseRandom;
  s.dwell = dwell;
  s.seed = seed;
  return s;
}

Signal::Signal(const DisturbanceSpec& spec, double lower, double upper)
    : spec_(spec), lower_(lower), upper_(upper) {
  if (!(lower_ <= upper_)) {
    throw ConfigError("disturbance: empty admissible interval");
  }
  const auto outside = [&](double lo, double hi) {
    return lo < lower_ - kSlack || hi > upper_ + kSlack;
  };
  switch (spec_.kind) {
    case DisturbanceKind::kConstant:
      if (!std::isfinite(spec_.offset) || outside(spec_.offset, spec_.offset)) {
        throw ConfigError("disturbance: constant value " + std::to_string(spec_.offset) +
                          " lies outside [" + std::to_string(lower_) + ", " +
                          std::to_string(upper_) + "]");
      }
      break;
    case DisturbanceKind::kSinusoid: {
      if (!std::isfinite(spec_.amplitude) || !std::isfinite(spec_.omega) ||
          !std::isfinite(spec_.phase) || !std::isfinite(spec_.offset)) {
        throw ConfigError("disturbance: sinusoid parameters must be finite");
      }
      const double a = std::abs(spec_.amplitude);
      if (outside(spec_.offset - a, spec_.offset + a)) {
        throw ConfigError("disturbance: sinusoid range exceeds its bounds");
      }
      break;
    }
    case DisturbanceKind::kPiecewiseRandom:
      if (!std::isfinite(spec_.dwell) || spec_.dwell <= 0.0) {
        throw ConfigError("disturbance: piecewise_random dwell must be > 0");
      }
      if (std::isnan(spec_.low)) spec_.low = lower_;
      if (std::isnan(spec_.high)) spec_.high = upper_;
      if (!(spec_.low <= spec_.high) || outside(spec_.low, spec_.high)) {
        throw ConfigError("disturbance: piecewise_random range exceeds its bounds");
      }
      break;
  }
}

double Signal::operator()(double t) const {
  double value = 0.0;
  switch (spec_.kind) {
    case DisturbanceKind::kConstant:
      value = spec_.offset;
      break;
    case DisturbanceKind::kSinusoid:
      value = spec_.offset + spec_.amplitude * std::sin(spec_.omega * t + spec_.phase);
      break;
    case DisturbanceKind::kPiecewiseRandom: {
      const auto segment = static_cast<std::int64_t>(std::floor(t / spec_.dwell));
      value = spec_.low + (spec_.high - spec_.low) * unit_draw(spec_.seed, segment);
      break;
    }
  }
  return std::clamp(value, lower_, upper_);
}

Disturbance make_disturbance(const DisturbanceSpec& phi, const DisturbanceSpec& gamma,
                             const UncertaintyBounds& bounds) {
  return Disturbance(Signal(phi, -bounds.phi_bar, bounds.phi_bar),
                     Signal(gamma, bounds.gamma_m, bounds.gamma_M));
}

Disturbance nominal_disturbance() {
  return make_disturbance(DisturbanceSpec::constant(0.0), DisturbanceSpec::constant(1.0),
                          UncertaintyBounds(0.0, 1.0, 1.0));
}

}  // namespace chainstab
