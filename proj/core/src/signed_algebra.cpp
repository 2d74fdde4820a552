#include "chainstab/signed_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chainstab/errors.hpp"

namespace chainstab {
namespace {

void require_finite(double a, const char* what) {
  if (!std::isfinite(a)) {
    throw DomainError(std::string(what) + ": argument is not finite");
  }
}

}  // namespace

double signed_power(double a, double theta) {
  require_finite(a, "signed_power");
  if (!std::isfinite(theta) || theta <= 0.0) {
    throw DomainError("signed_power: exponent must be finite and positive");
  }
  if (a == 0.0) return 0.0;
  const double magnitude = std::pow(std::abs(a), theta);
  return a > 0.0 ? magnitude : -magnitude;
}

int sign(double a) {
  require_finite(a, "sign");
  return (a > 0.0) - (a < 0.0);
}

double saturate(double a) {
  require_finite(a, "saturate");
  return a / std::max(1.0, std::abs(a));
}

double nu_epsilon(double a, double epsilon) {
  require_finite(a, "nu_epsilon");
  if (!std::isfinite(epsilon) || epsilon <= 0.0) {
    throw DomainError("nu_epsilon: epsilon must be finite and positive");
  }
  return 0.5 + 0.5 * saturate((std::abs(a) - 0.75 * epsilon) / (0.25 * epsilon));
}

DilationWeights::DilationWeights(std::vector<double> weights, double k_hom)
    : weights_(std::move(weights)), k_hom_(k_hom) {
  if (!std::isfinite(k_hom_)) {
    throw DomainError("DilationWeights: k_hom is not finite");
  }
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double expected = 1.0 + static_cast<double>(i) * k_hom_;
    if (!(weights_[i] > 0.0)) {
      throw DomainError("DilationWeights: weight p_" + std::to_string(i + 1) +
                        " must be strictly positive");
    }
    if (std::abs(weights_[i] - expected) > 1e-12 * std::max(1.0, std::abs(expected))) {
      throw DomainError("DilationWeights: weight p_" + std::to_string(i + 1) +
                        " does not equal 1 + (i-1) k_hom");
    }
  }
}

DilationWeights DilationWeights::for_chain(std::size_t order, double k_hom) {
  std::vector<double> w(order);
  for (std::size_t i = 0; i < order; ++i) {
    w[i] = 1.0 + static_cast<double>(i) * k_hom;
  }
  return DilationWeights(std::move(w), k_hom);
}

ChainState dilate(std::span<const double> z, double lambda,
                  const DilationWeights& weights) {
  if (z.size() != weights.size()) {
    throw DomainError("dilate: state has " + std::to_string(z.size()) +
                      " components but " + std::to_string(weights.size()) +
                      " weights were given");
  }
  if (!std::isfinite(lambda) || lambda <= 0.0) {
    throw DomainError("dilate: lambda must be finite and positive");
  }
  ChainState out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    out[i] = std::pow(lambda, weights[i]) * z[i];
  }
  return out;
}

}  // namespace chainstab
