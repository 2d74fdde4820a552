#pragma once

// Scalar nonlinearities and the weighted dilation group used by every
// homogeneous feedback law and Lyapunov function in the library.

#include <cstddef>
#include <span>
#include <vector>

namespace chainstab {

/// State of an integrator chain of order r, (z_1, ..., z_r).
using ChainState = std::vector<double>;

/// |a|^theta * sign(a). Odd, continuous for theta > 0.
/// Throws DomainError for non-finite a or theta <= 0.
double signed_power(double a, double theta);

/// -1, 0 or +1. sign(0) is 0, matching signed_power(0, theta) == 0.
int sign(double a);

/// a / max(1, |a|).
double saturate(double a);

/// Continuous switch between 0 (|a| <= epsilon/2) and 1 (|a| >= epsilon),
/// affine in between.
double nu_epsilon(double a, double epsilon);

/// Weights (p_1, ..., p_r) with p_i = 1 + (i-1) k_hom.
class DilationWeights {
 public:
  /// Validates that weights are positive and match 1 + (i-1) k_hom.
  DilationWeights(std::vector<double> weights, double k_hom);

  static DilationWeights for_chain(std::size_t order, double k_hom);

  std::span<const double> values() const noexcept { return weights_; }
  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  double k_hom() const noexcept { return k_hom_; }

 private:
  std::vector<double> weights_;
  double k_hom_;
};

/// Component i becomes lambda^{p_i} z_i.
ChainState dilate(std::span<const double> z, double lambda,
                  const DilationWeights& weights);

}  // namespace chainstab
