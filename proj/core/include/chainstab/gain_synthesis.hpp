#pragma once

// Gains l_1..l_r for the nested polynomial
//   y^r + l_r (y^{r-1} + l_{r-1} (y^{r-2} + ... + l_2 (y + l_1)))
// and the Routh-Hurwitz test used to validate them.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace chainstab {

/// Positive gains whose nested polynomial is Hurwitz. Both conditions are
/// checked on construction.
class GainVector {
 public:
  explicit GainVector(std::vector<double> gains);

  std::span<const double> values() const noexcept { return gains_; }
  std::size_t size() const noexcept { return gains_.size(); }
  /// Zero-based: operator[](0) is l_1.
  double operator[](std::size_t i) const { return gains_[i]; }

  friend bool operator==(const GainVector&, const GainVector&) = default;

 private:
  std::vector<double> gains_;
};

/// Monic coefficients in descending powers, (1, l_r, l_r l_{r-1}, ...,
/// l_r ... l_1). Accepts arbitrary finite gains so that invalid candidates
/// can be tested; rejects an empty list.
std::vector<double> expand_nested(std::span<const double> gains);
std::vector<double> expand_nested(const GainVector& gains);

/// Back-solves the nested form from the monic polynomial with the given
/// roots. Roots must be closed under conjugation and lie in Re < 0.
GainVector gains_from_roots(std::span<const std::complex<double>> roots);

/// All roots at -1.
GainVector default_gains(std::size_t order);

/// Routh-Hurwitz test on descending-power coefficients. A first-column
/// entry with magnitude below 1e-12 counts as failure.
bool is_hurwitz(std::span<const double> coeffs);

}  // namespace chainstab
