#include "chainstab/gain_synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chainstab/errors.hpp"

namespace chainstab {
namespace {

constexpr double kPivotTolerance = 1e-12;
constexpr double kProductTolerance = 1e-12;

void require_conjugate_closed(std::span<const std::complex<double>> roots) {
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    const auto& a = roots[i];
    const double tol = 1e-9 * std::max(1.0, std::abs(a));
    if (std::abs(a.imag()) <= tol) {
      used[i] = true;
      continue;
    }
    bool matched = false;
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (!used[j] && std::abs(roots[j] - std::conj(a)) <= tol) {
        used[i] = used[j] = true;
        matched = true;
        break;
      }
    }
    if (!matched) {
      throw DomainError("gains_from_roots: root set is not closed under conjugation");
    }
  }
}

}  // namespace

GainVector::GainVector(std::vector<double> gains) : gains_(std::move(gains)) {
  if (gains_.empty()) {
    throw DomainError("GainVector: at least one gain is required");
  }
  for (std::size_t i = 0; i < gains_.size(); ++i) {
    if (!std::isfinite(gains_[i]) || gains_[i] <= 0.0) {
      throw DomainError("GainVector: l_" + std::to_string(i + 1) +
                        " must be finite and strictly positive");
    }
  }
  if (!is_hurwitz(expand_nested(std::span<const double>(gains_)))) {
    throw DomainError("GainVector: nested polynomial is not Hurwitz");
  }
}

std::vector<double> expand_nested(std::span<const double> gains) {
  if (gains.empty()) {
    throw DomainError("expand_nested: empty gain list");
  }
  const std::size_t r = gains.size();
  std::vector<double> coeffs(r + 1);
  coeffs[0] = 1.0;
  double product = 1.0;
  for (std::size_t j = 1; j <= r; ++j) {
    const double l = gains[r - j];
    if (!std::isfinite(l)) {
      throw DomainError("expand_nested: gain is not finite");
    }
    product *= l;
    coeffs[j] = product;
  }
  return coeffs;
}

std::vector<double> expand_nested(const GainVector& gains) {
  return expand_nested(gains.values());
}

GainVector gains_from_roots(std::span<const std::complex<double>> roots) {
  if (roots.empty()) {
    throw DomainError("gains_from_roots: at least one root is required");
  }
  for (const auto& root : roots) {
    if (!std::isfinite(root.real()) || !std::isfinite(root.imag())) {
      throw DomainError("gains_from_roots: root is not finite");
    }
    if (!(root.real() < 0.0)) {
      throw DomainError("gains_from_roots: root set is not Hurwitz (Re >= 0)");
    }
  }
  require_conjugate_closed(roots);

  // Monic polynomial, descending powers.
  std::vector<std::complex<double>> poly{1.0};
  for (const auto& root : roots) {
    std::vector<std::complex<double>> next(poly.size() + 1, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i] += poly[i];
      next[i + 1] -= root * poly[i];
    }
    poly = std::move(next);
  }

  const std::size_t r = roots.size();
  std::vector<double> gains(r);
  double previous = 1.0;
  for (std::size_t j = 1; j <= r; ++j) {
    if (std::abs(previous) < kProductTolerance) {
      throw DomainError("gains_from_roots: degenerate roots, gain l_" +
                        std::to_string(r - j + 1) + " is not recoverable");
    }
    const double coefficient = poly[j].real();
    gains[r - j] = coefficient / previous;
    previous = coefficient;
  }
  for (std::size_t i = 0; i < r; ++i) {
    if (!(gains[i] > 0.0)) {
      throw DomainError("gains_from_roots: implied gain l_" + std::to_string(i + 1) +
                        " is not positive");
    }
  }
  return GainVector(std::move(gains));
}

GainVector default_gains(std::size_t order) {
  std::vector<std::complex<double>> roots(order, {-1.0, 0.0});
  return gains_from_roots(roots);
}

bool is_hurwitz(std::span<const double> coeffs) {
  if (coeffs.size() < 2) {
    throw DomainError("is_hurwitz: polynomial degree must be at least 1");
  }
  if (coeffs.front() == 0.0 || !std::isfinite(coeffs.front())) {
    throw DomainError("is_hurwitz: leading coefficient must be nonzero");
  }
  for (double c : coeffs) {
    if (!std::isfinite(c)) throw DomainError("is_hurwitz: coefficient is not finite");
  }

  const std::size_t n = coeffs.size() - 1;
  const double lead = coeffs.front();
  // Two working rows of the Routh array, normalized so the leading entry is +1.
  const std::size_t width = n / 2 + 1;
  std::vector<double> upper(width, 0.0), lower(width, 0.0);
  for (std::size_t i = 0; i <= n; ++i) {
    const double c = coeffs[i] / lead;
    (i % 2 == 0 ? upper : lower)[i / 2] = c;
  }

  for (std::size_t row = 1; row <= n; ++row) {
    const double pivot = lower[0];
    if (!(pivot > kPivotTolerance)) return false;
    std::vector<double> next(width, 0.0);
    for (std::size_t j = 0; j + 1 < width; ++j) {
      next[j] = (pivot * upper[j + 1] - upper[0] * lower[j + 1]) / pivot;
    }
    upper = std::move(lower);
    lower = std::move(next);
  }
  return true;
}

}  // namespace chainstab
