#pragma once

// Sampled property checks over the default configurations (orders 2 and 3).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace chainstab {

enum class VerifyLevel { kQuick, kFull };

/// 1e3 samples per property for kQuick, 1e5 for kFull.
std::size_t samples_for(VerifyLevel level);

struct PropertyResult {
  std::string name;
  std::size_t samples = 0;
  std::size_t violations = 0;
  double max_violation = 0.0;
  std::string note;

  bool passed() const noexcept { return violations == 0; }
};

struct VerifyReport {
  std::vector<PropertyResult> properties;

  bool passed() const noexcept;
  /// One line per property plus a summary; byte-identical for equal inputs.
  std::string render() const;
};

/// With gain_override, only the order of that gain list is checked and the
/// given gains replace the default preset. They are not validated first, so
/// a corrupted list shows up as failed properties.
VerifyReport verify_suite(VerifyLevel level, std::uint64_t seed,
                          const std::optional<std::vector<double>>& gain_override = std::nullopt);

}  // namespace chainstab
