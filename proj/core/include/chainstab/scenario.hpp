#pragma once

// Scenario files: flat INI-style text with the sections
//   [system] [controller] [uncertainty] [adaptive] [simulation] [output]
// Every key is optional except system.order, and adaptive.epsilon when
// controller.kind = adaptive. Lines starting with ';' or '#' are comments.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chainstab/controllers.hpp"
#include "chainstab/disturbance.hpp"
#include "chainstab/simulation.hpp"

namespace chainstab {

struct Scenario {
  // [system]
  std::size_t order = 2;
  double k_hom = -0.05;
  ChainState z0{1.0, 1.0};

  // [controller]
  ControllerKind controller = ControllerKind::kRobust;
  NominalLaw law = NominalLaw::kHong;
  SimplifiedExponents exponents = SimplifiedExponents::kMatched;
  /// Explicit gains l_1..l_r. When empty the gains come from `roots`.
  std::vector<double> gains;
  std::vector<std::complex<double>> roots{{-1.0, 0.0}, {-1.0, 0.0}};
  double boundary_layer = 0.0;

  // [uncertainty]  True bounds. The adaptive controller never sees them.
  UncertaintyBounds bounds{0.5, 0.5, 1.5};
  DisturbanceSpec phi = DisturbanceSpec::constant(0.0);
  DisturbanceSpec gamma = DisturbanceSpec::constant(1.0);

  // [adaptive]
  std::optional<AdaptiveConfig> adaptive;
  std::size_t certificate_samples = 20000;

  // [simulation]
  double dt = 1e-4;
  double horizon = 10.0;
  Integrator integrator = Integrator::kRk4;
  double tail_fraction = 0.2;
  double band = 1e-2;
  /// V1 level used for peak-after-crossing on non-adaptive runs.
  double v1_epsilon = 1e-2;
  std::uint64_t seed = 1;

  // [output]
  std::string directory = ".";
  std::string name = "run";
};

bool operator==(const Scenario& a, const Scenario& b);

/// A robust scenario of the given order with every default filled in.
Scenario default_scenario(std::size_t order);

/// Parses and validates. Errors are ConfigError with messages prefixed by
/// the offending key path, e.g. "controller.controler: unknown key".
Scenario parse_scenario(std::string_view text);

/// Normalized text with every key; parse_scenario(render_scenario(s)) == s.
std::string render_scenario(const Scenario& scenario);

/// Commented template of default_scenario(2).
std::string defaults_template();

/// Gains from the explicit list or the root preset.
GainVector scenario_gains(const Scenario& scenario);

/// Hong parameters, disturbance and controller knowledge assembled from the
/// scenario. Robust runs receive the true bounds; adaptive runs do not.
SimulationConfig simulation_config(const Scenario& scenario);

/// Comma-separated roots, each "re", "re+imi" or "re-imi".
std::vector<std::complex<double>> parse_root_list(std::string_view text);

std::string to_string(ControllerKind kind);
std::string to_string(DisturbanceKind kind);

}  // namespace chainstab
