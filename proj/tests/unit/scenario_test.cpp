#include "chainstab/errors.hpp"
#include "chainstab/scenario.hpp"

#include <gtest/gtest.h>

#include <random>
#include <string>

using namespace chainstab;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

Scenario random_scenario(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t r = 1 + rng() % 4;
  Scenario s = default_scenario(r);
  s.k_hom = -unit(rng) * 0.9 / static_cast<double>(r);
  for (auto& z : s.z0) z = 4.0 * unit(rng) - 2.0;
  s.controller = static_cast<ControllerKind>(rng() % 4);
  if (s.controller != ControllerKind::kAdaptive && rng() % 2 == 0) {
    s.law = NominalLaw::kSimplified;
    s.exponents = rng() % 2 ? SimplifiedExponents::kShifted : SimplifiedExponents::kMatched;
  }
  if (rng() % 2 == 0) {
    const auto preset = scenario_gains(s).values();
    s.gains.assign(preset.begin(), preset.end());
    for (auto& l : s.gains) l *= 1.0 + 1e-3 * unit(rng);
    if (!is_hurwitz(expand_nested(s.gains))) s.gains.clear();
  } else if (r >= 2) {
    const std::complex<double> pair(-0.5 - unit(rng), 0.3 + unit(rng));
    s.roots[0] = pair;
    s.roots[1] = std::conj(pair);
  }
  s.bounds = UncertaintyBounds(unit(rng), 0.2 + unit(rng), 1.5 + unit(rng));
  s.phi = DisturbanceSpec::sinusoid(s.bounds.phi_bar * unit(rng), 5.0 * unit(rng), unit(rng));
  s.phi.low = -s.bounds.phi_bar;
  s.phi.high = s.bounds.phi_bar;
  s.gamma = DisturbanceSpec::piecewise_random(0.05 + unit(rng), rng());
  s.gamma.low = s.bounds.gamma_m;
  s.gamma.high = s.bounds.gamma_M;
  if (s.controller == ControllerKind::kAdaptive) {
    s.adaptive = AdaptiveConfig(0.5 + unit(rng), 0.5 + unit(rng), 0.1 + 0.8 * unit(rng),
                                0.5 + 3.0 * unit(rng), 1e-3 + unit(rng));
    s.certificate_samples = 100 + rng() % 5000;
  }
  s.dt = 1e-4 * (1.0 + unit(rng));
  s.horizon = 1.0 + 20.0 * unit(rng);
  s.integrator = rng() % 2 ? Integrator::kEuler : Integrator::kRk4;
  s.tail_fraction = 0.05 + 0.5 * unit(rng);
  s.band = 1e-3 + unit(rng);
  s.v1_epsilon = 1e-3 + unit(rng);
  s.seed = rng();
  s.directory = "out/dir " + std::to_string(rng() % 100);
  s.name = "case_" + std::to_string(rng() % 1000);
  return s;
}

}  // namespace

TEST(ParseScenario, MinimalRobust) {
  const auto s = parse_scenario("[system]\norder = 2\n");
  EXPECT_EQ(s, default_scenario(2));
  EXPECT_EQ(s.controller, ControllerKind::kRobust);
  const auto echo = render_scenario(s);
  EXPECT_NE(echo.find("phi_bar = 0.5"), std::string::npos);
  EXPECT_NE(echo.find("dt = 0.0001"), std::string::npos);
}

TEST(ParseScenario, UnknownKeyIsNamed) {
  const auto message = error_of("[system]\norder = 2\n[controller]\ncontroler = robust\n");
  EXPECT_NE(message.find("controler"), std::string::npos) << message;
  EXPECT_NE(message.find("unknown key"), std::string::npos) << message;
}

TEST(ParseScenario, AdaptiveRequiresEpsilon) {
  const auto message =
      error_of("[system]\norder = 2\n[controller]\nkind = adaptive\n[adaptive]\nkappa = 1\n");
  EXPECT_NE(message.find("adaptive.epsilon"), std::string::npos) << message;
  EXPECT_NE(error_of("[system]\norder = 2\n[controller]\nkind = adaptive\n"), "");
}

TEST(ParseScenario, InvariantViolations) {
  const auto k = error_of("[system]\norder = 2\nk_hom = -1\n");
  EXPECT_NE(k.find("system.k_hom"), std::string::npos) << k;
  EXPECT_NE(k.find("p_i > 0"), std::string::npos) << k;

  EXPECT_NE(error_of("[controller]\nkind = robust\n").find("system.order"), std::string::npos);
  EXPECT_NE(error_of("[system]\norder = 2\nz0 = 1\n"), "");
  EXPECT_NE(error_of("[system]\norder = 2\n[controller]\ngains = 1, -1\n"), "");
  EXPECT_NE(error_of("[system]\norder = 2\n[controller]\ngains = 0.5, 2\nroots = -1, -1\n"), "");
  EXPECT_NE(error_of("[system]\norder = 2\n[controller]\nkind = fast\n"), "");
  EXPECT_NE(error_of("[system]\norder = 2\n[uncertainty]\nphi_bar = 0.1\nphi_offset = 0.2\n"),
            "");
  EXPECT_NE(error_of("[system]\norder = 2\n[simulation]\ndt = 0\n"), "");
  EXPECT_NE(error_of("[system]\norder = 2\n[system]\norder = 3\n"), "");
  EXPECT_NE(error_of("[system]\norder = 2\n[adaptive]\nepsilon = 1\n"), "");
  EXPECT_NE(error_of("[system]\norder = 2\n[bogus]\nx = 1\n"), "");
}

TEST(ParseScenario, CommentsAndRoots) {
  const auto s = parse_scenario(
      "; leading comment\n# another\n[system]\norder = 3\n[controller]\n"
      "roots = -1+0.5i, -1-0.5i, -2\n");
  ASSERT_EQ(s.roots.size(), 3u);
  EXPECT_EQ(s.roots[0], std::complex<double>(-1.0, 0.5));
  EXPECT_EQ(s.roots[1], std::complex<double>(-1.0, -0.5));
  EXPECT_EQ(s.roots[2], std::complex<double>(-2.0, 0.0));
}

TEST(ParseRootList, Forms) {
  const auto roots = parse_root_list("-1, -2.5+1e-1i, -2.5-0.1i");
  ASSERT_EQ(roots.size(), 3u);
  EXPECT_EQ(roots[1], std::complex<double>(-2.5, 0.1));
  EXPECT_THROW(parse_root_list("-1, x"), ConfigError);
}

TEST(RenderScenario, RoundTrip) {
  std::mt19937_64 rng(1234);
  for (int n = 0; n < 300; ++n) {
    const auto s = random_scenario(rng);
    const auto text = render_scenario(s);
    const auto parsed = parse_scenario(text);
    EXPECT_TRUE(parsed == s) << text;
    EXPECT_EQ(render_scenario(parsed), text);
  }
}

TEST(DefaultsTemplate, Parses) {
  EXPECT_EQ(parse_scenario(defaults_template()), default_scenario(2));
}
