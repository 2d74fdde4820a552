// chainstab: simulate, bound and verify finite-time stabilizing controllers
// for perturbed integrator chains.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chainstab/errors.hpp"
#include "chainstab/gain_synthesis.hpp"
#include "chainstab/run.hpp"
#include "chainstab/scenario.hpp"
#include "chainstab/verify.hpp"

namespace {

using namespace chainstab;

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read scenario file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

void print_list(std::ostream& out, const char* label, const std::vector<double>& values) {
  out << label << " =";
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << (i ? ", " : " ") << values[i];
  }
  out << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-time stabilization of perturbed integrator chains"};
  app.require_subcommand(0, 1);

  bool dump_defaults = false;
  app.add_flag("--dump-defaults", dump_defaults, "Print a commented template scenario");

  auto* simulate_cmd = app.add_subcommand("simulate", "Run a scenario and write CSV + JSON");
  std::string simulate_file;
  bool echo = false;
  simulate_cmd->add_option("scenario", simulate_file, "Scenario file")->required();
  simulate_cmd->add_flag("--echo", echo, "Print the normalized scenario before running");

  auto* gains_cmd = app.add_subcommand("synthesize-gains", "Gains from closed-loop roots");
  std::size_t order = 0;
  std::vector<std::string> root_tokens;
  gains_cmd->add_option("--order", order, "Chain order r")->required()->check(CLI::PositiveNumber);
  gains_cmd->add_option("--roots", root_tokens,
                        "Roots as re or re+imi, space or comma separated (default: all -1)")
      ->delimiter(',');

  auto* bounds_cmd = app.add_subcommand("bounds", "Homogeneity constants and analytic bounds");
  std::string bounds_file;
  bounds_cmd->add_option("scenario", bounds_file, "Scenario file")->required();

  auto* verify_cmd = app.add_subcommand("verify", "Sampled property checks");
  std::string level = "quick";
  std::uint64_t seed = 1;
  std::vector<double> gain_override;
  verify_cmd->add_option("--level", level, "quick (1e3 samples) or full (1e5)")
      ->check(CLI::IsMember({"quick", "full"}));
  verify_cmd->add_option("--seed", seed, "Random seed");
  verify_cmd->add_option("--gains", gain_override, "Replace the default gains (fault injection)")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitSuccess : kExitConfigError;
  }

  try {
    if (dump_defaults) {
      std::cout << defaults_template();
      return kExitSuccess;
    }
    if (*simulate_cmd) {
      const auto scenario = load_scenario(simulate_file);
      if (echo) std::cout << render_scenario(scenario);
      return run_scenario(scenario, std::cerr).exit_status;
    }
    if (*gains_cmd) {
      std::vector<std::complex<double>> roots(order, {-1.0, 0.0});
      if (!root_tokens.empty()) {
        std::string joined;
        for (const auto& t : root_tokens) joined += (joined.empty() ? "" : ",") + t;
        roots = parse_root_list(joined);
      }
      if (roots.size() != order) {
        throw ConfigError("--roots: expected " + std::to_string(order) + " roots, got " +
                          std::to_string(roots.size()));
      }
      const auto gains = gains_from_roots(roots);
      std::cout.precision(17);
      print_list(std::cout, "gains",
                 std::vector<double>(gains.values().begin(), gains.values().end()));
      print_list(std::cout, "coefficients", expand_nested(gains));
      std::cout << "hurwitz = " << (is_hurwitz(expand_nested(gains)) ? "true" : "false") << '\n';
      return kExitSuccess;
    }
    if (*bounds_cmd) {
      std::cout << bounds_json(load_scenario(bounds_file));
      return kExitSuccess;
    }
    if (*verify_cmd) {
      const auto report =
          verify_suite(level == "full" ? VerifyLevel::kFull : VerifyLevel::kQuick, seed,
                       gain_override.empty() ? std::nullopt
                                             : std::optional<std::vector<double>>(gain_override));
      std::cout << report.render();
      return report.passed() ? kExitSuccess : kExitConfigError;
    }
    std::cerr << app.help();
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
}
