#include "chainstab/scenario.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "chainstab/errors.hpp"

namespace chainstab {
namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> keys = [] {
    std::set<std::string> uncertainty{"phi_bar", "gamma_m", "gamma_M"};
    for (const std::string signal : {"phi", "gamma"}) {
      for (const std::string field :
           {"kind", "offset", "amplitude", "omega", "phase", "dwell", "low", "high", "seed"}) {
        uncertainty.insert(signal + "_" + field);
      }
    }
    return std::map<std::string, std::set<std::string>>{
        {"system", {"order", "k_hom", "z0"}},
        {"controller", {"kind", "law", "exponents", "gains", "roots", "boundary_layer"}},
        {"uncertainty", uncertainty},
        {"adaptive", {"kappa", "delta", "eta", "k_adapt", "epsilon", "certificate_samples"}},
        {"simulation",
         {"dt", "horizon", "integrator", "tail_fraction", "band", "v1_epsilon", "seed"}},
        {"output", {"directory", "name"}},
    };
  }();
  return keys;
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

double parse_real(const std::string& path, std::string_view token) {
  const std::string t = trim(token);
  double value = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (!t.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (t.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    fail(path, "expected a finite real number, got '" + t + "'");
  }
  return value;
}

std::uint64_t parse_unsigned(const std::string& path, std::string_view token) {
  const std::string t = trim(token);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    fail(path, "expected a non-negative integer, got '" + t + "'");
  }
  return value;
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (char ch : text) {
    if (ch == ',') {
      out.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  out.push_back(trim(current));
  if (out.size() == 1 && out.front().empty()) out.clear();
  return out;
}

std::vector<double> parse_real_list(const std::string& path, std::string_view text) {
  std::vector<double> values;
  for (const auto& token : split_list(text)) values.push_back(parse_real(path, token));
  if (values.empty()) fail(path, "expected a comma-separated list of numbers");
  return values;
}

// Accepts "re", "re+imi" and "re-imi", e.g. "-1", "-0.5+1.25i".
std::complex<double> parse_complex(const std::string& path, const std::string& token) {
  if (token.empty()) fail(path, "empty root");
  if (token.back() != 'i') return {parse_real(path, token), 0.0};
  const std::string body = token.substr(0, token.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) return {0.0, parse_real(path, body)};
  return {parse_real(path, body.substr(0, split)), parse_real(path, body.substr(split))};
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_real(values[i]);
  }
  return out;
}

std::string format_complex(const std::complex<double>& c) {
  if (c.imag() == 0.0) return format_real(c.real());
  std::string im = format_real(c.imag());
  if (im.front() != '-') im = "+" + im;
  return format_real(c.real()) + im + "i";
}

std::string to_string(NominalLaw law) { return law == NominalLaw::kHong ? "hong" : "simplified"; }
std::string to_string(SimplifiedExponents e) {
  return e == SimplifiedExponents::kMatched ? "matched" : "shifted";
}
std::string to_string(Integrator i) { return i == Integrator::kRk4 ? "rk4" : "euler"; }

template <typename Enum>
Enum parse_enum(const std::string& path, const std::string& value,
                std::initializer_list<std::pair<const char*, Enum>> choices) {
  std::string allowed;
  for (const auto& [name, e] : choices) {
    if (value == name) return e;
    allowed += allowed.empty() ? name : std::string(" | ") + name;
  }
  fail(path, "unknown value '" + value + "', expected " + allowed);
}

// Key lookup for one section, with key paths in error messages.
class Section {
 public:
  Section(const pt::ptree* node, std::string name) : node_(node), name_(std::move(name)) {}

  bool has(const std::string& key) const { return node_ && node_->find(key) != node_->not_found(); }
  std::string path(const std::string& key) const { return name_ + "." + key; }

  std::optional<std::string> raw(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return trim(node_->find(key)->second.data());
  }
  double real(const std::string& key, double fallback) const {
    auto v = raw(key);
    return v ? parse_real(path(key), *v) : fallback;
  }
  std::uint64_t integer(const std::string& key, std::uint64_t fallback) const {
    auto v = raw(key);
    return v ? parse_unsigned(path(key), *v) : fallback;
  }
  std::string text(const std::string& key, const std::string& fallback) const {
    auto v = raw(key);
    return v ? *v : fallback;
  }

 private:
  const pt::ptree* node_;
  std::string name_;
};

DisturbanceSpec parse_signal(const Section& sec, const std::string& prefix,
                             const DisturbanceSpec& fallback, double lower, double upper,
                             std::uint64_t default_seed) {
  DisturbanceSpec spec = fallback;
  const auto key = [&](const char* field) { return prefix + "_" + field; };
  if (auto kind = sec.raw(key("kind"))) {
    spec.kind = parse_enum<DisturbanceKind>(
        sec.path(key("kind")), *kind,
        {{"constant", DisturbanceKind::kConstant},
         {"sinusoid", DisturbanceKind::kSinusoid},
         {"piecewise_random", DisturbanceKind::kPiecewiseRandom}});
  }
  spec.offset = sec.real(key("offset"), spec.offset);
  spec.amplitude = sec.real(key("amplitude"), spec.amplitude);
  spec.omega = sec.real(key("omega"), spec.omega);
  spec.phase = sec.real(key("phase"), spec.phase);
  spec.dwell = sec.real(key("dwell"), spec.dwell);
  spec.low = sec.real(key("low"), lower);
  spec.high = sec.real(key("high"), upper);
  spec.seed = sec.integer(key("seed"), default_seed);
  return spec;
}

// Rebuilds every derived object so that invariant violations surface at
// parse time with the key that caused them.
void check_consistency(const Scenario& s) {
  try {
    (void)scenario_gains(s);
  } catch (const std::exception& e) {
    fail(s.gains.empty() ? "controller.roots" : "controller.gains", e.what());
  }
  try {
    (void)hong_params(s.order, s.k_hom, scenario_gains(s));
  } catch (const std::exception& e) {
    fail("system.k_hom", e.what());
  }
  try {
    (void)Signal(s.phi, -s.bounds.phi_bar, s.bounds.phi_bar);
  } catch (const std::exception& e) {
    fail("uncertainty.phi", e.what());
  }
  try {
    (void)Signal(s.gamma, s.bounds.gamma_m, s.bounds.gamma_M);
  } catch (const std::exception& e) {
    fail("uncertainty.gamma", e.what());
  }
  try {
    validate(simulation_config(s));
  } catch (const ConfigError& e) {
    fail("simulation", e.what());
  }
  if (!(s.tail_fraction > 0.0 && s.tail_fraction < 1.0)) {
    fail("simulation.tail_fraction", "must lie in (0, 1)");
  }
  if (!(s.band > 0.0)) fail("simulation.band", "must be > 0");
  if (!(s.v1_epsilon > 0.0)) fail("simulation.v1_epsilon", "must be > 0");
  if (s.name.empty()) fail("output.name", "must not be empty");
}

}  // namespace

std::vector<std::complex<double>> parse_root_list(std::string_view text) {
  std::vector<std::complex<double>> roots;
  for (const auto& token : split_list(text)) roots.push_back(parse_complex("roots", token));
  if (roots.empty()) fail("roots", "expected at least one root");
  return roots;
}

std::string to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::kOpenLoop: return "open_loop";
    case ControllerKind::kPure: return "pure";
    case ControllerKind::kRobust: return "robust";
    case ControllerKind::kAdaptive: return "adaptive";
  }
  return "?";
}

std::string to_string(DisturbanceKind kind) {
  switch (kind) {
    case DisturbanceKind::kConstant: return "constant";
    case DisturbanceKind::kSinusoid: return "sinusoid";
    case DisturbanceKind::kPiecewiseRandom: return "piecewise_random";
  }
  return "?";
}

bool operator==(const Scenario& a, const Scenario& b) {
  const auto same_signal = [](const DisturbanceSpec& x, const DisturbanceSpec& y) {
    const auto same = [](double p, double q) { return p == q || (std::isnan(p) && std::isnan(q)); };
    return x.kind == y.kind && same(x.offset, y.offset) && same(x.amplitude, y.amplitude) &&
           same(x.omega, y.omega) && same(x.phase, y.phase) && same(x.dwell, y.dwell) &&
           same(x.low, y.low) && same(x.high, y.high) && x.seed == y.seed;
  };
  return a.order == b.order && a.k_hom == b.k_hom && a.z0 == b.z0 &&
         a.controller == b.controller && a.law == b.law && a.exponents == b.exponents &&
         a.gains == b.gains && a.roots == b.roots && a.boundary_layer == b.boundary_layer &&
         a.bounds == b.bounds && same_signal(a.phi, b.phi) && same_signal(a.gamma, b.gamma) &&
         a.adaptive == b.adaptive && a.certificate_samples == b.certificate_samples &&
         a.dt == b.dt && a.horizon == b.horizon && a.integrator == b.integrator &&
         a.tail_fraction == b.tail_fraction && a.band == b.band &&
         a.v1_epsilon == b.v1_epsilon && a.seed == b.seed && a.directory == b.directory &&
         a.name == b.name;
}

Scenario default_scenario(std::size_t order) {
  if (order == 0) throw ConfigError("system.order: must be at least 1");
  Scenario s;
  s.order = order;
  s.k_hom = default_k_hom(order);
  s.z0.assign(order, 1.0);
  s.roots.assign(order, {-1.0, 0.0});
  s.phi.low = -s.bounds.phi_bar;
  s.phi.high = s.bounds.phi_bar;
  s.phi.seed = s.seed;
  s.gamma.low = s.bounds.gamma_m;
  s.gamma.high = s.bounds.gamma_M;
  s.gamma.seed = s.seed + 1;
  return s;
}

Scenario parse_scenario(std::string_view text) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("scenario: line " + std::to_string(e.line()) + ": " + e.message());
  }

  std::map<std::string, const pt::ptree*> sections;
  for (const auto& [name, node] : tree) {
    const auto known = schema().find(name);
    if (known == schema().end()) {
      if (node.empty()) fail(name, "unknown key (keys must appear inside a section)");
      fail(name, "unknown section");
    }
    for (const auto& [key, value] : node) {
      if (!known->second.contains(key)) fail(name + "." + key, "unknown key");
    }
    sections[name] = &node;
  }
  const auto section = [&](const std::string& name) {
    const auto it = sections.find(name);
    return Section(it == sections.end() ? nullptr : it->second, name);
  };

  const Section system = section("system");
  if (!system.has("order")) fail("system.order", "missing required key");
  const auto order = system.integer("order", 0);
  if (order == 0 || order > 64) fail("system.order", "must lie in [1, 64]");
  Scenario s = default_scenario(order);

  s.k_hom = system.real("k_hom", s.k_hom);
  if (auto z0 = system.raw("z0")) s.z0 = parse_real_list(system.path("z0"), *z0);
  if (s.z0.size() != s.order) {
    fail("system.z0", "expected " + std::to_string(s.order) + " components, got " +
                          std::to_string(s.z0.size()));
  }

  const Section controller = section("controller");
  if (auto kind = controller.raw("kind")) {
    s.controller = parse_enum<ControllerKind>(controller.path("kind"), *kind,
                                              {{"open_loop", ControllerKind::kOpenLoop},
                                               {"pure", ControllerKind::kPure},
                                               {"robust", ControllerKind::kRobust},
                                               {"adaptive", ControllerKind::kAdaptive}});
  }
  if (auto law = controller.raw("law")) {
    s.law = parse_enum<NominalLaw>(controller.path("law"), *law,
                                   {{"hong", NominalLaw::kHong},
                                    {"simplified", NominalLaw::kSimplified}});
  }
  if (auto e = controller.raw("exponents")) {
    s.exponents = parse_enum<SimplifiedExponents>(
        controller.path("exponents"), *e,
        {{"matched", SimplifiedExponents::kMatched}, {"shifted", SimplifiedExponents::kShifted}});
  }
  if (controller.has("gains") && controller.has("roots")) {
    fail("controller.gains", "give either gains or roots, not both");
  }
  if (auto gains = controller.raw("gains")) {
    s.gains = parse_real_list(controller.path("gains"), *gains);
    s.roots.clear();
    if (s.gains.size() != s.order) {
      fail("controller.gains", "expected " + std::to_string(s.order) + " gains, got " +
                                   std::to_string(s.gains.size()));
    }
  }
  if (auto roots = controller.raw("roots")) {
    s.roots.clear();
    for (const auto& token : split_list(*roots)) {
      s.roots.push_back(parse_complex(controller.path("roots"), token));
    }
    if (s.roots.empty()) fail("controller.roots", "expected at least one root");
    if (s.roots.size() != s.order) {
      fail("controller.roots", "expected " + std::to_string(s.order) + " roots, got " +
                                   std::to_string(s.roots.size()));
    }
  }
  s.boundary_layer = controller.real("boundary_layer", s.boundary_layer);

  const Section simulation = section("simulation");
  s.dt = simulation.real("dt", s.dt);
  s.horizon = simulation.real("horizon", s.horizon);
  if (auto integrator = simulation.raw("integrator")) {
    s.integrator = parse_enum<Integrator>(simulation.path("integrator"), *integrator,
                                          {{"rk4", Integrator::kRk4}, {"euler", Integrator::kEuler}});
  }
  s.tail_fraction = simulation.real("tail_fraction", s.tail_fraction);
  s.band = simulation.real("band", s.band);
  s.v1_epsilon = simulation.real("v1_epsilon", s.v1_epsilon);
  s.seed = simulation.integer("seed", s.seed);

  const Section uncertainty = section("uncertainty");
  try {
    s.bounds = UncertaintyBounds(uncertainty.real("phi_bar", s.bounds.phi_bar),
                                 uncertainty.real("gamma_m", s.bounds.gamma_m),
                                 uncertainty.real("gamma_M", s.bounds.gamma_M));
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("uncertainty: ") + e.what());
  }
  s.phi = parse_signal(uncertainty, "phi", s.phi, -s.bounds.phi_bar, s.bounds.phi_bar, s.seed);
  s.gamma = parse_signal(uncertainty, "gamma", s.gamma, s.bounds.gamma_m, s.bounds.gamma_M,
                         s.seed + 1);

  const Section adaptive = section("adaptive");
  if (s.controller == ControllerKind::kAdaptive) {
    if (!adaptive.has("epsilon")) fail("adaptive.epsilon", "missing required key");
    try {
      s.adaptive = AdaptiveConfig(adaptive.real("kappa", 1.0), adaptive.real("delta", 1.0),
                                  adaptive.real("eta", 0.5), adaptive.real("k_adapt", 2.0),
                                  adaptive.real("epsilon", 0.0));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("adaptive: ") + e.what());
    }
    s.certificate_samples = adaptive.integer("certificate_samples", s.certificate_samples);
    if (s.certificate_samples == 0) fail("adaptive.certificate_samples", "must be at least 1");
  } else if (sections.contains("adaptive")) {
    fail("adaptive", "section only applies to controller.kind = adaptive");
  }

  const Section output = section("output");
  s.directory = output.text("directory", s.directory);
  s.name = output.text("name", s.name);

  check_consistency(s);
  return s;
}

std::string render_scenario(const Scenario& s) {
  std::ostringstream out;
  out << "[system]\n";
  out << "order = " << s.order << "\n";
  out << "k_hom = " << format_real(s.k_hom) << "\n";
  out << "z0 = " << format_list(s.z0) << "\n";

  out << "\n[controller]\n";
  out << "kind = " << to_string(s.controller) << "\n";
  out << "law = " << to_string(s.law) << "\n";
  out << "exponents = " << to_string(s.exponents) << "\n";
  if (!s.gains.empty()) {
    out << "gains = " << format_list(s.gains) << "\n";
  } else {
    out << "roots = ";
    for (std::size_t i = 0; i < s.roots.size(); ++i) {
      out << (i ? ", " : "") << format_complex(s.roots[i]);
    }
    out << "\n";
  }
  out << "boundary_layer = " << format_real(s.boundary_layer) << "\n";

  out << "\n[uncertainty]\n";
  out << "phi_bar = " << format_real(s.bounds.phi_bar) << "\n";
  out << "gamma_m = " << format_real(s.bounds.gamma_m) << "\n";
  out << "gamma_M = " << format_real(s.bounds.gamma_M) << "\n";
  for (const auto& [prefix, spec] : {std::pair{"phi", &s.phi}, std::pair{"gamma", &s.gamma}}) {
    out << prefix << "_kind = " << to_string(spec->kind) << "\n";
    out << prefix << "_offset = " << format_real(spec->offset) << "\n";
    out << prefix << "_amplitude = " << format_real(spec->amplitude) << "\n";
    out << prefix << "_omega = " << format_real(spec->omega) << "\n";
    out << prefix << "_phase = " << format_real(spec->phase) << "\n";
    out << prefix << "_dwell = " << format_real(spec->dwell) << "\n";
    if (!std::isnan(spec->low)) out << prefix << "_low = " << format_real(spec->low) << "\n";
    if (!std::isnan(spec->high)) out << prefix << "_high = " << format_real(spec->high) << "\n";
    out << prefix << "_seed = " << spec->seed << "\n";
  }

  if (s.adaptive) {
    out << "\n[adaptive]\n";
    out << "kappa = " << format_real(s.adaptive->kappa) << "\n";
    out << "delta = " << format_real(s.adaptive->delta) << "\n";
    out << "eta = " << format_real(s.adaptive->eta) << "\n";
    out << "k_adapt = " << format_real(s.adaptive->k_adapt) << "\n";
    out << "epsilon = " << format_real(s.adaptive->epsilon) << "\n";
    out << "certificate_samples = " << s.certificate_samples << "\n";
  }

  out << "\n[simulation]\n";
  out << "dt = " << format_real(s.dt) << "\n";
  out << "horizon = " << format_real(s.horizon) << "\n";
  out << "integrator = " << to_string(s.integrator) << "\n";
  out << "tail_fraction = " << format_real(s.tail_fraction) << "\n";
  out << "band = " << format_real(s.band) << "\n";
  out << "v1_epsilon = " << format_real(s.v1_epsilon) << "\n";
  out << "seed = " << s.seed << "\n";

  out << "\n[output]\n";
  out << "directory = " << s.directory << "\n";
  out << "name = " << s.name << "\n";
  return out.str();
}

std::string defaults_template() {
  const Scenario s = default_scenario(2);
  std::ostringstream out;
  out << "; chainstab scenario template. Every key except system.order is optional.\n"
         "; Lines starting with ';' or '#' are comments.\n"
         "\n[system]\n"
         "; chain order r\n"
         "order = 2\n"
         "; homogeneity parameter, -1/r < k_hom <= 0 (default -0.1/r)\n"
      << "k_hom = " << format_real(s.k_hom) << "\n"
      << "; initial state, r comma-separated values\n"
      << "z0 = " << format_list(s.z0) << "\n"
      << "\n[controller]\n"
         "; open_loop | pure | robust | adaptive\n"
         "kind = robust\n"
         "; nominal law: hong | simplified (adaptive requires hong)\n"
         "law = hong\n"
         "; simplified law exponents: matched | shifted\n"
         "exponents = matched\n"
         "; either explicit gains l_1..l_r or closed-loop roots (complex as a+bi)\n"
         "; gains = 0.5, 2\n"
         "roots = -1, -1\n"
         "; boundary-layer half-width replacing sign(u0); 0 keeps the discontinuous law\n"
         "boundary_layer = 0\n"
         "\n[uncertainty]\n"
         "; phi(t) in [-phi_bar, phi_bar], gamma(t) in [gamma_m, gamma_M]\n"
         "phi_bar = 0.5\n"
         "gamma_m = 0.5\n"
         "gamma_M = 1.5\n"
         "; signal kinds: constant (offset) | sinusoid (offset + amplitude sin(omega t + phase))\n"
         ";               | piecewise_random (uniform in [low, high], redrawn every dwell s)\n"
         "phi_kind = constant\n"
         "phi_offset = 0\n"
         "; phi_amplitude = 0.5\n"
         "; phi_omega = 3\n"
         "; phi_seed defaults to simulation.seed, gamma_seed to simulation.seed + 1\n"
         "gamma_kind = constant\n"
         "gamma_offset = 1\n"
         "\n; [adaptive] is only accepted with kind = adaptive; epsilon is then required.\n"
         "; [adaptive]\n"
         "; kappa = 1\n"
         "; delta = 1\n"
         "; eta = 0.5\n"
         "; k_adapt = 2\n"
         "; epsilon = 0.05\n"
         "; certificate_samples = 20000\n"
         "\n[simulation]\n"
         "; fixed step (s) and horizon (s)\n"
      << "dt = " << format_real(s.dt) << "\n"
      << "horizon = " << format_real(s.horizon) << "\n"
      << "; rk4 | euler\n"
         "integrator = rk4\n"
         "; trailing fraction of the horizon used for tail statistics\n"
      << "tail_fraction = " << format_real(s.tail_fraction) << "\n"
      << "; convergence band on |z|_inf (non-adaptive runs)\n"
      << "band = " << format_real(s.band) << "\n"
      << "; V1 level for peak-after-crossing on non-adaptive runs\n"
      << "v1_epsilon = " << format_real(s.v1_epsilon) << "\n"
      << "seed = " << s.seed << "\n"
      << "\n[output]\n"
         "directory = .\n"
         "name = run\n";
  return out.str();
}

GainVector scenario_gains(const Scenario& s) {
  if (!s.gains.empty()) return GainVector(s.gains);
  return gains_from_roots(s.roots);
}

SimulationConfig simulation_config(const Scenario& s) {
  SimulationConfig config(hong_params(s.order, s.k_hom, scenario_gains(s)));
  config.controller = s.controller;
  config.law = s.law;
  config.exponents = s.exponents;
  if (s.controller == ControllerKind::kRobust) config.known_bounds = s.bounds;
  config.adaptive = s.adaptive;
  config.disturbance = make_disturbance(s.phi, s.gamma, s.bounds);
  config.dt = s.dt;
  config.horizon = s.horizon;
  config.integrator = s.integrator;
  config.boundary_layer = s.boundary_layer;
  return config;
}

}  // namespace chainstab
