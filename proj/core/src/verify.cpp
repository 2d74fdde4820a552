#include "chainstab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "chainstab/controllers.hpp"
#include "chainstab/errors.hpp"
#include "chainstab/gain_synthesis.hpp"
#include "chainstab/lyapunov.hpp"
#include "chainstab/signed_algebra.hpp"

namespace chainstab {
namespace {

// Accumulates violations. `excess` is how far a sample lies beyond its
// tolerance; positive means violation.
class Tally {
 public:
  Tally(std::string name) { result_.name = std::move(name); }

  void record(double excess) {
    ++result_.samples;
    if (excess > 0.0 || std::isnan(excess)) {
      ++result_.violations;
      result_.max_violation =
          std::isnan(excess) ? excess : std::max(result_.max_violation, excess);
    }
  }
  void note(std::string text) { result_.note = std::move(text); }
  PropertyResult done() { return std::move(result_); }

 private:
  PropertyResult result_;
};

double relative_excess(double actual, double expected, double tol) {
  const double scale = std::max(std::abs(expected), std::abs(actual));
  if (scale == 0.0) return -tol;
  return std::abs(actual - expected) / scale - tol;
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t property) {
  std::seed_seq seq{seed, property};
  return std::mt19937_64(seq);
}

std::vector<double> random_state(std::mt19937_64& rng, std::size_t order) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> log_scale(-1.0, 1.0);
  const double scale = std::pow(10.0, log_scale(rng));
  std::vector<double> z(order);
  for (auto& x : z) x = scale * normal(rng);
  return z;
}

std::string order_tag(const char* name, std::size_t r) {
  return std::string(name) + "[r=" + std::to_string(r) + "]";
}

void scalar_properties(std::vector<PropertyResult>& out, std::size_t n, std::uint64_t seed) {
  {
    auto rng = stream(seed, 1);
    std::uniform_real_distribution<double> a_dist(-50.0, 50.0), theta_dist(0.05, 3.0),
        lambda_dist(0.1, 10.0);
    Tally tally("signed_power.odd_and_homogeneous");
    for (std::size_t i = 0; i < n; ++i) {
      const double a = a_dist(rng), theta = theta_dist(rng), lambda = lambda_dist(rng);
      const double odd = std::abs(signed_power(-a, theta) + signed_power(a, theta));
      const double hom = relative_excess(signed_power(lambda * a, theta),
                                         std::pow(lambda, theta) * signed_power(a, theta), 1e-12);
      tally.record(std::max(odd, hom));
    }
    out.push_back(tally.done());
  }
  {
    auto rng = stream(seed, 2);
    std::uniform_real_distribution<double> eps_dist(0.01, 10.0), frac(0.5, 1.0);
    Tally tally("nu_epsilon.ramp");
    for (std::size_t i = 0; i < n; ++i) {
      const double eps = eps_dist(rng);
      const double a = frac(rng) * eps;
      const double expected = (2.0 / eps) * (a - 0.5 * eps);
      tally.record(std::abs(nu_epsilon(a, eps) - expected) - 1e-12);
    }
    out.push_back(tally.done());
  }
  {
    auto rng = stream(seed, 3);
    std::uniform_real_distribution<double> a_dist(-100.0, 100.0);
    Tally tally("saturate.identity");
    for (std::size_t i = 0; i < n; ++i) {
      const double a = a_dist(rng);
      tally.record(relative_excess(saturate(a) * std::max(1.0, std::abs(a)), a, 1e-15));
    }
    out.push_back(tally.done());
  }
  {
    // Closed-form rate against its piecewise expansion on a grid.
    Tally tally("phi_hat_rate.piecewise");
    const AdaptiveConfig cfg(1.0, 1.0, 0.5, 2.0, 1.0);
    const std::size_t side = std::max<std::size_t>(2, static_cast<std::size_t>(std::sqrt(n)));
    for (std::size_t i = 0; i < side; ++i) {
      for (std::size_t j = 0; j < side; ++j) {
        const double v = 2.0 * cfg.epsilon * static_cast<double>(i) / static_cast<double>(side - 1);
        const double ph = 5.0 * static_cast<double>(j) / static_cast<double>(side - 1);
        const double decay = signed_power(ph, cfg.eta);
        double table;
        if (v >= cfg.epsilon) {
          table = cfg.k_adapt;
        } else if (v >= 0.5 * cfg.epsilon) {
          table = (v - 0.5 * cfg.epsilon) * 2.0 * cfg.k_adapt / cfg.epsilon -
                  (cfg.epsilon - v) * 2.0 / cfg.epsilon * decay;
        } else {
          table = -decay;
        }
        tally.record(std::abs(phi_hat_rate(v, ph, cfg) - table) - 1e-12);
      }
    }
    out.push_back(tally.done());
  }
  {
    auto rng = stream(seed, 4);
    std::uniform_int_distribution<int> order_dist(1, 6);
    std::uniform_real_distribution<double> re(-3.0, -0.1), im(0.0, 3.0), coin(0.0, 1.0);
    Tally tally("gains.round_trip");
    const std::size_t sets = std::min<std::size_t>(n, 1000);
    for (std::size_t i = 0; i < sets; ++i) {
      const int r = order_dist(rng);
      std::vector<std::complex<double>> roots;
      while (static_cast<int>(roots.size()) < r) {
        if (static_cast<int>(roots.size()) + 2 <= r && coin(rng) < 0.5) {
          const std::complex<double> c(re(rng), im(rng));
          roots.push_back(c);
          roots.push_back(std::conj(c));
        } else {
          roots.emplace_back(re(rng), 0.0);
        }
      }
      std::vector<std::complex<double>> poly{1.0};
      for (const auto& root : roots) {
        std::vector<std::complex<double>> next(poly.size() + 1, 0.0);
        for (std::size_t k = 0; k < poly.size(); ++k) {
          next[k] += poly[k];
          next[k + 1] -= root * poly[k];
        }
        poly = std::move(next);
      }
      const auto coeffs = expand_nested(gains_from_roots(roots));
      double worst = -1e-10;
      for (std::size_t k = 0; k < coeffs.size(); ++k) {
        worst = std::max(worst, relative_excess(coeffs[k], poly[k].real(), 1e-10));
      }
      tally.record(worst);
    }
    out.push_back(tally.done());
  }
}

void order_properties(std::vector<PropertyResult>& out, std::size_t r,
                      const std::vector<double>& raw_gains, std::size_t n, std::uint64_t seed) {
  const std::uint64_t base = 100 * r;

  {
    Tally tally(order_tag("gains.hurwitz", r));
    const auto coeffs = expand_nested(raw_gains);
    double excess = is_hurwitz(coeffs) ? -1.0 : 1.0;
    for (double c : coeffs) {
      if (!(c > 0.0)) excess = std::max(excess, -c + 1e-300);
    }
    for (double l : raw_gains) {
      if (!(l > 0.0)) excess = std::max(excess, -l + 1e-300);
    }
    tally.record(excess);
    out.push_back(tally.done());
  }

  std::optional<HongParams> params;
  try {
    params = hong_params(r, default_k_hom(r), GainVector(raw_gains));
  } catch (const std::exception& e) {
    Tally tally(order_tag("controller.construct", r));
    tally.record(1.0);
    tally.note(std::string("gains rejected, controller properties skipped: ") + e.what());
    out.push_back(tally.done());
    return;
  }
  const auto& hp = *params;
  const auto degrees = homogeneity_degrees(hp);
  const double lr = hp.gains[r - 1];
  const double outer = hp.alpha[r - 1] / hp.beta[r - 1];

  {
    auto rng = stream(seed, base + 1);
    std::uniform_real_distribution<double> lambda_dist(0.1, 10.0);
    Tally tally(order_tag("dilation.group", r));
    for (std::size_t i = 0; i < n; ++i) {
      const auto z = random_state(rng, r);
      const double l1 = lambda_dist(rng), l2 = lambda_dist(rng);
      const auto composed = dilate(dilate(z, l1, hp.weights), l2, hp.weights);
      const auto direct = dilate(z, l1 * l2, hp.weights);
      const auto identity = dilate(z, 1.0, hp.weights);
      double worst = -1.0;
      for (std::size_t k = 0; k < r; ++k) {
        worst = std::max(worst, relative_excess(composed[k], direct[k], 1e-12));
        worst = std::max(worst, relative_excess(identity[k], z[k], 1e-15));
      }
      tally.record(worst);
    }
    out.push_back(tally.done());
  }

  {
    auto rng = stream(seed, base + 2);
    Tally tally(order_tag("condition5", r));
    for (std::size_t i = 0; i < n; ++i) {
      const auto z = random_state(rng, r);
      const double u0 = hong_u0(z, hp).u0;
      const double dv = dv1_dzr(z, hp);
      const double sign_excess = u0 * dv;
      const double identity = relative_excess(u0, -lr * signed_power(dv, outer), 1e-10);
      tally.record(std::max(sign_excess > 0.0 ? sign_excess : -1.0, identity));
    }
    out.push_back(tally.done());
  }

  struct Homogeneous {
    const char* name;
    double degree;
    std::function<double(std::span<const double>)> f;
  };
  const std::vector<Homogeneous> homogeneous{
      {"homogeneity.v1", degrees.kappa1, [&](std::span<const double> z) { return v1(z, hp); }},
      {"homogeneity.dv1_dzr", degrees.kappa2,
       [&](std::span<const double> z) { return dv1_dzr(z, hp); }},
      {"homogeneity.hong_u0", hp.p[r], [&](std::span<const double> z) { return hong_u0(z, hp).u0; }},
      {"homogeneity.simplified_u0", 1.0 + static_cast<double>(r) * hp.k_hom,
       [&](std::span<const double> z) { return simplified_u0(z, hp).u0; }},
  };
  for (std::size_t h = 0; h < homogeneous.size(); ++h) {
    auto rng = stream(seed, base + 10 + h);
    std::uniform_real_distribution<double> lambda_dist(0.1, 10.0);
    Tally tally(order_tag(homogeneous[h].name, r));
    for (std::size_t i = 0; i < n; ++i) {
      const auto z = random_state(rng, r);
      const double lambda = lambda_dist(rng);
      const double scaled = homogeneous[h].f(dilate(z, lambda, hp.weights));
      const double expected = std::pow(lambda, homogeneous[h].degree) * homogeneous[h].f(z);
      tally.record(relative_excess(scaled, expected, 1e-9));
    }
    out.push_back(tally.done());
  }

  {
    auto rng = stream(seed, base + 3);
    Tally tally(order_tag("v1.positive_definite", r));
    tally.record(std::abs(v1(std::vector<double>(r, 0.0), hp)));
    for (std::size_t i = 1; i < n; ++i) {
      const auto z = random_state(rng, r);
      tally.record(v1(z, hp) > 0.0 ? -1.0 : 1.0);
    }
    out.push_back(tally.done());
  }

  // Level-set constants: estimated on one stream, checked on another.
  std::optional<HomogeneityCertificate> cert;
  std::string cert_error;
  try {
    cert = estimate_constants(hp, n, seed ^ (0x5eedULL + r), LevelSetSearch::kSamplingRefined);
  } catch (const std::exception& e) {
    cert_error = e.what();
  }
  {
    Tally tally(order_tag("level_set.dv1_dzr_bound", r));
    Tally decrease(order_tag("level_set.decrease", r));
    if (!cert) {
      tally.record(1.0);
      tally.note(cert_error);
      decrease.record(1.0);
      decrease.note(cert_error);
    } else {
      auto rng = stream(seed, base + 4);
      for (std::size_t i = 0; i < n; ++i) {
        const auto z = random_state(rng, r);
        const double level = v1(z, hp);
        const double bound = 1.02 * cert->c_prime * std::pow(level, cert->alpha_prime);
        tally.record((std::abs(dv1_dzr(z, hp)) - bound) / std::max(bound, 1e-300));

        if (cert->alpha < 1.0) {
          const auto on_level = project_to_unit_level(z, hp);
          const double rate = v1_dot_nominal(on_level, hp);
          decrease.record(rate + cert->c / 1.02);
        }
      }
      char buf[128];
      std::snprintf(buf, sizeof buf, "c'=%.6g alpha'=%.6g c=%.6g alpha=%.6g", cert->c_prime,
                    cert->alpha_prime, cert->c, cert->alpha);
      tally.note(buf);
      decrease.note(buf);
    }
    out.push_back(tally.done());
    out.push_back(decrease.done());
  }
}

}  // namespace

std::size_t samples_for(VerifyLevel level) {
  return level == VerifyLevel::kQuick ? 1000 : 100000;
}

bool VerifyReport::passed() const noexcept {
  return std::all_of(properties.begin(), properties.end(),
                     [](const PropertyResult& p) { return p.passed(); });
}

std::string VerifyReport::render() const {
  std::ostringstream out;
  std::size_t failed = 0;
  for (const auto& p : properties) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-4s %-36s samples=%-7zu violations=%-6zu max_violation=%.3e",
                  p.passed() ? "PASS" : "FAIL", p.name.c_str(), p.samples, p.violations,
                  p.max_violation);
    out << buf;
    if (!p.note.empty()) out << "  (" << p.note << ")";
    out << '\n';
    if (!p.passed()) ++failed;
  }
  out << "verify: " << properties.size() << " properties, " << failed << " failed\n";
  return out.str();
}

VerifyReport verify_suite(VerifyLevel level, std::uint64_t seed,
                          const std::optional<std::vector<double>>& gain_override) {
  const std::size_t n = samples_for(level);
  VerifyReport report;
  scalar_properties(report.properties, n, seed);
  if (gain_override) {
    if (gain_override->empty()) throw ConfigError("verify: gain list is empty");
    order_properties(report.properties, gain_override->size(), *gain_override, n, seed);
  } else {
    for (std::size_t r : {2u, 3u}) {
      const auto gains = default_gains(r);
      order_properties(report.properties, r,
                       std::vector<double>(gains.values().begin(), gains.values().end()), n,
                       seed);
    }
  }
  return report;
}

}  // namespace chainstab
