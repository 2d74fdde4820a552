// Acceptance suite. Prints one PASS/FAIL line per criterion, preceded by
// indented measurement lines, and exits nonzero if any criterion fails.

#include "chainstab/controllers.hpp"
#include "chainstab/disturbance.hpp"
#include "chainstab/errors.hpp"
#include "chainstab/gain_synthesis.hpp"
#include "chainstab/lyapunov.hpp"
#include "chainstab/simulation.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

using namespace chainstab;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int failures = 0;

template <typename... Args>
void detail(const char* fmt, Args... args) {
  std::printf("  ");
  std::printf(fmt, args...);
  std::printf("\n");
  std::fflush(stdout);
}

void verdict(int id, const char* title, bool ok) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, title);
  std::fflush(stdout);
  if (!ok) ++failures;
}

double inf_norm(std::span<const double> z) {
  double m = 0.0;
  for (double x : z) m = std::max(m, std::abs(x));
  return m;
}

std::vector<double> random_state(std::mt19937_64& rng, std::size_t r) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> log_scale(-1.0, 1.0);
  const double scale = std::pow(10.0, log_scale(rng));
  std::vector<double> z(r);
  for (auto& x : z) x = scale * normal(rng);
  return z;
}

struct BandRun {
  double entry = kInf;       // first grid time with |z|_inf <= band
  double sup_after = 0.0;    // sup |z|_inf from entry onwards
  double tail_sup = 0.0;     // sup |z|_inf over the last 20% of the horizon
  std::size_t v1_increases = 0;
  double worst_v1_increase = 0.0;
};

BandRun run_band(const std::vector<double>& z0, const SimulationConfig& cfg, double band) {
  BandRun out;
  double previous = kInf;
  const double tail_start = 0.8 * cfg.horizon;
  simulate(z0, cfg, [&](const Sample& s) {
    const double norm = inf_norm(s.z);
    if (out.entry == kInf && norm <= band) out.entry = s.t;
    if (out.entry < kInf) out.sup_after = std::max(out.sup_after, norm);
    if (s.t >= tail_start) out.tail_sup = std::max(out.tail_sup, norm);
    if (previous < kInf && s.v1 > previous * (1.0 + 1e-9)) {
      ++out.v1_increases;
      out.worst_v1_increase = std::max(out.worst_v1_increase, (s.v1 - previous) / previous);
    }
    previous = s.v1;
  });
  return out;
}

// Pure chain, hong and simplified laws.
void criterion1() {
  bool ok = true;
  for (std::size_t r : {2u, 3u}) {
    const double k = -0.5 / static_cast<double>(r);
    const auto hp = hong_params(r, k, default_gains(r));
    const std::vector<double> z0(r, 1.0);
    const double v0 = v1(z0, hp);

    double bound = kInf;
    try {
      const auto cert = estimate_constants(hp, 100000, 1);
      bound = convergence_time_bound(v0, cert.c, cert.alpha);
      detail("r=%zu k_hom=%.6g: V1(z0)=%.6g c=%.6g alpha=%.6g bound=%.6g s", r, k, v0, cert.c,
             cert.alpha, bound);
    } catch (const ConfigError& e) {
      detail("r=%zu k_hom=%.6g: no certificate (%s)", r, k, e.what());
      ok = false;
    }

    SimulationConfig cfg(hp);
    cfg.controller = ControllerKind::kPure;
    cfg.dt = 1e-4;
    cfg.horizon = bound < kInf ? 1.5 * bound : 60.0;
    const auto hong = run_band(z0, cfg, 1e-2);
    const bool hong_ok = hong.entry <= 1.5 * bound && hong.v1_increases == 0;
    detail("r=%zu hong: entry=%.6g s (budget %.6g s) V1 increases=%zu worst_rel=%.3g -> %s", r,
           hong.entry, 1.5 * bound, hong.v1_increases, hong.worst_v1_increase,
           hong_ok ? "ok" : "violated");
    ok = ok && hong_ok;

    if (hong.entry < kInf) {
      cfg.law = NominalLaw::kSimplified;
      cfg.horizon = 2.0 * hong.entry + cfg.dt;
      const auto simple = run_band(z0, cfg, 1e-2);
      const bool simple_ok = simple.entry <= 2.0 * hong.entry;
      detail("r=%zu simplified: entry=%.6g s (budget %.6g s) -> %s", r, simple.entry,
             2.0 * hong.entry, simple_ok ? "ok" : "violated");
      ok = ok && simple_ok;
    } else {
      detail("r=%zu simplified: no budget, hong never entered the band", r);
      ok = false;
    }
  }
  verdict(1, "pure-chain finite-time convergence (hong bound, simplified budget, V1 monotone)",
          ok);
}

// Robust law under sinusoidal drift and piecewise-random gain.
void criterion2() {
  bool ok = true;
  const UncertaintyBounds bounds(0.5, 0.5, 1.5);
  for (std::size_t r : {2u, 3u}) {
    SimulationConfig cfg(hong_params(r, default_k_hom(r), default_gains(r)));
    cfg.controller = ControllerKind::kRobust;
    cfg.known_bounds = bounds;
    cfg.disturbance = make_disturbance(DisturbanceSpec::sinusoid(0.5, 3.0),
                                       DisturbanceSpec::piecewise_random(0.1, 11 + r), bounds);
    const std::vector<double> z0(r, 1.0);

    cfg.dt = 1e-4;
    cfg.horizon = 100.0;
    const auto coarse = run_band(z0, cfg, 5e-2);
    const bool hold_ok = coarse.entry <= 10.0 && coarse.sup_after <= 5e-2;
    detail("r=%zu: entry=%.6g s, sup |z| after entry over %.0f s = %.4g -> %s", r, coarse.entry,
           cfg.horizon, coarse.sup_after, hold_ok ? "ok" : "violated");

    cfg.dt = 5e-5;
    const auto fine = run_band(z0, cfg, 5e-2);
    const double ratio = coarse.tail_sup / fine.tail_sup;
    const bool scale_ok = ratio >= 1.5;
    detail("r=%zu: terminal band (last 20%%) dt=1e-4 %.4g, dt=5e-5 %.4g, ratio %.3f -> %s", r,
           coarse.tail_sup, fine.tail_sup, ratio, scale_ok ? "ok" : "violated");
    ok = ok && hold_ok && scale_ok;
  }
  verdict(2, "robust rejection (band 5e-2 held over 10x horizon, band shrinks with dt)", ok);
}

// Adaptive law with hidden bounds.
void criterion3() {
  const std::size_t r = 2;
  const auto hp = hong_params(r, default_k_hom(r), default_gains(r));
  const UncertaintyBounds truth(0.5, 0.8, 1.2);
  const double epsilon = 0.05;
  const AdaptiveConfig acfg(1.0, 1.0, 0.5, 2.0, epsilon);
  const std::vector<double> z0{1.0, 1.0};

  SimulationConfig cfg(hp);
  cfg.controller = ControllerKind::kAdaptive;
  cfg.adaptive = acfg;
  cfg.disturbance = make_disturbance(DisturbanceSpec::sinusoid(0.5, 3.0),
                                     DisturbanceSpec::piecewise_random(0.1, 5), truth);
  cfg.dt = 1e-4;
  cfg.horizon = 60.0;
  const auto traj = simulate(z0, cfg);
  const auto m = compute_metrics(traj, epsilon, 0.2, 1e-2);
  const auto cert = estimate_constants(hp, 100000, 1);
  const auto b = adaptive_bounds(truth, acfg, cert);
  const double min_phi_hat = *std::min_element(traj.phi_hat.begin(), traj.phi_hat.end());

  const bool liminf_ok = m.tail_inf_v1 <= 1.05 * epsilon;
  const bool limsup_ok = m.tail_sup_v1 <= b.delta_cap;
  const bool ceiling_ok = m.tail_sup_phi_hat <= b.phi_hat_ceiling;
  const bool sign_ok = min_phi_hat >= 0.0;
  detail("V1(z0)=%.6g epsilon=%.3g horizon=%.0f s", v1(z0, hp), epsilon, cfg.horizon);
  detail("tail_inf_V1=%.4g <= %.4g -> %s", m.tail_inf_v1, 1.05 * epsilon,
         liminf_ok ? "ok" : "violated");
  detail("tail_sup_V1=%.4g <= delta_cap=%.4g -> %s", m.tail_sup_v1, b.delta_cap,
         limsup_ok ? "ok" : "violated");
  detail("tail_sup_phi_hat=%.4g <= phi_hat_ceiling=%.4g -> %s", m.tail_sup_phi_hat,
         b.phi_hat_ceiling, ceiling_ok ? "ok" : "violated");
  detail("min phi_hat=%.4g -> %s", min_phi_hat, sign_ok ? "ok" : "violated");
  verdict(3, "adaptive ultimate bounds (liminf V1, delta_cap, phi_hat ceiling, phi_hat >= 0)",
          liminf_ok && limsup_ok && ceiling_ok && sign_ok);
}

// u0 dV1/dz_r <= 0 and the closed-form identity for u0.
void criterion4() {
  bool ok = true;
  std::mt19937_64 rng(404);
  for (std::size_t r : {2u, 3u, 4u}) {
    const auto hp = hong_params(r, default_k_hom(r), default_gains(r));
    std::size_t sign_violations = 0;
    std::size_t identity_violations = 0;
    double worst = 0.0;
    for (int n = 0; n < 100000; ++n) {
      const auto z = random_state(rng, r);
      const double u0 = hong_u0(z, hp).u0;
      const double dv = dv1_dzr(z, hp);
      if (u0 * dv > 0.0) ++sign_violations;
      const double expected = -hp.gains[r - 1] * signed_power(dv, hp.outer_exponent[r - 1]);
      const double err = oracle::rel_err(u0, expected);
      worst = std::max(worst, err);
      if (err > 1e-10) ++identity_violations;
    }
    detail("r=%zu: 1e5 states, sign violations=%zu, identity violations=%zu, max rel err=%.3g",
           r, sign_violations, identity_violations, worst);
    ok = ok && sign_violations == 0 && identity_violations == 0;
  }
  verdict(4, "geometric condition u0 dV1/dz_r <= 0 and u0 identity", ok);
}

// Dilation degrees of V1, dV1/dz_r, hong_u0, simplified_u0.
void criterion5() {
  bool ok = true;
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> lambda_dist(0.1, 10.0);
  for (std::size_t r : {2u, 3u}) {
    const double k = default_k_hom(r);
    const auto hp = hong_params(r, k, default_gains(r));
    const auto d = homogeneity_degrees(hp);
    struct Law {
      const char* name;
      double degree;
      std::function<double(std::span<const double>)> f;
    };
    const std::vector<Law> laws{
        {"V1", d.kappa1, [&](auto z) { return v1(z, hp); }},
        {"dV1/dz_r", d.kappa2, [&](auto z) { return dv1_dzr(z, hp); }},
        {"hong_u0", hp.p[r], [&](auto z) { return hong_u0(z, hp).u0; }},
        {"simplified_u0", 1.0 + static_cast<double>(r) * k,
         [&](auto z) { return simplified_u0(z, hp).u0; }},
    };
    for (const auto& law : laws) {
      std::size_t violations = 0;
      double worst = 0.0;
      for (int n = 0; n < 10000; ++n) {
        const auto z = random_state(rng, r);
        const double lambda = lambda_dist(rng);
        const double err = oracle::rel_err(law.f(dilate(z, lambda, hp.weights)),
                                           std::pow(lambda, law.degree) * law.f(z));
        worst = std::max(worst, err);
        if (err > 1e-9) ++violations;
      }
      detail("r=%zu %-13s degree %.6g: violations=%zu max rel err=%.3g", r, law.name,
             law.degree, violations, worst);
      ok = ok && violations == 0;
    }
  }
  verdict(5, "homogeneity identities under dilation", ok);
}

// |dV1/dz_r| <= 1.02 c' V1^alpha' on hold-out states; scalar closed form.
void criterion6() {
  bool ok = true;
  std::mt19937_64 rng(606);
  for (std::size_t r : {2u, 3u}) {
    const auto hp = hong_params(r, default_k_hom(r), default_gains(r));
    const auto cert = estimate_constants(hp, 100000, 6);
    std::size_t violations = 0;
    double worst = 0.0;
    for (int n = 0; n < 100000; ++n) {
      const auto z = random_state(rng, r);
      const double lhs = std::abs(dv1_dzr(z, hp));
      const double rhs = 1.02 * cert.c_prime * std::pow(v1(z, hp), cert.alpha_prime);
      if (lhs > rhs) {
        ++violations;
        worst = std::max(worst, lhs / rhs - 1.0);
      }
    }
    detail("r=%zu: c'=%.6g alpha'=%.6g, hold-out violations=%zu (worst excess %.3g)", r,
           cert.c_prime, cert.alpha_prime, violations, worst);
    ok = ok && violations == 0;
  }
  const auto scalar = estimate_constants(hong_params(1, 0.0, GainVector({1.0})), 100000, 6);
  const bool scalar_ok = std::abs(scalar.c_prime - std::sqrt(2.0)) <= 1e-6 &&
                         std::abs(scalar.alpha_prime - 0.5) <= 1e-6;
  detail("r=1 k_hom=0: c'=%.12g (sqrt 2 = %.12g) alpha'=%.12g -> %s", scalar.c_prime,
         std::sqrt(2.0), scalar.alpha_prime, scalar_ok ? "ok" : "violated");
  verdict(6, "level-set bound on dV1/dz_r", ok && scalar_ok);
}

std::vector<std::complex<double>> random_roots(std::mt19937_64& rng, std::size_t r,
                                               bool stable) {
  std::uniform_real_distribution<double> mag(0.05, 3.0);
  std::uniform_real_distribution<double> im(0.05, 2.0);
  std::vector<std::complex<double>> roots;
  while (roots.size() < r) {
    const double re = (stable || rng() % 2) ? -mag(rng) : mag(rng);
    if (r - roots.size() >= 2 && rng() % 2 == 0) {
      roots.emplace_back(re, im(rng));
      roots.push_back(std::conj(roots.back()));
    } else {
      roots.emplace_back(re, 0.0);
    }
  }
  return roots;
}

// Gain synthesis round trip and Routh-Hurwitz against eigenvalues.
void criterion7() {
  std::mt19937_64 rng(707);
  double worst = 0.0;
  std::size_t round_trip_violations = 0;
  for (int n = 0; n < 100; ++n) {
    const std::size_t r = 1 + rng() % 6;
    const auto roots = random_roots(rng, r, true);
    const auto coeffs = expand_nested(gains_from_roots(roots));
    const auto expected = oracle::poly_from_roots(roots);
    double err = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      err = std::max(err, oracle::rel_err(coeffs[i], expected[i]));
    }
    worst = std::max(worst, err);
    if (err > 1e-10) ++round_trip_violations;
  }
  detail("round trip: 100 root sets, violations=%zu max rel err=%.3g", round_trip_violations,
         worst);

  std::size_t disagreements = 0;
  std::size_t hurwitz_count = 0;
  std::normal_distribution<double> normal;
  for (int n = 0; n < 1000; ++n) {
    const std::size_t degree = 1 + rng() % 6;
    std::vector<double> coeffs;
    if (n % 2 == 0) {
      coeffs = oracle::poly_from_roots(random_roots(rng, degree, false));
    } else {
      coeffs.resize(degree + 1);
      for (auto& c : coeffs) c = normal(rng);
    }
    double max_re = -kInf;
    for (const auto& root : oracle::roots(coeffs)) max_re = std::max(max_re, root.real());
    const bool expected = max_re < 0.0;
    const bool got = is_hurwitz(coeffs);
    if (got) ++hurwitz_count;
    if (got != expected) {
      ++disagreements;
      detail("disagreement: degree %zu, max Re(root)=%.3g", degree, max_re);
    }
  }
  detail("Routh-Hurwitz vs eigenvalues: 1000 polynomials (%zu Hurwitz), disagreements=%zu",
         hurwitz_count, disagreements);
  verdict(7, "gain synthesis round trip and Hurwitz test", round_trip_violations == 0 &&
                                                               disagreements == 0);
}

// Closed forms against quadrature and finite differences.
void criterion8() {
  std::mt19937_64 rng(808);
  std::size_t quad_violations = 0;
  double quad_worst = 0.0;
  std::size_t fd_violations = 0;
  std::size_t fd_skipped = 0;
  double fd_worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const std::size_t r = 1 + static_cast<std::size_t>(n % 4);
    const double k = default_k_hom(r) * (1.0 + 3.0 * (n % 3));
    const auto gains = default_gains(r);
    const auto hp = hong_params(r, k, gains);
    auto z = random_state(rng, r);

    const double err = oracle::rel_err(v1(z, hp), oracle::v1_quadrature(z, k, gains.values()));
    quad_worst = std::max(quad_worst, err);
    if (err > 1e-8) ++quad_violations;

    const double h = 1e-6 * std::max(1.0, inf_norm(z));
    if (std::abs(z[r - 1]) < 1e3 * h) {
      ++fd_skipped;
      continue;
    }
    const double zr = z[r - 1];
    z[r - 1] = zr + h;
    const double up = v1(z, hp);
    z[r - 1] = zr - h;
    const double down = v1(z, hp);
    z[r - 1] = zr;
    const double fd = (up - down) / (2.0 * h);
    const double fd_err = oracle::rel_err(dv1_dzr(z, hp), fd);
    fd_worst = std::max(fd_worst, fd_err);
    if (fd_err > 1e-5) ++fd_violations;
  }
  detail("V1 vs quadrature: 1000 states, violations=%zu max rel err=%.3g", quad_violations,
         quad_worst);
  detail("dV1/dz_r vs central differences: %zu states (%zu within 1e3 h of z_r = 0 skipped), "
         "violations=%zu max rel err=%.3g",
         1000 - fd_skipped, fd_skipped, fd_violations, fd_worst);
  verdict(8, "closed forms vs quadrature and finite differences",
          quad_violations == 0 && fd_violations == 0);
}

}  // namespace

int main() {
  const std::vector<void (*)()> criteria{criterion1, criterion2, criterion3, criterion4,
                                         criterion5, criterion6, criterion7, criterion8};
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      detail("error: %s", e.what());
      verdict(static_cast<int>(i + 1), "aborted", false);
    }
  }
  std::printf("acceptance: %zu criteria, %d failed\n", criteria.size(), failures);
  return failures == 0 ? 0 : 1;
}
