// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include "fejercert/checker.hpp"
#include "fejercert/cli.hpp"
#include "fejercert/scenario.hpp"
#include "fejercert/schemes.hpp"
#include "fejercert/total_boundedness.hpp"

#include "../unit/test_util.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace fejercert;

namespace {

const std::filesystem::path kScenarios = FEJERCERT_SCENARIO_DIR;
constexpr double kTau = 1e-9;

struct Outcome {
  bool ok = true;
  std::ostringstream note;

  void fail(const std::string& why) {
    if (ok) note << why;
    ok = false;
  }
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && secs >= limit_s) {
    std::ostringstream why;
    why << "took " << secs << " s, limit " << limit_s << " s";
    o.fail(why.str());
  }
  if (!o.ok) ++failures;
  std::printf("%s %d %s (%.2f s)%s%s\n", o.ok ? "PASS" : "FAIL", id, name.c_str(), secs, o.note.str().empty() ? "" : ": ",
              o.note.str().c_str());
  std::fflush(stdout);
}

Nat g_tilde_power(const Modulus& g, std::uint64_t times) {
  Nat x = 0;
  for (std::uint64_t i = 0; i < times; ++i) x = x + g(x);
  return x;
}

// Residual check on [Φ⁺⁺(k), Φ⁺⁺(k)+100] for k ≤ 10.
void rate_criterion(Outcome& o, Trajectory& traj, const ApproximationFamily& family, const Modulus& phi_pp) {
  for (int k = 0; k <= 10; ++k) {
    Verdict v = check_asymptotic_regularity(traj, family, phi_pp, k, 100, kTau);
    if (v.status != Status::Verified || v.trials != 101) o.fail("k=" + std::to_string(k) + " " + v.to_json().dump());
  }
  o.note << "Phi++(10)=" << to_decimal(phi_pp(Nat(10)));
}

}  // namespace

int main() {
  criterion(1, "closed-form agreement psi = g~^{4(k+1)}(0)", 1.0, [](Outcome& o) {
    const std::vector<Modulus> gs = {Modulus::affine(1, 1), Modulus::affine(2, 0), Modulus::constant(3)};
    int cases = 0;
    for (const auto& g : gs)
      for (std::uint64_t k = 0; k <= 5; ++k) {
        RateInputs in;
        in.k = k;
        in.g = g;
        in.chi = FejerModulus::sum();
        in.phi = Modulus::identity();
        in.gamma = Modulus::affine(1, 1);
        Certificate c = psi(in);
        if (!c.exact || c.bound != g_tilde_power(g, 4 * (k + 1)))
          o.fail(g.to_json().dump() + " k=" + std::to_string(k) + " bound " + to_decimal(c.bound));
        ++cases;
      }
    o.note << cases << " cases";
  });

  criterion(2, "firmly nonexpansive rate of asymptotic regularity", 5.0, [](Outcome& o) {
    const Domain C = Domain::ball(vec({0, 0}), 1.0);
    const Operator T = Operator::prox_quadratic(Matrix::Identity(2, 2), vec({0, 0}), 1.0);
    PropertyCheck pc = validate_firmly_nonexpansive(T, Rational(1, 2), C, {});
    if (!pc.ok) o.fail("validator: " + pc.detail);
    Trajectory x = picard(T, vec({0.6, 0.8}));
    rate_criterion(o, x, fixed_point_family(T), fne_rate(2, Rational(1, 2)));
  });

  criterion(3, "SPC Mann rate of asymptotic regularity", 5.0, [](Outcome& o) {
    const Rational kappa(1, 4), lambda(1, 2);
    const Domain C = Domain::ball(vec({0, 0}), 1.0);
    const Operator T = Operator::spc_from_nonexpansive(Operator::project_ball(vec({0, 0}), 0.5), kappa);
    PropertyCheck pc = validate_spc(T, kappa, C, {});
    if (!pc.ok) o.fail("validator: " + pc.detail);
    SchemeParams p;
    p.b = 2;
    p.kappa = kappa;
    p.lambda = lambda;
    const Modulus phi_pp = spc_moduli(p).phi_pp;
    for (int k = 0; k <= 10; ++k)
      if (phi_pp(Nat(k)) != 32 * (k + 1) * (k + 1)) o.fail("Phi++ formula at k=" + std::to_string(k));
    Trajectory x = mann(T, vec({1, 0}), SequenceSpec::constant(lambda));
    rate_criterion(o, x, fixed_point_family(T), phi_pp);
  });

  criterion(4, "PPA certificates beta, Delta, Phi", 5.0, [](Outcome& o) {
    const QuadraticResolvent J(Matrix::Identity(2, 2), vec({0, 0}));
    const SequenceSpec gamma = SequenceSpec::constant(1);
    SchemeParams p;
    p.b = 1;
    p.gamma_seq = gamma;
    p.theta = Modulus::identity();
    const PpaModuli m = ppa_moduli(p);
    Trajectory x = ppa(J, vec({0.6, 0.8}), gamma);
    const ApproximationFamily af = ppa_family(J, gamma);
    for (int k = 0; k <= 10; ++k) {
      const auto beta = static_cast<std::uint64_t>(m.beta(k));
      // ‖u_n‖ is nonincreasing, so the window start decides; the window is scanned anyway
      for (std::uint64_t n = beta; n <= beta + 100; ++n)
        if (ppa_u(x, gamma, n).norm() > 1.0 / (k + 1) + kTau) o.fail("(a) k=" + std::to_string(k));
      for (std::uint64_t L : {0, 5}) {
        const auto delta = static_cast<std::uint64_t>(m.delta(k, L));
        bool found = false;
        for (std::uint64_t n = L; n <= delta && !found; ++n) found = x.distance(n, n + 1) <= 1.0 / (k + 1) + kTau;
        if (!found) o.fail("(b) k=" + std::to_string(k) + " L=" + std::to_string(L));
      }
    }
    for (int k = 0; k <= 5; ++k) {
      const auto phi = static_cast<std::uint64_t>(m.phi(k));
      bool found = false;
      for (std::uint64_t n = 0; n <= phi && !found; ++n) found = af.contains(x.at(n), k, kTau);
      if (!found) o.fail("(c) k=" + std::to_string(k));
    }
    o.note << "Phi(0)=" << to_decimal(m.phi(0)) << " Delta(10,5)=" << to_decimal(m.delta(10, 5));
  });

  criterion(5, "metastability soundness across shipped scenarios", 30.0, [](Outcome& o) {
    const std::set<std::string> required = {"picard_ne", "picard_fne", "mann_spc", "ishikawa",
                                            "cond_e",    "ppa",        "quasi_mann"};
    std::set<std::string> seen;
    int runs = 0;
    for (const auto& f : list_scenarios(kScenarios, false)) {
      ScenarioRunner r(Scenario::load(f));
      seen.insert(to_string(r.scenario().scheme));
      for (int k = 0; k <= 2; ++k)
        for (const auto& g : {Modulus::constant(1), Modulus::affine(1, 1)}) {
          Verdict v = r.verify(k, g);
          ++runs;
          if (v.status != Status::Verified || !v.witness || !v.bound || v.witness->N > *v.bound)
            o.fail(f.filename().string() + " k=" + std::to_string(k) + " g=" + g.to_json().dump() + " " +
                   to_string(v.status));
        }
    }
    for (const auto& s : required)
      if (!seen.count(s)) o.fail("no shipped scenario for " + s);
    o.note << runs << " verifications";
  });

  criterion(6, "modulus property suites", 30.0, [](Outcome& o) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    // (a) pigeonhole
    int trials = 0;
    for (int t = 0; t < 1000; ++t) {
      const int k = t % 6;
      std::vector<Point> pts;
      for (Nat i = 0; i <= tb_modulus_interval()(Nat(k)); ++i) pts.push_back(vec({unit(rng)}));
      if (!has_close_pair(pts, 1.0 / (k + 1) + kTau)) o.fail("(a) interval k=" + std::to_string(k));
      const std::size_t n = 1 + t % 2;
      pts.clear();
      for (Nat i = 0; i <= tb_modulus_ball(n, 1)(Nat(k)); ++i) pts.push_back(sample_ball(n, 1.0, rng));
      if (!has_close_pair(pts, 1.0 / (k + 1) + kTau)) o.fail("(a) ball k=" + std::to_string(k));
      // hull of two points q0, q1 with ‖q_i‖ ≤ 1/2
      const Point q0 = sample_ball(2, 0.5, rng), q1 = sample_ball(2, 0.5, rng);
      const int kh = t % 2;
      pts.clear();
      for (Nat i = 0; i <= tb_modulus_convex_hull(Modulus::constant(2), Rational(1, 2))(Nat(kh)); ++i) {
        const double w = unit(rng);
        pts.push_back(w * q0 + (1 - w) * q1);
      }
      if (!has_close_pair(pts, 1.0 / (kh + 1) + kTau)) o.fail("(a) hull k=" + std::to_string(kh));
      trials += 3;
    }
    // (b) conversions against brute-force optimal moduli
    for (int space = 0; space < 100; ++space) {
      const std::size_t n = 2 + rng() % 11, d = 1 + rng() % 3;
      std::vector<Point> pts;
      for (std::size_t i = 0; i < n; ++i) {
        Point p(static_cast<Eigen::Index>(d));
        for (auto& v : p) v = 3.0 * unit(rng);
        pts.push_back(p);
      }
      std::vector<Nat> gam, alp;
      for (int k = 0; k <= 41; ++k) {
        gam.push_back(Nat(max_separated_set(pts, 1.0 / (k + 1))));
        alp.push_back(Nat(min_net_size(pts, 1.0 / (k + 1)) - 1));
      }
      const Modulus g2 = modulus_I_to_II(Modulus::table(alp, Modulus::constant(n - 1)));
      const Modulus a2 = modulus_II_to_I(Modulus::table(gam, Modulus::constant(n)));
      for (int k = 0; k <= 20; ++k)
        if (g2(Nat(k)) < gam[k] || a2(Nat(k)) < alp[k]) o.fail("(b) space " + std::to_string(space));
    }
    // (c) Fejér moduli of every shipped scheme
    int chis = 0;
    for (const auto& f : list_scenarios(kScenarios, false)) {
      ScenarioRunner r(Scenario::load(f));
      if (r.scenario().scheme == SchemeTag::MonotoneSequence) continue;
      const AfSampler sampler(r.center(), r.domain(), r.domain().diameter());
      const SequenceSpec* eps = r.scenario().params.eps_seq ? &*r.scenario().params.eps_seq : nullptr;
      FejerCheckBudget b;
      b.trials = 1000;
      Verdict v = check_fejer_modulus(r.trajectory(), r.chi(), r.gh(), r.family(), sampler, b, eps);
      if (v.status != Status::Verified || v.trials < 500) o.fail("(c) " + f.filename().string() + " " + v.to_json().dump());
      ++chis;
    }
    // (d) uniform closedness
    {
      const Operator T = Operator::affine(Matrix{{0, -1}, {1, 0}}, vec({0, 0}));
      const AfSampler s(vec({0, 0}), Domain::ball(vec({0, 0}), 1.0), 1.0);
      Verdict v = check_uniform_closedness(fixed_point_family(T), uniform_closedness_from_continuity(Modulus::identity()),
                                           s, {});
      if (v.status != Status::Verified) o.fail("(d) nonexpansive " + v.to_json().dump());
    }
    {
      ScenarioRunner r(Scenario::load(kScenarios / "cond_e.json"));
      const AfSampler s(r.center(), r.domain(), r.domain().diameter());
      Verdict v = check_uniform_closedness(r.family(), cond_e_moduli(r.scenario().params).closed, s, {});
      if (v.status != Status::Verified) o.fail("(d) cond_e " + v.to_json().dump());
    }
    {
      const QuadraticResolvent J(Matrix{{2, 0.5}, {0.5, 1}}, vec({0.2, -0.1}));
      const AfSampler s(*J.zero(), Domain::ball(*J.zero(), 1.0), 1.0);
      Verdict v = check_uniform_closedness(ppa_family(J, SequenceSpec::harmonic(1, 1)), ClosednessModuli{}, s, {});
      if (v.status != Status::Verified) o.fail("(d) ppa " + v.to_json().dump());
    }
    o.note << trials << " pigeonhole trials, 100 spaces, " << chis << " Fejer moduli";
  });

  criterion(7, "cross-path equality Sigma, Sigma~, Theta, Theta_fne", 0.0, [](Outcome& o) {
    std::mt19937_64 rng(77);
    auto rg = [&] { return rng() % 2 ? Modulus::constant(rng() % 3) : Modulus::affine(rng() % 2, rng() % 3); };
    auto ra = [&](int amax, int bmax) { return Modulus::affine(1 + rng() % amax, rng() % (bmax + 1)); };
    auto inputs = [](const Nat& k, const Modulus& g, const Modulus& phi, const Modulus& gamma) {
      RateInputs in;
      in.k = k;
      in.g = g;
      in.phi = phi;
      in.chi = FejerModulus::picard();
      in.gamma = gamma;
      return in;
    };
    const int N = 25;
    for (int t = 0; t < N; ++t) {
      const Nat k = rng() % 3;
      const Modulus g = rg(), phi = ra(2, 2), gamma = ra(1, 3);
      if (picard_ne_sigma(k, g, phi, gamma).bound != psi(inputs(k, g, phi, gamma)).bound) o.fail("Sigma");
      RateInputs in = inputs(k, g, phi, gamma);
      in.closed = uniform_closedness_from_continuity(Modulus::identity());
      if (picard_ne_sigma_tilde(k, g, phi, gamma).bound != psi_tilde(in).bound) o.fail("Sigma~");
      const Functional ps = psi_plus(inputs(k, g, phi, gamma), phi, 100000);
      if (picard_ne_theta(k, g, phi, gamma).bound != omega_tilde(k, g, ps, phi)) o.fail("Theta");
    }
    for (int t = 0; t < N; ++t) {
      const Nat k = rng() % 2;
      const Modulus g = rg(), gamma = ra(1, 2);
      const Rational b(1 + rng() % 3, 1 + rng() % 2), lambda(1 + rng() % 3, 4);
      const Modulus f = fne_rate(b, lambda);
      const Functional ps = psi_plus(inputs(k, g, f, gamma), f, 100000);
      if (theta_fne(k, g, gamma, b, lambda).bound != omega_tilde(k, g, ps, f)) o.fail("Theta_fne");
    }
    o.note << N << " inputs per identity";
  });

  std::printf("%s: %d failing\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
