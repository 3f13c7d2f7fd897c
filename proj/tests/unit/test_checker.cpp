#include "fejercert/checker.hpp"
#include "fejercert/errors.hpp"
#include "fejercert/scenario.hpp"
#include "fejercert/schemes.hpp"
#include "fejercert/total_boundedness.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

using namespace fejercert;

namespace {

const std::filesystem::path kScenarios = FEJERCERT_SCENARIO_DIR;

Trajectory closed(std::function<double(std::uint64_t)> f) {
  return Trajectory::closed_form("test", [f](std::uint64_t n) { return vec({f(n)}); });
}

// Direct window check, independent of scan_witness.
bool window_ok(Trajectory& t, std::uint64_t N, std::uint64_t len, double eps) {
  for (std::uint64_t i = N; i <= N + len; ++i)
    for (std::uint64_t j = i + 1; j <= N + len; ++j)
      if (t.distance(i, j) > eps) return false;
  return true;
}

Certificate fixed_bound(Nat b) {
  Certificate c;
  c.theorem = "test";
  c.bound = std::move(b);
  return c;
}

}  // namespace

TEST(FindWitness, Examples) {
  Trajectory a = closed([](std::uint64_t n) { return 1.0 - std::ldexp(1.0, -static_cast<int>(n)); });
  auto w = find_witness(a, 1, Modulus::constant(1), {});
  ASSERT_TRUE(w);
  EXPECT_EQ(w->N, 0);
  EXPECT_EQ(w->window_end, 1);
  EXPECT_DOUBLE_EQ(w->max_pairwise_gap, 0.5);

  Trajectory c = closed([](std::uint64_t) { return 0.25; });
  for (int k = 0; k < 5; ++k)
    for (const auto& g : {Modulus::constant(3), Modulus::affine(2, 1)}) {
      auto wc = find_witness(c, k, g, {});
      ASSERT_TRUE(wc);
      EXPECT_EQ(wc->N, 0);
    }

  Trajectory alt = closed([](std::uint64_t n) { return static_cast<double>(n % 2); });
  WitnessSearch s;
  s.cap = 500;
  EXPECT_FALSE(find_witness(alt, 1, Modulus::constant(1), s));
  EXPECT_FALSE(find_witness(alt, 1, Modulus::affine(1, 1), s));
}

TEST(FindWitness, Minimality) {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 40; ++t) {
    const double ratio = 0.5 + 0.45 * (rng() % 100) / 100.0;
    const int d = 1 + t % 3;
    Trajectory x = Trajectory::closed_form("test", [ratio, d](std::uint64_t n) {
      Point p(d);
      for (int i = 0; i < d; ++i) p[i] = std::pow(ratio, static_cast<double>(n)) * std::cos(n + i);
      return p;
    });
    const Nat k = rng() % 20;
    Modulus g = rng() % 2 ? Modulus::constant(rng() % 5) : Modulus::affine(1, rng() % 3);
    auto w = find_witness(x, k, g, {});
    ASSERT_TRUE(w);
    const auto N = static_cast<std::uint64_t>(w->N);
    const double eps = inverse_succ(k) + kDefaultTau;
    EXPECT_TRUE(window_ok(x, N, static_cast<std::uint64_t>(g(w->N)), eps));
    for (std::uint64_t M = 0; M < N; ++M)
      EXPECT_FALSE(window_ok(x, M, static_cast<std::uint64_t>(g(Nat(M))), eps)) << "t=" << t << " M=" << M;
  }
}

TEST(FindWitness, MembershipVariant) {
  Operator T = Operator::scale(1, 0.5);
  Trajectory x = picard(T, vec({1}));
  ApproximationFamily f = fixed_point_family(T);
  WitnessSearch s;
  s.membership = &f;
  // with g ≡ 0 the gap condition holds at N=0; membership needs residual x_n/2 ≤ 1/11
  auto plain = find_witness(x, 10, Modulus::constant(0), {});
  auto member = find_witness(x, 10, Modulus::constant(0), s);
  ASSERT_TRUE(plain && member);
  EXPECT_EQ(plain->N, 0);
  EXPECT_EQ(member->N, 3);
  ASSERT_TRUE(member->max_window_residual);
  EXPECT_LE(*member->max_window_residual, 1.0 / 11);
}

TEST(VerifyCertificate, Outcomes) {
  Trajectory alt = closed([](std::uint64_t n) { return static_cast<double>(n % 2); });
  WitnessSearch s;
  s.cap = 100;
  EXPECT_EQ(verify_certificate(alt, 1, Modulus::constant(1), fixed_bound(50), s).status, Status::ModulusViolation);
  EXPECT_EQ(verify_certificate(alt, 1, Modulus::constant(1), fixed_bound(5000), s).status, Status::Inconclusive);
  Certificate inexact = fixed_bound(50);
  inexact.exact = false;
  EXPECT_EQ(verify_certificate(alt, 1, Modulus::constant(1), inexact, s).status, Status::Inconclusive);

  Trajectory x = picard(Operator::scale(1, 0.5), vec({1}));
  Certificate sigma = picard_ne_sigma(1, Modulus::affine(1, 1), Modulus::identity(), Modulus::affine(1, 1));
  Verdict v = verify_certificate(x, 1, Modulus::affine(1, 1), sigma, {});
  EXPECT_EQ(v.status, Status::Verified);
  ASSERT_TRUE(v.witness && v.bound);
  EXPECT_LE(v.witness->N, *v.bound);
  json j = v.to_json();
  EXPECT_EQ(j["status"], "verified");
  EXPECT_TRUE(j["witness"].contains("max_gap"));
}

TEST(FejerCheck, PicardAndPpaHaveNoViolations) {
  Operator T = Operator::scale(2, 0.5);
  Trajectory x = picard(T, vec({0.6, 0.8}));
  AfSampler sampler(vec({0, 0}), Domain::ball(vec({0, 0}), 1.0), 1.0);
  Verdict v = check_fejer_modulus(x, FejerModulus::picard(), GHModuli::identity(), fixed_point_family(T), sampler, {});
  EXPECT_EQ(v.status, Status::Verified) << v.to_json().dump();
  EXPECT_GT(v.trials, 900u);

  QuadraticResolvent J(Matrix::Identity(2, 2), vec({0, 0}));
  Trajectory y = ppa(J, vec({0.6, 0.8}), SequenceSpec::constant(1));
  Verdict w = check_fejer_modulus(y, FejerModulus::ppa(), GHModuli::identity(),
                                  ppa_family(J, SequenceSpec::constant(1)), sampler, {});
  EXPECT_EQ(w.status, Status::Verified) << w.to_json().dump();
}

TEST(FejerCheck, ShrunkModulusIsRefuted) {
  Operator T = Operator::scale(1, 0.5);
  Trajectory x = picard(T, vec({1}));
  AfSampler sampler(vec({0}), Domain::ball(vec({0}), 4.0), 4.0);
  FejerCheckBudget b;
  b.max_m = 5;
  Verdict v = check_fejer_modulus(x, FejerModulus::constant(0), GHModuli::identity(), fixed_point_family(T), sampler, b);
  EXPECT_EQ(v.status, Status::ModulusViolation);
  EXPECT_FALSE(v.violations.empty());
}

TEST(FejerCheck, UnreachableCenterIsInconclusive) {
  Operator T = Operator::scale(1, 0.5);
  Trajectory x = picard(T, vec({1}));
  AfSampler sampler(vec({3}), std::nullopt, 1.0);
  Verdict v = check_fejer_modulus(x, FejerModulus::picard(), GHModuli::identity(), fixed_point_family(T), sampler, {});
  EXPECT_EQ(v.status, Status::Inconclusive);
}

TEST(AsymptoticRegularity, RateAndMetastableForms) {
  Operator T = Operator::scale(1, 0.5);
  Trajectory fixed = picard(T, vec({0}));
  for (int k = 0; k < 5; ++k)
    EXPECT_EQ(check_asymptotic_regularity(fixed, fixed_point_family(T), Modulus::constant(0), k).status,
              Status::Verified);
  Trajectory x = picard(T, vec({1}));
  // residual x_n/2 = 2^{-n-1} ≤ 1/(k+1) from n = ⌈log2(k+1)⌉−1
  EXPECT_EQ(check_asymptotic_regularity(x, fixed_point_family(T), Modulus::constant(0), 7).status,
            Status::ModulusViolation);
  EXPECT_EQ(check_asymptotic_regularity(x, fixed_point_family(T), Modulus::constant(2), 7).status,
            Status::Verified);
  EXPECT_EQ(check_asymptotic_regularity(x, fixed_point_family(T), Functional::constant(2), 7,
                                        Modulus::constant(3))
                .status,
            Status::Verified);
  EXPECT_EQ(check_asymptotic_regularity(x, fixed_point_family(T), Functional::constant(1), 7,
                                        Modulus::constant(3))
                .status,
            Status::ModulusViolation);
}

TEST(LiminfBound, Check) {
  Operator T = Operator::scale(1, 0.5);
  Trajectory x = picard(T, vec({1}));
  EXPECT_EQ(check_liminf_bound(x, fixed_point_family(T), LiminfBound{Modulus::ceil_log2(Modulus::affine(1, 1))}, 10, 5)
                .status,
            Status::Verified);
  EXPECT_EQ(check_liminf_bound(x, fixed_point_family(T), LiminfBound{Modulus::constant(0)}, 10, 5).status,
            Status::ModulusViolation);
}

TEST(Closedness, ContinuityModulusForNonexpansive) {
  Operator T = Operator::affine(Matrix{{0, -1}, {1, 0}}, vec({0, 0}));
  AfSampler sampler(vec({0, 0}), Domain::ball(vec({0, 0}), 1.0), 1.0);
  ClosednessModuli c = uniform_closedness_from_continuity(Modulus::identity());
  Verdict v = check_uniform_closedness(fixed_point_family(T), c, sampler, {});
  EXPECT_EQ(v.status, Status::Verified) << v.to_json().dump();
}

TEST(Closedness, Ppa) {
  QuadraticResolvent J(Matrix{{2, 0}, {0, 1}}, vec({0, 0}));
  AfSampler sampler(vec({0, 0}), Domain::ball(vec({0, 0}), 2.0), 2.0);
  Verdict v = check_uniform_closedness(ppa_family(J, SequenceSpec::harmonic(1, 1)), ClosednessModuli{}, sampler, {});
  EXPECT_EQ(v.status, Status::Verified) << v.to_json().dump();
}

TEST(Closedness, TooSmallOmegaIsRefuted) {
  Operator T = Operator::scale(1, -1);
  AfSampler sampler(vec({0}), Domain::ball(vec({0}), 2.0), 2.0);
  ClosednessModuli c{Modulus::affine(2, 1), Modulus::constant(0)};
  EXPECT_EQ(check_uniform_closedness(fixed_point_family(T), c, sampler, {}).status, Status::ModulusViolation);
}

TEST(Closedness, ZeroPerturbationFollowsFromNesting) {
  Operator T = Operator::scale(1, 0.5);
  ApproximationFamily f = fixed_point_family(T);
  AfSampler sampler(vec({0}), std::nullopt, 4.0);
  std::mt19937_64 rng(62);
  for (int k = 0; k < 20; ++k) {
    auto q = sampler.sample(f, Nat(2 * k + 1), rng, true);
    ASSERT_TRUE(q);
    EXPECT_TRUE(f.contains(*q, k, kDefaultTau));
  }
}

TEST(Scenarios, MonotoneSequenceExample) {
  ScenarioRunner r(Scenario::load(kScenarios / "monotone_sequence.json"));
  Verdict v = r.verify(0, Modulus::constant(1));
  EXPECT_EQ(v.status, Status::Verified);
  ASSERT_TRUE(v.bound && v.witness);
  EXPECT_EQ(*v.bound, 4);
  EXPECT_EQ(v.witness->N, 0);
}

TEST(Scenarios, AdversarialIsRefuted) {
  ScenarioRunner r(Scenario::load(kScenarios / "adversarial" / "picard_chi_zero.json"));
  EXPECT_EQ(r.verify().status, Status::ModulusViolation);
}

TEST(Scenarios, SoundAndMonotoneInK) {
  for (const auto& e : std::filesystem::directory_iterator(kScenarios)) {
    if (e.path().extension() != ".json") continue;
    ScenarioRunner r(Scenario::load(e.path()));
    for (const auto& g : {Modulus::constant(1), Modulus::affine(1, 1)}) {
      Nat prev = 0;
      for (int k = 0; k <= 2; ++k) {
        Verdict v = r.verify(k, g);
        ASSERT_EQ(v.status, Status::Verified) << e.path() << " k=" << k << "\n" << v.to_json().dump(1);
        ASSERT_TRUE(v.witness && v.bound);
        EXPECT_LE(v.witness->N, *v.bound);
        // the plain gap witness is what moves monotonically with k
        auto w = find_witness(r.trajectory(), k, g, {});
        ASSERT_TRUE(w);
        EXPECT_GE(w->N, prev) << e.path() << " k=" << k;
        prev = w->N;
      }
    }
  }
}
