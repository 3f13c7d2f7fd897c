#include "fejercert/errors.hpp"
#include "fejercert/moduli.hpp"
#include "fejercert/total_boundedness.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace fejercert;

TEST(Nat, Helpers) {
  EXPECT_EQ(monus(3, 5), 0);
  EXPECT_EQ(monus(5, 3), 2);
  EXPECT_EQ(ceil_div(7, 2), 4);
  EXPECT_EQ(ceil_rational(Rational(7, 3)), 3);
  EXPECT_EQ(ceil_rational(Rational(-1, 2)), 0);
  EXPECT_EQ(ceil_sqrt(8), 3);
  EXPECT_EQ(ceil_sqrt(9), 3);
  EXPECT_EQ(ceil_sqrt_rational(Rational(8)), 3);
  EXPECT_EQ(ceil_log2(1), 0);
  EXPECT_EQ(ceil_log2(5), 3);
  EXPECT_EQ(ceil_exp(0), 1);
  EXPECT_EQ(ceil_exp(1), 3);
  EXPECT_EQ(ceil_exp(2), 8);
  EXPECT_EQ(parse_rational("1/3"), Rational(1, 3));
  EXPECT_EQ(parse_rational("-0.25"), Rational(-1, 4));
  EXPECT_EQ(parse_rational("1e-3"), Rational(1, 1000));
  EXPECT_EQ(rational_from_double(0.5), Rational(1, 2));
  const Nat big = pow_nat(10, 50);
  EXPECT_EQ(parse_nat(to_decimal(big)), big);
}

TEST(Modulus, EvaluatesClosedForms) {
  EXPECT_EQ(Modulus::constant(5)(Nat(9)), 5);
  EXPECT_EQ(Modulus::affine(2, 1)(Nat(3)), 7);
  EXPECT_EQ(Modulus::polynomial({1, 0, 2})(Nat(3)), 19);
  EXPECT_EQ(Modulus::ceil_scaled_power(Rational(1, 2), 2)(Nat(2)), 5);
  EXPECT_EQ(Modulus::monus(Modulus::identity(), 3)(Nat(1)), 0);
  EXPECT_EQ(Modulus::ceil_sqrt(Modulus::identity())(Nat(10)), 4);
  EXPECT_EQ(Modulus::ceil_log2(Modulus::affine(1, 2))(Nat(0)), 1);
  EXPECT_EQ(Modulus::shift(Modulus::identity(), 4)(Nat(1)), 5);
  EXPECT_EQ(Modulus::compose(Modulus::affine(2, 0), Modulus::affine(1, 1))(Nat(3)), 8);
}

TEST(Modulus, TableWithoutTailRejectsOutOfRange) {
  Modulus t = Modulus::table({1, 2});
  EXPECT_EQ(t(Nat(1)), 2);
  EXPECT_THROW(t(Nat(2)), DomainError);
}

TEST(Modulus, SaturatesToLowerBound) {
  EvalContext ctx;
  Modulus p = Modulus::power(Modulus::identity(), 100000);
  Nat v = p.eval(pow_nat(2, 100), ctx);
  EXPECT_TRUE(ctx.saturated());
  EXPECT_EQ(v, ctx.ceiling());
  EXPECT_THROW(p(pow_nat(2, 100)), CapExceeded);
}

TEST(Modulus, JsonRoundTrip) {
  const std::vector<Modulus> ms = {
      Modulus::affine(3, 4),
      Modulus::table({3, 1, 5}, Modulus::identity()),
      Modulus::max_of({Modulus::identity(), Modulus::constant(7)}),
      Modulus::ceil_scale(Rational(3, 2), Modulus::power(Modulus::identity(), 2)),
      tb_modulus_ball(2, Rational(1)),
      tb_modulus_convex_hull(Modulus::constant(2), Rational(1, 2)),
  };
  for (const auto& m : ms) {
    const json j = m.to_json();
    Modulus back = Modulus::from_json(j);
    EXPECT_EQ(back.to_json(), j);
    for (int n = 0; n < 6; ++n) EXPECT_EQ(back(Nat(n)), m(Nat(n))) << j.dump();
  }
}

TEST(Modulus, FromJsonReportsPointer) {
  try {
    Modulus::from_json(json{{"kind", "affine"}, {"a", -1}, {"b", 0}}, "/g");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.pointer().rfind("/g", 0), 0u) << e.pointer();
  }
}

TEST(Majorant, Examples) {
  Modulus aff = Modulus::affine(2, 1);
  EXPECT_EQ(majorant(aff, 10).to_json(), aff.to_json());
  Modulus a = majorant(Modulus::table({3, 1, 5}), 2);
  EXPECT_EQ(a(Nat(0)), 3);
  EXPECT_EQ(a(Nat(1)), 3);
  EXPECT_EQ(a(Nat(2)), 5);
  Modulus b = majorant(Modulus::table({0, 2, 1, 4}), 3);
  std::vector<Nat> got;
  for (int n = 0; n < 4; ++n) got.push_back(b(Nat(n)));
  EXPECT_EQ(got, (std::vector<Nat>{0, 2, 2, 4}));
}

TEST(Majorant, BeyondCapIsDomainError) {
  Modulus m = majorant(Modulus::table({3, 1, 5}, Modulus::constant(0)), 2);
  EXPECT_THROW(m(Nat(3)), DomainError);
}

TEST(Majorant, DominatesAndIsNondecreasing) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    std::vector<Nat> vals;
    for (int i = 0; i < 30; ++i) vals.push_back(Nat(rng() % 100));
    Modulus m = Modulus::table(vals, Modulus::constant(0));
    Modulus M = majorant(m, 40);
    Nat prev = 0;
    for (int n = 0; n <= 40; ++n) {
      Nat v = M(Nat(n));
      EXPECT_GE(v, m(Nat(n)));
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
}

TEST(Conversions, Examples) {
  EXPECT_EQ(modulus_I_to_II(Modulus::constant(5))(Nat(0)), 6);
  EXPECT_EQ(modulus_I_to_II(Modulus::constant(5))(Nat(17)), 6);
  Modulus id2 = modulus_I_to_II(Modulus::identity());
  EXPECT_EQ(id2(Nat(0)), 2);
  EXPECT_EQ(id2(Nat(3)), 8);
  EXPECT_EQ(modulus_I_to_II(Modulus::affine(1, 1))(Nat(2)), 7);

  EXPECT_EQ(modulus_II_to_I(Modulus::affine(1, 1))(Nat(7)), 7);
  EXPECT_EQ(modulus_II_to_I(Modulus::constant(2))(Nat(4)), 1);
  EXPECT_EQ(modulus_II_to_I(tb_modulus_ball(1, Rational(1)))(Nat(0)), 1);
  EXPECT_THROW(modulus_II_to_I(Modulus::constant(0)), DomainError);
}

TEST(Conversions, RoundTrip) {
  const std::vector<Modulus> alphas = {Modulus::identity(), Modulus::affine(3, 2),
                                       Modulus::polynomial({1, 1, 1}), Modulus::constant(4)};
  for (const auto& a : alphas) {
    Modulus back = modulus_II_to_I(modulus_I_to_II(a));
    for (int k = 0; k <= 100; ++k) EXPECT_EQ(back(Nat(k)), a(Nat(2 * k + 1)));
  }
}

TEST(TotalBoundedness, Examples) {
  EXPECT_EQ(tb_modulus_interval()(Nat(0)), 1);
  EXPECT_EQ(tb_modulus_interval()(Nat(9)), 10);
  EXPECT_EQ(tb_modulus_ball(1, Rational(1))(Nat(0)), 2);
  EXPECT_EQ(tb_modulus_ball(2, Rational(1))(Nat(0)), 9);
  EXPECT_EQ(tb_modulus_convex_hull(Modulus::constant(1), Rational(1))(Nat(0)), 6);
  Modulus g = Modulus::affine(3, 1);
  EXPECT_EQ(tb_modulus_closure(g).to_json(), g.to_json());
  EXPECT_THROW(tb_modulus_ball(0, Rational(1)), RangeError);
  EXPECT_THROW(tb_modulus_ball(1, Rational(0)), RangeError);
  EXPECT_THROW(tb_modulus_convex_hull(Modulus::constant(0), Rational(1))(Nat(0)), DomainError);
}

TEST(TotalBoundedness, IntervalTripleHasClosePair) {
  std::vector<Point> pts = {vec({0.0}), vec({0.6}), vec({0.3})};
  ASSERT_EQ(tb_modulus_interval()(Nat(1)) + 1, 3);
  EXPECT_TRUE(has_close_pair(pts, 0.5));
}

TEST(Pigeonhole, Interval) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k <= 5; ++k) {
    const auto need = static_cast<std::size_t>(tb_modulus_interval()(Nat(k))) + 1;
    for (int t = 0; t < 1000; ++t) {
      std::vector<Point> pts;
      for (std::size_t i = 0; i < need; ++i) pts.push_back(vec({u(rng)}));
      ASSERT_TRUE(has_close_pair(pts, 1.0 / (k + 1) + 1e-9)) << "k=" << k;
    }
  }
}

TEST(Pigeonhole, Ball) {
  std::mt19937_64 rng(22);
  for (std::uint64_t n : {1, 2, 3}) {
    for (int k = 0; k <= 5; ++k) {
      const Rational b(1);
      const auto need = static_cast<std::size_t>(tb_modulus_ball(n, b)(Nat(k))) + 1;
      if (need > 20000) continue;
      for (int t = 0; t < 1000; ++t) {
        std::vector<Point> pts;
        for (std::size_t i = 0; i < need; ++i) pts.push_back(sample_ball(n, 1.0, rng));
        ASSERT_TRUE(has_close_pair(pts, 1.0 / (k + 1) + 1e-9)) << "n=" << n << " k=" << k;
      }
    }
  }
}

TEST(Pigeonhole, ConvexHull) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int checked = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t s = 1 + t % 2;  // a set of s points has II-modulus const s
    const std::size_t d = 1 + t % 3;
    const int k = t % 2;
    std::vector<Point> base;
    double b = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
      Point p(static_cast<Eigen::Index>(d));
      for (auto& x : p) x = 0.5 * u(rng);
      b = std::max(b, p.norm());
      base.push_back(p);
    }
    const Rational rb = rational_from_double(b) + Rational(1, 1000);
    const auto need = static_cast<std::size_t>(tb_modulus_convex_hull(Modulus::constant(s), rb)(Nat(k))) + 1;
    std::vector<Point> pts;
    std::exponential_distribution<double> e(1.0);
    for (std::size_t i = 0; i < need; ++i) {
      Point p = Point::Zero(static_cast<Eigen::Index>(d));
      double total = 0.0;
      std::vector<double> w(s);
      for (auto& x : w) total += (x = e(rng));
      for (std::size_t j = 0; j < s; ++j) p += (w[j] / total) * base[j];
      pts.push_back(p);
    }
    ASSERT_TRUE(has_close_pair(pts, 1.0 / (k + 1) + 1e-9)) << "trial " << t;
    ++checked;
  }
  EXPECT_EQ(checked, 1000);
}

TEST(Conversions, BruteForceOnFiniteSpaces) {
  std::mt19937_64 rng(24);
  for (int space = 0; space < 100; ++space) {
    const std::size_t n = 2 + rng() % 11;
    const std::size_t d = 1 + rng() % 3;
    std::vector<Point> pts;
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (std::size_t i = 0; i < n; ++i) {
      Point p(static_cast<Eigen::Index>(d));
      for (auto& x : p) x = u(rng);
      pts.push_back(p);
    }
    std::vector<Nat> gamma_star, alpha_star;
    for (int k = 0; k <= 40; ++k) {
      gamma_star.push_back(Nat(max_separated_set(pts, 1.0 / (k + 1))));
      alpha_star.push_back(Nat(min_net_size(pts, 1.0 / (k + 1)) - 1));
    }
    Modulus gamma = Modulus::table(gamma_star, Modulus::constant(n));
    Modulus alpha = Modulus::table(alpha_star, Modulus::constant(n - 1));
    Modulus g2 = modulus_I_to_II(alpha);
    Modulus a2 = modulus_II_to_I(gamma);
    for (int k = 0; k <= 19; ++k) {
      // γ is a II-modulus iff it bounds every separated set; α is an I-modulus iff a net of α+1 points exists.
      EXPECT_GE(g2(Nat(k)), gamma_star[k]) << "space " << space << " k=" << k;
      EXPECT_GE(a2(Nat(k)), alpha_star[k]) << "space " << space << " k=" << k;
    }
  }
}

TEST(GHModuli, ContractsOnGrid) {
  const std::vector<GHModuli> pairs = {GHModuli::identity(), GHModuli::square(), GHModuli::scaled(0),
                                       GHModuli::scaled(1), GHModuli::scaled(2)};
  const double b = 2.0;
  for (const auto& gh : pairs) {
    for (int k = 0; k <= 20; ++k) {
      const double ag = inverse_succ(gh.alpha_G(Nat(k)));
      const double bh = inverse_succ(gh.beta_H(Nat(k)));
      for (int i = 0; i <= 10000; ++i) {
        const double a = 2 * b * i / 10000.0;
        if (a <= ag) ASSERT_LE(gh.G(a), 1.0 / (k + 1) + 1e-12) << gh.to_json().dump() << " k=" << k << " a=" << a;
        if (gh.H(a) <= bh) ASSERT_LE(a, 1.0 / (k + 1) + 1e-12) << gh.to_json().dump() << " k=" << k << " a=" << a;
      }
    }
  }
}

TEST(GHModuli, ScaledValues) {
  GHModuli gh = GHModuli::scaled(2);
  EXPECT_EQ(gh.beta_H(Nat(4)), 40);
  EXPECT_EQ(GHModuli::scaled(0).beta_H(Nat(7)), 8);
  EXPECT_DOUBLE_EQ(gh.H(std::exp(2.0)), 1.0);
  EXPECT_EQ(GHModuli::from_json(gh.to_json()).to_json(), gh.to_json());
}

TEST(Closedness, FromContinuity) {
  ClosednessModuli c = uniform_closedness_from_continuity(Modulus::identity());
  for (int k = 0; k < 10; ++k) {
    EXPECT_EQ(c.omega_F(Nat(k)), 4 * k + 3);
    EXPECT_EQ(c.delta_F(Nat(k)), 2 * k + 1);
  }
  EXPECT_EQ(uniform_closedness_from_continuity(Modulus::affine(2, 2)).omega_F(Nat(0)), 8);
}

TEST(DiameterWitness, Examples) {
  auto at = [](double v) { return [v](std::uint64_t) { return vec({v}); }; };
  Modulus g = Modulus::constant(5);
  EXPECT_EQ(diameter_witness(at(0), at(0), g).N, 3);
  EXPECT_EQ(diameter_witness(at(0), at(1), g).N, 4);
  EXPECT_EQ(diameter_witness(at(0), at(5), g).N, 8);
}

TEST(DiameterWitness, BoundedByModulusIndex) {
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> xs, ys;
    for (int i = 0; i < 64; ++i) {
      xs.push_back(u(rng));
      ys.push_back(u(rng));
    }
    auto x = [&](std::uint64_t n) { return vec({xs[n % xs.size()]}); };
    auto y = [&](std::uint64_t n) { return vec({ys[n % ys.size()]}); };
    DiameterWitness w = diameter_witness(x, y, tb_modulus_interval());
    ASSERT_FALSE(w.indices.empty());
    EXPECT_LT(w.distance, static_cast<double>(w.N));
    EXPECT_LE(w.indices.size(), static_cast<std::size_t>(tb_modulus_interval()(Nat(0))) + 1);
  }
}
