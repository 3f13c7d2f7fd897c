#include "fejercert/total_boundedness.hpp"

#include "fejercert/errors.hpp"

#include <algorithm>
#include <cmath>

namespace fejercert {

namespace {

class IIToINode final : public ModulusNode {
 public:
  explicit IIToINode(Modulus gamma) : gamma_(std::move(gamma)) {}
  Nat eval(const Nat& k, EvalContext& ctx) const override {
    Nat g = gamma_.eval(k, ctx);
    if (g == 0) throw DomainError("II-modulus takes the value 0 at k=" + to_decimal(k));
    return g - 1;
  }
  bool monotone() const override { return gamma_.monotone(); }
  json to_json() const override { return {{"kind", "ii_to_i"}, {"arg", gamma_.to_json()}}; }

 private:
  Modulus gamma_;
};

class ConvexHullNode final : public ModulusNode {
 public:
  ConvexHullNode(Modulus gamma, Rational b) : gamma_(std::move(gamma)), b_(std::move(b)) {}
  Nat eval(const Nat& k, EvalContext& ctx) const override {
    Nat g = gamma_.eval(ctx.clamp(4 * k + 3), ctx);
    if (g == 0) throw DomainError("convex hull modulus: gamma(4k+3) = 0 at k=" + to_decimal(k));
    const Nat& n_plus_1 = g;
    // m = ⌈2(k+1)(n+1)(b + 1/(4k+4))⌉ − 1
    Rational inner = b_ + Rational(Nat(1), Nat(4 * k + 4));
    Nat m_plus_1 = ceil_rational(Rational(Nat(2 * (k + 1) * n_plus_1)) * inner);
    Nat base = ctx.clamp(ceil_sqrt(Nat(4 * m_plus_1 * m_plus_1 * n_plus_1)));
    if (base <= 1) return base;
    std::size_t w = boost::multiprecision::msb(base);
    if (n_plus_1 * w >= ctx.limits().max_bits) return ctx.clamp(ctx.ceiling());
    return ctx.clamp(pow_nat(base, n_plus_1.convert_to<std::uint64_t>()));
  }
  bool monotone() const override { return gamma_.monotone(); }
  json to_json() const override {
    return {{"kind", "convex_hull"}, {"gamma", gamma_.to_json()}, {"b", rational_to_json(b_)}};
  }

 private:
  Modulus gamma_;
  Rational b_;
};

}  // namespace

Modulus modulus_I_to_II(const Modulus& alpha) {
  return Modulus::sum_of({Modulus::compose(alpha, Modulus::affine(2, 1)), Modulus::constant(1)});
}

Modulus modulus_II_to_I(const Modulus& gamma, std::uint64_t check_upto) {
  EvalContext ctx;
  for (std::uint64_t k = 0; k <= check_upto; ++k) {
    if (gamma.eval(k, ctx) == 0) {
      throw DomainError("II-modulus must satisfy gamma(k) >= 1; gamma(" + std::to_string(k) + ") = 0");
    }
  }
  return Modulus(std::make_shared<IIToINode>(gamma));
}

Modulus tb_modulus_interval() { return Modulus::affine(1, 1); }

Modulus tb_modulus_ball(std::uint64_t n, const Rational& b) {
  if (n == 0) throw RangeError("n", "dimension must be >= 1");
  if (b <= 0) throw RangeError("b", "radius must be positive");
  // ⌈2(k+1)√n·b⌉ = ⌈√(4nb²)·(k+1)⌉
  Rational q = Rational(Nat(4 * n)) * b * b;
  return Modulus::power(Modulus::ceil_sqrt_scale(q, Modulus::affine(1, 1)), n);
}

Modulus tb_modulus_convex_hull(const Modulus& gamma, const Rational& b) {
  if (b <= 0) throw RangeError("b", "bound must be positive");
  return Modulus(std::make_shared<ConvexHullNode>(gamma, b));
}

Modulus tb_modulus_closure(const Modulus& gamma) { return gamma; }

ClosednessModuli uniform_closedness_from_continuity(const Modulus& omega_T) {
  ClosednessModuli c;
  c.delta_F = Modulus::affine(2, 1);
  Modulus four_k_3 = Modulus::affine(4, 3);
  c.omega_F = Modulus::max_of({four_k_3, Modulus::compose(omega_T, four_k_3)});
  return c;
}

DiameterWitness diameter_witness(const std::function<Point(std::uint64_t)>& x,
                                 const std::function<Point(std::uint64_t)>& y, const Modulus& gamma,
                                 std::uint64_t cap) {
  const Nat limit = gamma(0);
  std::vector<Point> xs, ys;
  DiameterWitness w;
  double spread = 0.0;  // max over the three distance families seen so far
  std::uint64_t n = 0;
  for (Nat step = 0;; ++step) {
    w.indices.push_back(n);
    Point xn = x(n);
    Point yn = y(n);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      spread = std::max({spread, (xs[i] - yn).norm(), (xn - ys[i]).norm(), (xs[i] - xn).norm(), (ys[i] - yn).norm()});
    }
    double d = (xn - yn).norm();
    spread = std::max(spread, d);
    xs.push_back(xn);
    ys.push_back(yn);
    if (d < static_cast<double>(n)) {
      w.N = n;
      w.distance = d;
      return w;
    }
    if (step >= limit) {
      throw DomainError("no witness up to n_{gamma(0)}: gamma is not a II-modulus for these sequences");
    }
    double next = std::ceil(std::max(static_cast<double>(n), spread) + 3.0);
    if (!(next <= static_cast<double>(cap))) throw DomainError("diameter witness recursion exceeded cap");
    n = static_cast<std::uint64_t>(next);
  }
}

}  // namespace fejercert
