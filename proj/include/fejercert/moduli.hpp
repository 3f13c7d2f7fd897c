#pragma once

#include "fejercert/modulus.hpp"

#include <memory>
#include <optional>
#include <string>

namespace fejercert {

// χ(n,m,r): a bound on the AF-index that makes the windowed Fejér inequality hold.
class FejerModulus {
 public:
  enum class Family {
    Picard,        // m(r+1)
    Ishikawa,      // 2m(r+1)
    Spc,           // m(2n+m+5)(r+1)⌈b⌉
    CondE,         // ⌈μ m (1−1/L)(r+1)⌉
    AsymptoticNe,  // m(n+m+K)⌈e^K⌉(r+1)
    Ppa,           // max{n+m−1, m(r+1)}
    Sum,           // n+m
    Constant,      // c
    OfN,           // f(n)
    FloorMax,      // max{c, inner(n,m,r)}
  };

  FejerModulus();  // Picard

  static FejerModulus picard();
  static FejerModulus ishikawa();
  static FejerModulus spc(Nat ceil_b);
  static FejerModulus cond_e(Rational mu, Nat L);
  static FejerModulus asymptotic_ne(unsigned K);
  static FejerModulus ppa();
  static FejerModulus sum();
  static FejerModulus constant(Nat c);
  static FejerModulus of_n(Modulus f);
  static FejerModulus floor_max(Nat c, const FejerModulus& inner);

  Nat eval(const Nat& n, const Nat& m, const Nat& r, EvalContext& ctx) const;
  Nat operator()(const Nat& n, const Nat& m, const Nat& r) const;

  Family family() const { return family_; }
  bool monotone() const;
  // χ^M(n,m,r) = max over all smaller triples.
  FejerModulus majorant(const Nat& cap) const;

  json to_json() const;
  static FejerModulus from_json(const json& j, const std::string& pointer = "");

 private:
  Family family_ = Family::Picard;
  Nat a_;         // ⌈b⌉ | L | K | c
  Nat ceil_ek_;   // ⌈e^K⌉
  Rational mu_;
  std::shared_ptr<const Modulus> f_;
  std::shared_ptr<const FejerModulus> inner_;
};

// The transformation pair (G,H) with its G- and H-moduli.
struct GHModuli {
  enum class Tag { Identity, Square, Scaled };

  Tag tag = Tag::Identity;
  Modulus alpha_G = Modulus::identity();
  Modulus beta_H = Modulus::identity();
  unsigned K = 0;  // Scaled only: H(a) = a/e^K

  static GHModuli identity();
  // G = H = a². β_H(k) = (k+1)²−1, see README.
  static GHModuli square();
  static GHModuli scaled(unsigned K);

  double G(double a) const;
  double H(double a) const;

  json to_json() const;
  static GHModuli from_json(const json& j, const std::string& pointer = "");
};

struct ClosednessModuli {
  Modulus delta_F = Modulus::affine(2, 1);
  Modulus omega_F = Modulus::affine(4, 3);

  json to_json() const;
  static ClosednessModuli from_json(const json& j, const std::string& pointer = "");
};

// Φ̂(k,n) = n + base(k), a liminf bound monotone in both arguments.
struct LiminfBound {
  Modulus base;

  Nat eval(const Nat& k, const Nat& n, EvalContext& ctx) const;
  Nat operator()(const Nat& k, const Nat& n) const;
  json to_json() const;
  static LiminfBound from_json(const json& j, const std::string& pointer = "");
};

}  // namespace fejercert
