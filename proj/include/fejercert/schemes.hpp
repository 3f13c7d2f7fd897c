#pragma once

#include "fejercert/rates.hpp"
#include "fejercert/sequence.hpp"

#include <optional>
#include <string>

namespace fejercert {

// Uniform-convexity modulus of the CAT(0) instantiation.
enum class Eta {
  Square,  // η(r,ε) = ε²/8
  Linear,  // η̃(r,ε) = ε/8, admissible since η = ε·η̃
};

struct SchemeParams {
  std::optional<Rational> b;
  std::optional<Rational> lambda;
  std::optional<Rational> kappa;
  std::optional<Rational> mu;
  std::optional<Nat> L;
  std::optional<Nat> N0;
  std::optional<unsigned> K;
  std::optional<Modulus> theta;
  std::optional<SequenceSpec> gamma_seq;
  std::optional<SequenceSpec> lambda_seq;
  std::optional<SequenceSpec> s_seq;
  std::optional<SequenceSpec> eps_seq;
  Eta eta = Eta::Linear;

  json to_json() const;
  static SchemeParams from_json(const json& j, const std::string& pointer = "/params");
};

// --- Picard iteration of a nonexpansive map ---------------------------------

// Σ: P = γ(4k+3), Σ_0(n+1) = Φ((4k+4)·g^M(Σ_0(n))).
Certificate picard_ne_sigma(const Nat& k, const Modulus& g, const Modulus& phi, const Modulus& gamma,
                            EvalContext& ctx);
Certificate picard_ne_sigma(const Nat& k, const Modulus& g, const Modulus& phi, const Modulus& gamma);

// Σ̃: P = γ(8k+7), Σ̃_0(n+1) = Φ(max{2k+1, (8k+8)·g^M(Σ̃_0(n))}).
Certificate picard_ne_sigma_tilde(const Nat& k, const Modulus& g, const Modulus& phi, const Modulus& gamma,
                                  EvalContext& ctx);
Certificate picard_ne_sigma_tilde(const Nat& k, const Modulus& g, const Modulus& phi, const Modulus& gamma);

// Θ: K = f(k), P = γ^M(4k+3), Θ_0(n+1) = f((g^M(Θ_0(n)+K)+K)(4k+4)), bound Θ_0(P)+K, f = (Φ⁺⁺)^M.
Certificate picard_ne_theta(const Nat& k, const Modulus& g, const Modulus& phi_pp, const Modulus& gamma,
                            EvalContext& ctx);
Certificate picard_ne_theta(const Nat& k, const Modulus& g, const Modulus& phi_pp, const Modulus& gamma);

// c = ⌈8(b+1)²/(λ(1−λ))⌉
Nat fne_constant(const Rational& b, const Rational& lambda);
// Φ⁺⁺(k) = c(k+1)², rate of asymptotic regularity for λ-firmly nonexpansive Picard.
Modulus fne_rate(const Rational& b, const Rational& lambda);
// Θ specialised to Φ⁺⁺ = fne_rate(b, λ).
Certificate theta_fne(const Nat& k, const Modulus& g, const Modulus& gamma, const Rational& b, const Rational& lambda,
                      EvalContext& ctx);
Certificate theta_fne(const Nat& k, const Modulus& g, const Modulus& gamma, const Rational& b, const Rational& lambda);

// --- Ishikawa ---------------------------------------------------------------

// θ(n) = n·⌈1/(λ(1−λ))⌉
Modulus constant_lambda_divergence(const Rational& lambda);
// k ↦ θ(4(k+1)²L²⌈b(b+1)⌉ + N0)
Modulus ishikawa_phi(const Rational& b, const Modulus& theta, const Nat& L, const Nat& N0);
Nat ishikawa_apfp_bound(const Nat& k, const Rational& b, const Modulus& theta, const Nat& L, const Nat& N0);
// Fills θ, L, N0 from the sequences when they are constant; checks ranges.
Modulus ishikawa_phi(const SchemeParams& p);

// --- Mann iteration of a κ-strict pseudo-contraction --------------------------

struct SpcModuli {
  FejerModulus chi;
  GHModuli gh;
  ClosednessModuli closed;
  Modulus phi_pp;
};
SpcModuli spc_moduli(const SchemeParams& p);

// --- Mann iteration of a map with condition (E_μ) ----------------------------

Rational cond_e_theta(const Nat& k, const Nat& L, const Rational& b, Eta eta);
// M(k) = ⌈3(b+1)/θ(k)⌉
Modulus cond_e_M(const Nat& L, const Rational& b, Eta eta);
// M(k)-fold iterate of h(n) = g^M(n)+n+1 from 0.
Nat cond_e_phi_plus(const Nat& k, const Modulus& g, const SchemeParams& p, EvalContext& ctx);
Nat cond_e_phi_plus(const Nat& k, const Modulus& g, const SchemeParams& p);
Functional cond_e_phi_plus_functional(const SchemeParams& p);

struct CondEModuli {
  FejerModulus chi;
  ClosednessModuli closed;
  Modulus phi;  // Φ(k) = Φ⁺(k, 0) = M(k)
};
CondEModuli cond_e_moduli(const SchemeParams& p);

// --- Mann iteration of an asymptotically nonexpansive map ----------------------

struct AsymptoticNeModuli {
  FejerModulus chi;
  GHModuli gh;
  ClosednessModuli closed;
};
AsymptoticNeModuli asymptotically_ne_moduli(const SchemeParams& p);

// --- Proximal point algorithm -----------------------------------------------

class PpaModuli {
 public:
  PpaModuli(Rational b, Modulus theta, SequenceSpec gamma_seq);

  FejerModulus chi() const { return FejerModulus::ppa(); }
  ClosednessModuli closed() const { return {}; }
  // Δ(k,L) = ⌈b²(k+1)²⌉ + L − 1
  Nat delta(const Nat& k, const Nat& L) const;
  // β(k) = θ(⌈b²(k+1)²⌉)
  Nat beta(const Nat& k) const;
  Rational m(const Nat& k) const { return gamma_seq_.prefix_max(k); }
  // M_k = ⌈(k+1)(2+m_k)⌉ − 1
  Nat M(const Nat& k) const;
  // Φ(k) = θ(s)·s − 1 with s = ⌈b²(M_k+1)²⌉
  Nat phi(const Nat& k) const;
  Modulus phi_modulus() const;

  const Rational& b() const { return b_; }
  const Modulus& theta() const { return theta_; }
  const SequenceSpec& gamma_seq() const { return gamma_seq_; }

 private:
  Rational b_;
  Modulus theta_;
  SequenceSpec gamma_seq_;
};

// θ for Σγ_n² when γ is constant: n ↦ ⌈n/γ²⌉.
Modulus constant_gamma_divergence(const Rational& gamma);
PpaModuli ppa_moduli(const SchemeParams& p);

}  // namespace fejercert
