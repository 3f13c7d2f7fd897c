#pragma once

#include "fejercert/moduli.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fejercert {

struct RateInputs {
  Nat k;
  Modulus g;
  Modulus phi = Modulus::identity();
  FejerModulus chi;
  GHModuli gh;
  Modulus gamma = Modulus::affine(1, 1);
  std::optional<ClosednessModuli> closed;
  std::optional<Modulus> xi;
};

struct Certificate {
  static constexpr std::size_t kStoredIterates = 64;

  std::string theorem;
  Nat bound;
  // false: the evaluation budget ran out and `bound` is a certified lower bound
  // of the true value (all functionals involved are nondecreasing).
  bool exact = true;
  Nat P;
  std::vector<Nat> iterates;  // first kStoredIterates values of the recursion
  bool iterates_truncated = false;
  std::uint64_t iterations_run = 0;
  std::optional<Nat> k0;
  std::optional<Nat> offset;  // K added after the recursion (Θ, Ω̃)
  std::vector<std::pair<std::string, Nat>> extras;

  json to_json() const;
};

class FunctionalNode {
 public:
  virtual ~FunctionalNode() = default;
  virtual Nat eval(const Nat& k, const Modulus& g, EvalContext& ctx) const = 0;
  virtual std::string describe() const = 0;
};

// A metastability functional (k, g) ↦ ℕ, given as a combinator term.
class Functional {
 public:
  explicit Functional(std::shared_ptr<const FunctionalNode> node) : node_(std::move(node)) {}

  static Functional constant(Nat c);
  // (k, g) ↦ g(c)
  static Functional apply_at(Nat c);
  // (k, g) ↦ f(k)
  static Functional of_k(Modulus f);

  Nat eval(const Nat& k, const Modulus& g, EvalContext& ctx) const { return node_->eval(k, g, ctx); }
  Nat operator()(const Nat& k, const Modulus& g) const;
  std::string describe() const { return node_->describe(); }

 private:
  std::shared_ptr<const FunctionalNode> node_;
};

// g*(n) = n + g^M(n)
Modulus g_star(const Modulus& g, const Nat& cap);
// g̃_l(m) = g*(max{l, m})
Modulus g_tilde(const Modulus& g, const Nat& l, const Nat& cap);
// h_{k,g,δ}(n) = g*(max{n, δ(k, g̃_n)})
Modulus h_functional(const Nat& k, const Modulus& g, const Functional& delta, const Nat& cap);
// g_l(n) = g^M(n+l) + l
Modulus g_shift(const Modulus& g, const Nat& l, const Nat& cap);

// χ_g(n,r) = χ(n,g(n),r) and its running max over n.
class ChiMajorant {
 public:
  ChiMajorant(FejerModulus chi, Modulus g, Nat r);
  Nat at(const Nat& n, EvalContext& ctx);

 private:
  FejerModulus chi_;
  Modulus g_;
  Nat r_;
  bool closed_form_;
  Nat scanned_to_ = 0;
  Nat running_max_ = 0;
  bool started_ = false;
};

// Iterates x_{j+1} = step(x_j) from x_0 = 0, P times. Stops early at a fixed
// point (exact) or when the budget or the value ceiling is hit (lower bound).
Certificate run_recursion(std::string theorem, const Nat& P, const std::function<Nat(const Nat&)>& step,
                          EvalContext& ctx);

Certificate psi(const RateInputs& in, EvalContext& ctx);
Certificate psi(const RateInputs& in);

Certificate psi_tilde(const RateInputs& in, EvalContext& ctx);
Certificate psi_tilde(const RateInputs& in);

Nat omega(const Nat& k, const Modulus& g, const Functional& psi_fn, const Functional& phi_plus, EvalContext& ctx);
Nat omega(const Nat& k, const Modulus& g, const Functional& psi_fn, const Functional& phi_plus);
Certificate omega_certificate(const Nat& k, const Modulus& g, const Functional& psi_fn, const Functional& phi_plus,
                              EvalContext& ctx);

Nat omega_tilde(const Nat& k, const Modulus& g, const Functional& psi_fn, const Modulus& phi_pp, EvalContext& ctx);
Nat omega_tilde(const Nat& k, const Modulus& g, const Functional& psi_fn, const Modulus& phi_pp);
Certificate omega_tilde_certificate(const Nat& k, const Modulus& g, const Functional& psi_fn, const Modulus& phi_pp,
                                    EvalContext& ctx);

// (k, g) ↦ Ψ(k, g, Φ, χ^M, α_G^M, β_H^M, γ^M) with Φ = phi_plus_at_zero (majorized).
Functional psi_plus(const RateInputs& in, const Modulus& phi_plus_at_zero, const Nat& cap);

Certificate psi_hat(const RateInputs& in, const LiminfBound& phi_hat, EvalContext& ctx);
Certificate psi_hat(const RateInputs& in, const LiminfBound& phi_hat);

}  // namespace fejercert
