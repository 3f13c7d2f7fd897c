#pragma once

#include "fejercert/eval_context.hpp"
#include "fejercert/nat.hpp"

#include <json.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fejercert {

using json = nlohmann::json;

class ModulusNode {
 public:
  virtual ~ModulusNode() = default;
  virtual Nat eval(const Nat& n, EvalContext& ctx) const = 0;
  virtual bool monotone() const = 0;
  virtual json to_json() const = 0;
};

// A total function ℕ→ℕ given as a closed-form expression tree.
//
// Evaluation at astronomically large arguments is exact up to the context's
// bit ceiling; beyond it values saturate (see EvalContext).
class Modulus {
 public:
  Modulus();  // constant 0
  explicit Modulus(std::shared_ptr<const ModulusNode> node);

  static Modulus constant(Nat c);
  static Modulus identity();
  static Modulus affine(Nat a, Nat b);
  static Modulus polynomial(std::vector<Nat> coeffs);
  // ⌈c·(n+1)^p⌉
  static Modulus ceil_scaled_power(Rational c, std::uint64_t p);
  // values[n] for n < size, tail(n) afterwards; no tail means out-of-range is a DomainError.
  static Modulus table(std::vector<Nat> values, std::optional<Modulus> tail = std::nullopt);
  static Modulus compose(const Modulus& outer, const Modulus& inner);
  static Modulus max_of(std::vector<Modulus> args);
  static Modulus sum_of(std::vector<Modulus> args);
  static Modulus product_of(std::vector<Modulus> args);
  static Modulus monus(const Modulus& m, Nat c);
  // ⌈q·m(n)⌉
  static Modulus ceil_scale(Rational q, const Modulus& m);
  // ⌈√m(n)⌉
  static Modulus ceil_sqrt(const Modulus& m);
  // ⌈√q·m(n)⌉
  static Modulus ceil_sqrt_scale(Rational q, const Modulus& m);
  static Modulus ceil_log2(const Modulus& m);
  static Modulus power(const Modulus& m, std::uint64_t p);
  // m(n+c)
  static Modulus shift(const Modulus& m, Nat c);

  Nat eval(const Nat& n, EvalContext& ctx) const;
  // Evaluates under default limits; throws CapExceeded if the result saturated.
  Nat operator()(const Nat& n) const;

  bool monotone() const { return monotone_; }
  // Withdraw the monotonicity certificate (never grants one).
  Modulus without_monotone_claim() const;

  json to_json() const;
  static Modulus from_json(const json& j, const std::string& pointer = "");

  const ModulusNode& node() const { return *node_; }
  const std::shared_ptr<const ModulusNode>& node_ptr() const { return node_; }

 private:
  std::shared_ptr<const ModulusNode> node_;
  bool monotone_ = true;
};

// f^M(n) = max_{i≤n} f(i). Monotone input is returned unchanged; otherwise a
// memoized running max valid on [0, cap].
Modulus majorant(const Modulus& m, const Nat& cap);

// JSON helpers shared with the other value types.
Nat nat_from_json(const json& j, const std::string& pointer);
json nat_to_json(const Nat& n);
Rational rational_from_json(const json& j, const std::string& pointer);
json rational_to_json(const Rational& q);

}  // namespace fejercert
