#include "fejercert/schemes.hpp"

#include "fejercert/errors.hpp"
#include "fejercert/total_boundedness.hpp"

#include <algorithm>

namespace fejercert {

namespace {

template <typename T>
const T& need(const std::optional<T>& v, const char* field, const char* scheme) {
  if (!v) throw RangeError(field, std::string("required by ") + scheme);
  return *v;
}

json optional_seq(const std::optional<SequenceSpec>& s) { return s ? s->to_json() : json(); }

// λ given either as a scalar or as a sequence.
std::optional<SequenceSpec> lambda_sequence(const SchemeParams& p) {
  if (p.lambda_seq) return p.lambda_seq;
  if (p.lambda) return SequenceSpec::constant(*p.lambda);
  return std::nullopt;
}

class CondEPhiPlusFunctional final : public FunctionalNode {
 public:
  explicit CondEPhiPlusFunctional(SchemeParams p) : p_(std::move(p)) {}
  Nat eval(const Nat& k, const Modulus& g, EvalContext& ctx) const override { return cond_e_phi_plus(k, g, p_, ctx); }
  std::string describe() const override { return "cond_e_phi_plus"; }

 private:
  SchemeParams p_;
};

class PpaPhiNode final : public ModulusNode {
 public:
  explicit PpaPhiNode(PpaModuli m) : m_(std::move(m)) {}
  Nat eval(const Nat& k, EvalContext& ctx) const override {
    Nat M1 = ctx.clamp(m_.M(k) + 1);
    Nat s = ctx.clamp(ceil_rational(m_.b() * m_.b() * Rational(Nat(M1 * M1))));
    return ctx.clamp(monus(m_.theta().eval(s, ctx) * s, 1));
  }
  bool monotone() const override { return m_.theta().monotone(); }
  json to_json() const override { return {{"kind", "derived"}, {"name", "ppa_phi"}}; }

 private:
  PpaModuli m_;
};

}  // namespace

json SchemeParams::to_json() const {
  json j = json::object();
  if (b) j["b"] = rational_to_json(*b);
  if (lambda) j["lambda"] = rational_to_json(*lambda);
  if (kappa) j["kappa"] = rational_to_json(*kappa);
  if (mu) j["mu"] = rational_to_json(*mu);
  if (L) j["L"] = nat_to_json(*L);
  if (N0) j["N0"] = nat_to_json(*N0);
  if (K) j["K"] = *K;
  if (theta) j["theta"] = theta->to_json();
  if (gamma_seq) j["gamma_seq"] = optional_seq(gamma_seq);
  if (lambda_seq) j["lambda_seq"] = optional_seq(lambda_seq);
  if (s_seq) j["s_seq"] = optional_seq(s_seq);
  if (eps_seq) j["eps_seq"] = optional_seq(eps_seq);
  j["eta"] = eta == Eta::Square ? "square" : "linear";
  return j;
}

SchemeParams SchemeParams::from_json(const json& j, const std::string& pointer) {
  SchemeParams p;
  if (j.is_null()) return p;
  if (!j.is_object()) throw ConfigError(pointer, "expected an object");
  static const char* known[] = {"b",     "lambda",    "kappa",      "mu",    "L",      "N0",     "K",
                                "theta", "gamma_seq", "lambda_seq", "s_seq", "eps_seq", "eta"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      throw ConfigError(pointer + "/" + key, "unknown parameter");
    }
  }
  auto at = [&](const char* key) { return pointer + "/" + key; };
  auto rational = [&](const char* key) -> std::optional<Rational> {
    if (!j.contains(key)) return std::nullopt;
    return rational_from_json(j.at(key), at(key));
  };
  auto seq = [&](const char* key) -> std::optional<SequenceSpec> {
    if (!j.contains(key)) return std::nullopt;
    return SequenceSpec::from_json(j.at(key), at(key));
  };
  p.b = rational("b");
  p.lambda = rational("lambda");
  p.kappa = rational("kappa");
  p.mu = rational("mu");
  if (j.contains("L")) p.L = nat_from_json(j.at("L"), at("L"));
  if (j.contains("N0")) p.N0 = nat_from_json(j.at("N0"), at("N0"));
  if (j.contains("K")) {
    Nat K = nat_from_json(j.at("K"), at("K"));
    if (K > 64) throw ConfigError(at("K"), "must be <= 64");
    p.K = K.convert_to<unsigned>();
  }
  if (j.contains("theta")) p.theta = Modulus::from_json(j.at("theta"), at("theta"));
  p.gamma_seq = seq("gamma_seq");
  p.lambda_seq = seq("lambda_seq");
  p.s_seq = seq("s_seq");
  p.eps_seq = seq("eps_seq");
  if (j.contains("eta")) {
    std::string e = j.at("eta").is_string() ? j.at("eta").get<std::string>() : "";
    if (e == "square") {
      p.eta = Eta::Square;
    } else if (e == "linear") {
      p.eta = Eta::Linear;
    } else {
      throw ConfigError(at("eta"), "expected \"square\" or \"linear\"");
    }
  }

  if (p.b && *p.b <= 0) throw ConfigError(at("b"), "must be positive");
  if (p.lambda && (*p.lambda <= 0 || *p.lambda >= 1)) throw ConfigError(at("lambda"), "must lie in (0,1)");
  if (p.kappa && (*p.kappa < 0 || *p.kappa >= 1)) throw ConfigError(at("kappa"), "must lie in [0,1)");
  if (p.mu && *p.mu < 1) throw ConfigError(at("mu"), "must be >= 1");
  if (p.L && *p.L < 1) throw ConfigError(at("L"), "must be >= 1");
  if (p.gamma_seq && !p.gamma_seq->all_in(0, Rational(Nat(1) << 64), true, false)) {
    throw ConfigError(at("gamma_seq"), "step sizes must be positive");
  }
  if (p.lambda_seq && !p.lambda_seq->all_in(0, 1, false, false)) {
    throw ConfigError(at("lambda_seq"), "must lie in [0,1]");
  }
  if (p.s_seq && !p.s_seq->all_in(0, 1, false, false)) throw ConfigError(at("s_seq"), "must lie in [0,1]");
  if (p.eps_seq && !p.eps_seq->all_in(0, Rational(Nat(1) << 64), false, false)) {
    throw ConfigError(at("eps_seq"), "errors must be nonnegative");
  }
  return p;
}

Certificate picard_ne_sigma(const Nat& k, const Modulus& g, const Modulus& phi, const Modulus& gamma,
                            EvalContext& ctx) {
  const Nat cap = ctx.limits().majorant_cap;
  Modulus gm = majorant(g, cap);
  Modulus f = majorant(phi, cap);
  Nat P = gamma.eval(ctx.clamp(4 * k + 3), ctx);
  Nat c = 4 * k + 4;
  return run_recursion("sigma", P, [&](const Nat& n) { return f.eval(ctx.clamp(c * gm.eval(n, ctx)), ctx); }, ctx);
}

Certificate picard_ne_sigma(const Nat& k, const Modulus& g, const Modulus& phi, const Modulus& gamma) {
  EvalContext ctx;
  return picard_ne_sigma(k, g, phi, gamma, ctx);
}

Certificate picard_ne_sigma_tilde(const Nat& k, const Modulus& g, const Modulus& phi, const Modulus& gamma,
                                  EvalContext& ctx) {
  const Nat cap = ctx.limits().majorant_cap;
  Modulus gm = majorant(g, cap);
  Modulus f = majorant(phi, cap);
  Nat P = gamma.eval(ctx.clamp(8 * k + 7), ctx);
  Nat floor = 2 * k + 1;
  Nat c = 8 * k + 8;
  Certificate cert = run_recursion(
      "sigma_tilde", P,
      [&](const Nat& n) { return f.eval(std::max(floor, ctx.clamp(c * gm.eval(n, ctx))), ctx); }, ctx);
  cert.k0 = 2 * k + 1;
  return cert;
}

Certificate picard_ne_sigma_tilde(const Nat& k, const Modulus& g, const Modulus& phi, const Modulus& gamma) {
  EvalContext ctx;
  return picard_ne_sigma_tilde(k, g, phi, gamma, ctx);
}

Certificate picard_ne_theta(const Nat& k, const Modulus& g, const Modulus& phi_pp, const Modulus& gamma,
                            EvalContext& ctx) {
  const Nat cap = ctx.limits().majorant_cap;
  Modulus gm = majorant(g, cap);
  Modulus f = majorant(phi_pp, cap);
  Modulus gam = majorant(gamma, cap);
  Nat K = f.eval(k, ctx);
  Nat P = gam.eval(ctx.clamp(4 * k + 3), ctx);
  Nat c = 4 * k + 4;
  Certificate cert = run_recursion(
      "theta", P,
      [&](const Nat& n) { return f.eval(ctx.clamp((gm.eval(ctx.clamp(n + K), ctx) + K) * c), ctx); }, ctx);
  cert.bound = ctx.clamp(cert.bound + K);
  cert.offset = K;
  cert.exact = !ctx.saturated();
  return cert;
}

Certificate picard_ne_theta(const Nat& k, const Modulus& g, const Modulus& phi_pp, const Modulus& gamma) {
  EvalContext ctx;
  return picard_ne_theta(k, g, phi_pp, gamma, ctx);
}

Nat fne_constant(const Rational& b, const Rational& lambda) {
  if (b <= 0) throw RangeError("b", "must be positive");
  if (lambda <= 0 || lambda >= 1) throw RangeError("lambda", "must lie in (0,1)");
  return ceil_rational(8 * (b + 1) * (b + 1) / (lambda * (1 - lambda)));
}

Modulus fne_rate(const Rational& b, const Rational& lambda) {
  Nat c = fne_constant(b, lambda);
  return Modulus::polynomial({c, 2 * c, c});
}

Certificate theta_fne(const Nat& k, const Modulus& g, const Modulus& gamma, const Rational& b, const Rational& lambda,
                      EvalContext& ctx) {
  const Nat cap = ctx.limits().majorant_cap;
  Nat c = fne_constant(b, lambda);
  Modulus gm = majorant(g, cap);
  Modulus gam = majorant(gamma, cap);
  Nat K = ctx.clamp(c * (k + 1) * (k + 1));
  Nat P = gam.eval(ctx.clamp(4 * k + 3), ctx);
  Nat w = 4 * k + 4;
  // Φ⁺⁺ evaluated at X = (g^M(n+K)+K)(4k+4) is c(X+1)².
  Certificate cert = run_recursion(
      "theta_fne", P,
      [&](const Nat& n) {
        Nat X = ctx.clamp((gm.eval(ctx.clamp(n + K), ctx) + K) * w);
        if (ctx.at_ceiling(X)) return X;
        return ctx.clamp(c * (X + 1) * (X + 1));
      },
      ctx);
  cert.bound = ctx.clamp(cert.bound + K);
  cert.offset = K;
  cert.extras.emplace_back("c", c);
  cert.exact = !ctx.saturated();
  return cert;
}

Certificate theta_fne(const Nat& k, const Modulus& g, const Modulus& gamma, const Rational& b, const Rational& lambda) {
  EvalContext ctx;
  return theta_fne(k, g, gamma, b, lambda, ctx);
}

Modulus constant_lambda_divergence(const Rational& lambda) {
  if (lambda <= 0 || lambda >= 1) throw RangeError("lambda", "must lie in (0,1)");
  return Modulus::affine(ceil_rational(1 / (lambda * (1 - lambda))), 0);
}

Modulus ishikawa_phi(const Rational& b, const Modulus& theta, const Nat& L, const Nat& N0) {
  if (b <= 0) throw RangeError("b", "must be positive");
  if (L < 1) throw RangeError("L", "must be >= 1");
  Nat c = 4 * L * L * ceil_rational(b * (b + 1));
  return Modulus::compose(theta, Modulus::polynomial({c + N0, 2 * c, c}));
}

Nat ishikawa_apfp_bound(const Nat& k, const Rational& b, const Modulus& theta, const Nat& L, const Nat& N0) {
  return ishikawa_phi(b, theta, L, N0)(k);
}

Modulus ishikawa_phi(const SchemeParams& p) {
  const Rational& b = need(p.b, "b", "ishikawa");
  auto lam = lambda_sequence(p);
  if (lam && !lam->all_in(0, 1, false, false)) throw RangeError("lambda_seq", "must lie in [0,1]");
  Modulus theta;
  if (p.theta) {
    theta = *p.theta;
  } else if (lam && lam->is_constant()) {
    theta = constant_lambda_divergence(lam->constant_value());
  } else {
    throw RangeError("theta", "a rate of divergence is required unless lambda is constant");
  }
  if (!theta.monotone()) throw RangeError("theta", "rate of divergence must be nondecreasing");
  Nat N0 = p.N0.value_or(0);
  Nat L;
  if (p.L) {
    L = *p.L;
  } else if (p.s_seq && p.s_seq->is_constant() && p.s_seq->constant_value() < 1) {
    L = ceil_rational(1 / (1 - p.s_seq->constant_value()));
  } else if (!p.s_seq) {
    L = 1;  // s ≡ 0, the Mann case
  } else {
    throw RangeError("L", "required unless s is constant below 1");
  }
  if (L < 1) L = 1;
  if (p.s_seq) {
    Rational top = 1 - Rational(Nat(1), L);
    if (!p.s_seq->all_in_from(to_u64_saturating(N0), 0, top, false, false)) {
      throw RangeError("s_seq", "must satisfy s_n <= 1 - 1/L for n >= N0");
    }
  }
  return ishikawa_phi(b, theta, L, N0);
}

SpcModuli spc_moduli(const SchemeParams& p) {
  const Rational& b = need(p.b, "b", "mann_spc");
  const Rational& kappa = need(p.kappa, "kappa", "mann_spc");
  auto lam = lambda_sequence(p);
  if (!lam) throw RangeError("lambda", "required by mann_spc");
  if (!lam->all_in(kappa, 1, true, true)) throw RangeError("lambda", "must lie in (kappa,1)");
  SpcModuli m;
  m.chi = FejerModulus::spc(ceil_rational(b));
  m.gh = GHModuli::square();
  Rational Lip = (1 + kappa) / (1 - kappa);
  m.closed = uniform_closedness_from_continuity(Modulus::affine(ceil_rational(Lip), ceil_rational(Lip)));
  if (lam->is_constant() && !p.theta) {
    const Rational& l = lam->constant_value();
    Nat c = ceil_rational(b * b / ((l - kappa) * (1 - l)));
    m.phi_pp = Modulus::polynomial({c, 2 * c, c});
  } else if (p.theta) {
    Nat c = ceil_rational(b * b);
    m.phi_pp = Modulus::compose(*p.theta, Modulus::polynomial({c, 2 * c, c}));
  } else {
    throw RangeError("theta", "a rate of divergence is required unless lambda is constant");
  }
  return m;
}

Rational cond_e_theta(const Nat& k, const Nat& L, const Rational& b, Eta eta) {
  Nat k1 = k + 1;
  Rational b1 = b + 1;
  if (eta == Eta::Linear) return 1 / (Rational(Nat(128 * k1 * k1 * L * L)) * b1);
  return 1 / (Rational(Nat(512 * k1 * k1 * k1 * L * L)) * b1 * b1);
}

Modulus cond_e_M(const Nat& L, const Rational& b, Eta eta) {
  if (b <= 0) throw RangeError("b", "must be positive");
  if (L < 2) throw RangeError("L", "must be >= 2");
  Rational b1 = b + 1;
  // 3(b+1)/θ(k) = 384(k+1)²L²(b+1)² or 1536(k+1)³L²(b+1)³
  if (eta == Eta::Linear) return Modulus::ceil_scaled_power(Rational(Nat(384 * L * L)) * b1 * b1, 2);
  return Modulus::ceil_scaled_power(Rational(Nat(1536 * L * L)) * b1 * b1 * b1, 3);
}

Nat cond_e_phi_plus(const Nat& k, const Modulus& g, const SchemeParams& p, EvalContext& ctx) {
  Modulus M = cond_e_M(need(p.L, "L", "cond_e"), need(p.b, "b", "cond_e"), p.eta);
  Modulus gm = majorant(g, ctx.limits().majorant_cap);
  Nat steps = M.eval(k, ctx);
  Nat n = 0;
  for (Nat s = 0; s < steps; ++s) {
    if (!ctx.step()) break;
    n = ctx.clamp(gm.eval(n, ctx) + n + 1);
    if (ctx.at_ceiling(n)) break;
  }
  return n;
}

Nat cond_e_phi_plus(const Nat& k, const Modulus& g, const SchemeParams& p) {
  EvalContext ctx;
  Nat v = cond_e_phi_plus(k, g, p, ctx);
  if (ctx.saturated()) throw CapExceeded("cond_e_phi_plus exceeds the evaluation budget");
  return v;
}

Functional cond_e_phi_plus_functional(const SchemeParams& p) {
  return Functional(std::make_shared<CondEPhiPlusFunctional>(p));
}

CondEModuli cond_e_moduli(const SchemeParams& p) {
  const Rational& mu = need(p.mu, "mu", "cond_e");
  const Nat& L = need(p.L, "L", "cond_e");
  const Rational& b = need(p.b, "b", "cond_e");
  if (L < 2) throw RangeError("L", "must be >= 2");
  Rational lo(Nat(1), L);
  auto lam = lambda_sequence(p);
  if (!lam) throw RangeError("lambda", "required by cond_e");
  if (!lam->all_in(lo, 1 - lo, false, false)) throw RangeError("lambda", "must lie in [1/L, 1-1/L]");
  CondEModuli m;
  m.chi = FejerModulus::cond_e(mu, L);
  m.closed.delta_F = Modulus::monus(Modulus::ceil_scale(2 * mu, Modulus::affine(1, 1)), 1);
  m.closed.omega_F = Modulus::affine(4, 3);
  m.phi = cond_e_M(L, b, p.eta);
  return m;
}

AsymptoticNeModuli asymptotically_ne_moduli(const SchemeParams& p) {
  unsigned K = need(p.K, "K", "mann_asymptotic");
  auto lam = lambda_sequence(p);
  if (lam && p.L) {
    Rational lo(Nat(1), *p.L);
    if (!lam->all_in(lo, 1 - lo, false, false)) throw RangeError("lambda", "must lie in [1/L, 1-1/L]");
  }
  AsymptoticNeModuli m;
  m.chi = FejerModulus::asymptotic_ne(K);
  m.gh = GHModuli::scaled(K);
  Nat w = 4 * (Nat(1) + K);
  m.closed.delta_F = Modulus::affine(2, 1);
  m.closed.omega_F = Modulus::affine(w, w);
  return m;
}

PpaModuli::PpaModuli(Rational b, Modulus theta, SequenceSpec gamma_seq)
    : b_(std::move(b)), theta_(std::move(theta)), gamma_seq_(std::move(gamma_seq)) {
  if (b_ <= 0) throw RangeError("b", "must be positive");
  if (!gamma_seq_.all_in(0, Rational(Nat(1) << 64), true, false)) {
    throw RangeError("gamma_seq", "step sizes must be positive");
  }
}

Nat PpaModuli::delta(const Nat& k, const Nat& L) const {
  return monus(ceil_rational(b_ * b_ * Rational(Nat((k + 1) * (k + 1)))) + L, 1);
}

Nat PpaModuli::beta(const Nat& k) const { return theta_(ceil_rational(b_ * b_ * Rational(Nat((k + 1) * (k + 1))))); }

Nat PpaModuli::M(const Nat& k) const { return monus(ceil_rational(Rational(Nat(k + 1)) * (2 + m(k))), 1); }

Nat PpaModuli::phi(const Nat& k) const { return phi_modulus()(k); }

Modulus PpaModuli::phi_modulus() const { return Modulus(std::make_shared<PpaPhiNode>(*this)); }

Modulus constant_gamma_divergence(const Rational& gamma) {
  if (gamma <= 0) throw RangeError("gamma", "must be positive");
  return Modulus::ceil_scale(1 / (gamma * gamma), Modulus::identity());
}

PpaModuli ppa_moduli(const SchemeParams& p) {
  const Rational& b = need(p.b, "b", "ppa");
  const SequenceSpec& gs = need(p.gamma_seq, "gamma_seq", "ppa");
  Modulus theta;
  if (p.theta) {
    theta = *p.theta;
  } else if (gs.is_constant()) {
    theta = constant_gamma_divergence(gs.constant_value());
  } else {
    throw RangeError("theta", "a rate of divergence for the squared step sizes is required");
  }
  return PpaModuli(b, theta, gs);
}

}  // namespace fejercert
