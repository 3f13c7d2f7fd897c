#include "fejercert/rates.hpp"

#include "fejercert/errors.hpp"

#include <algorithm>

namespace fejercert {

json Certificate::to_json() const {
  json it = json::array();
  for (const auto& v : iterates) it.push_back(nat_to_json(v));
  json j = {{"theorem", theorem},
            {"bound", nat_to_json(bound)},
            {"exact", exact},
            {"P", nat_to_json(P)},
            {"iterates", it},
            {"iterates_truncated", iterates_truncated},
            {"iterations_run", iterations_run}};
  if (k0) j["k0"] = nat_to_json(*k0);
  if (offset) j["K"] = nat_to_json(*offset);
  for (const auto& [name, value] : extras) j[name] = nat_to_json(value);
  return j;
}

namespace {

class ConstantFunctional final : public FunctionalNode {
 public:
  explicit ConstantFunctional(Nat c) : c_(std::move(c)) {}
  Nat eval(const Nat&, const Modulus&, EvalContext& ctx) const override { return ctx.clamp(c_); }
  std::string describe() const override { return "const " + to_decimal(c_); }

 private:
  Nat c_;
};

class ApplyAtFunctional final : public FunctionalNode {
 public:
  explicit ApplyAtFunctional(Nat c) : c_(std::move(c)) {}
  Nat eval(const Nat&, const Modulus& g, EvalContext& ctx) const override { return g.eval(c_, ctx); }
  std::string describe() const override { return "g(" + to_decimal(c_) + ")"; }

 private:
  Nat c_;
};

class OfKFunctional final : public FunctionalNode {
 public:
  explicit OfKFunctional(Modulus f) : f_(std::move(f)) {}
  Nat eval(const Nat& k, const Modulus&, EvalContext& ctx) const override { return f_.eval(k, ctx); }
  std::string describe() const override { return "f(k)"; }

 private:
  Modulus f_;
};

class PsiPlusFunctional final : public FunctionalNode {
 public:
  explicit PsiPlusFunctional(RateInputs tmpl) : tmpl_(std::move(tmpl)) {}
  Nat eval(const Nat& k, const Modulus& g, EvalContext& ctx) const override {
    RateInputs in = tmpl_;
    in.k = k;
    in.g = g;
    return psi(in, ctx).bound;
  }
  std::string describe() const override { return "psi_plus"; }

 private:
  RateInputs tmpl_;
};

class GStarNode final : public ModulusNode {
 public:
  explicit GStarNode(Modulus gm) : gm_(std::move(gm)) {}
  Nat eval(const Nat& n, EvalContext& ctx) const override { return ctx.clamp(n + gm_.eval(n, ctx)); }
  bool monotone() const override { return true; }
  json to_json() const override { return {{"kind", "derived"}, {"name", "g_star"}}; }

 private:
  Modulus gm_;
};

class GTildeNode final : public ModulusNode {
 public:
  GTildeNode(Modulus gstar, Nat l) : gstar_(std::move(gstar)), l_(std::move(l)) {}
  Nat eval(const Nat& m, EvalContext& ctx) const override { return gstar_.eval(std::max(l_, m), ctx); }
  bool monotone() const override { return true; }
  json to_json() const override { return {{"kind", "derived"}, {"name", "g_tilde"}, {"l", nat_to_json(l_)}}; }

 private:
  Modulus gstar_;
  Nat l_;
};

class HNode final : public ModulusNode {
 public:
  HNode(Nat k, Modulus gstar, Functional delta) : k_(std::move(k)), gstar_(std::move(gstar)), delta_(std::move(delta)) {}
  Nat eval(const Nat& n, EvalContext& ctx) const override {
    Modulus gt(std::make_shared<GTildeNode>(gstar_, n));
    Nat d = delta_.eval(k_, gt, ctx);
    return gstar_.eval(std::max(n, d), ctx);
  }
  bool monotone() const override { return true; }
  json to_json() const override { return {{"kind", "derived"}, {"name", "h"}, {"k", nat_to_json(k_)}}; }

 private:
  Nat k_;
  Modulus gstar_;
  Functional delta_;
};

class GShiftNode final : public ModulusNode {
 public:
  GShiftNode(Modulus gm, Nat l) : gm_(std::move(gm)), l_(std::move(l)) {}
  Nat eval(const Nat& n, EvalContext& ctx) const override {
    return ctx.clamp(gm_.eval(ctx.clamp(n + l_), ctx) + l_);
  }
  bool monotone() const override { return true; }
  json to_json() const override { return {{"kind", "derived"}, {"name", "g_shift"}, {"l", nat_to_json(l_)}}; }

 private:
  Modulus gm_;
  Nat l_;
};

}  // namespace

Functional Functional::constant(Nat c) { return Functional(std::make_shared<ConstantFunctional>(std::move(c))); }
Functional Functional::apply_at(Nat c) { return Functional(std::make_shared<ApplyAtFunctional>(std::move(c))); }
Functional Functional::of_k(Modulus f) { return Functional(std::make_shared<OfKFunctional>(std::move(f))); }

Nat Functional::operator()(const Nat& k, const Modulus& g) const {
  EvalContext ctx;
  Nat v = eval(k, g, ctx);
  if (ctx.saturated()) throw CapExceeded("functional value exceeds the evaluation budget");
  return v;
}

Modulus g_star(const Modulus& g, const Nat& cap) { return Modulus(std::make_shared<GStarNode>(majorant(g, cap))); }

Modulus g_tilde(const Modulus& g, const Nat& l, const Nat& cap) {
  return Modulus(std::make_shared<GTildeNode>(g_star(g, cap), l));
}

Modulus h_functional(const Nat& k, const Modulus& g, const Functional& delta, const Nat& cap) {
  return Modulus(std::make_shared<HNode>(k, g_star(g, cap), delta));
}

Modulus g_shift(const Modulus& g, const Nat& l, const Nat& cap) {
  return Modulus(std::make_shared<GShiftNode>(majorant(g, cap), l));
}

ChiMajorant::ChiMajorant(FejerModulus chi, Modulus g, Nat r)
    : chi_(std::move(chi)), g_(std::move(g)), r_(std::move(r)) {
  closed_form_ = chi_.monotone() && g_.monotone();
}

Nat ChiMajorant::at(const Nat& n, EvalContext& ctx) {
  if (closed_form_) return chi_.eval(n, g_.eval(n, ctx), r_, ctx);
  if (n > ctx.limits().majorant_cap) {
    throw CapExceeded("cap exceeded during the running max of chi_g at n=" + approx_string(n) +
                      " (non-monotone g or chi, cap " + std::to_string(ctx.limits().majorant_cap) + ")");
  }
  if (started_ && n < scanned_to_) {
    // Iterates are nondecreasing, so this only happens on a fresh query.
    Nat best = 0;
    for (Nat i = 0; i <= n; ++i) best = std::max(best, chi_.eval(i, g_.eval(i, ctx), r_, ctx));
    return best;
  }
  Nat i = started_ ? Nat(scanned_to_ + 1) : Nat(0);
  for (; i <= n; ++i) {
    ctx.step();
    running_max_ = std::max(running_max_, chi_.eval(i, g_.eval(i, ctx), r_, ctx));
  }
  scanned_to_ = n;
  started_ = true;
  return running_max_;
}

Certificate run_recursion(std::string theorem, const Nat& P, const std::function<Nat(const Nat&)>& step,
                          EvalContext& ctx) {
  Certificate c;
  c.theorem = std::move(theorem);
  c.P = P;
  Nat cur = 0;
  c.iterates.push_back(cur);
  for (Nat j = 0; j < P; ++j) {
    if (!ctx.step()) break;
    Nat next = step(cur);
    ++c.iterations_run;
    bool fixed = next == cur;
    cur = std::move(next);
    if (c.iterates.size() < Certificate::kStoredIterates) {
      c.iterates.push_back(cur);
    } else {
      c.iterates_truncated = true;
    }
    // The step is a function of the current value only, so a repeat is final.
    if (fixed || ctx.at_ceiling(cur)) break;
  }
  if (Nat(c.iterates.size()) < P + 1 && !c.iterates_truncated) {
    c.iterates_truncated = c.iterates.back() != cur;
  }
  c.bound = cur;
  c.exact = !ctx.saturated();
  return c;
}

Certificate psi(const RateInputs& in, EvalContext& ctx) {
  const Nat cap = ctx.limits().majorant_cap;
  Nat r = ctx.clamp(2 * in.gh.beta_H.eval(ctx.clamp(2 * in.k + 1), ctx) + 1);
  Nat P = in.gamma.eval(in.gh.alpha_G.eval(r, ctx), ctx);
  Modulus phi = majorant(in.phi, cap);
  ChiMajorant cm(in.chi, in.g, r);
  Certificate c = run_recursion("psi", P, [&](const Nat& n) { return phi.eval(cm.at(n, ctx), ctx); }, ctx);
  c.extras.emplace_back("r", r);
  return c;
}

Certificate psi(const RateInputs& in) {
  EvalContext ctx;
  return psi(in, ctx);
}

Certificate psi_tilde(const RateInputs& in, EvalContext& ctx) {
  if (!in.closed) throw ConfigError("/closed", "psi_tilde needs closedness moduli (delta_F, omega_F)");
  Nat w = in.closed->omega_F.eval(in.k, ctx);
  Nat k0 = std::max(in.k, ceil_div(monus(w, 1), 2));
  RateInputs inner = in;
  inner.k = k0;
  inner.chi = FejerModulus::floor_max(in.closed->delta_F.eval(in.k, ctx), in.chi);
  Certificate c = psi(inner, ctx);
  c.theorem = "psi_tilde";
  c.k0 = k0;
  return c;
}

Certificate psi_tilde(const RateInputs& in) {
  EvalContext ctx;
  return psi_tilde(in, ctx);
}

Certificate omega_certificate(const Nat& k, const Modulus& g, const Functional& psi_fn, const Functional& phi_plus,
                              EvalContext& ctx) {
  const Nat cap = ctx.limits().majorant_cap;
  Modulus h = h_functional(k, g, phi_plus, cap);
  Nat delta_term = psi_fn.eval(k, h, ctx);
  Nat theta_term = phi_plus.eval(k, g_tilde(g, delta_term, cap), ctx);
  Certificate c;
  c.theorem = "omega";
  c.bound = std::max(delta_term, theta_term);
  c.extras.emplace_back("delta_term", delta_term);
  c.extras.emplace_back("theta_term", theta_term);
  c.exact = !ctx.saturated();
  return c;
}

Nat omega(const Nat& k, const Modulus& g, const Functional& psi_fn, const Functional& phi_plus, EvalContext& ctx) {
  return omega_certificate(k, g, psi_fn, phi_plus, ctx).bound;
}

Nat omega(const Nat& k, const Modulus& g, const Functional& psi_fn, const Functional& phi_plus) {
  EvalContext ctx;
  Nat v = omega(k, g, psi_fn, phi_plus, ctx);
  if (ctx.saturated()) throw CapExceeded("omega exceeds the evaluation budget");
  return v;
}

Certificate omega_tilde_certificate(const Nat& k, const Modulus& g, const Functional& psi_fn, const Modulus& phi_pp,
                                    EvalContext& ctx) {
  const Nat cap = ctx.limits().majorant_cap;
  Modulus f = majorant(phi_pp, cap);
  Nat K = f.eval(k, ctx);
  Nat delta_term = psi_fn.eval(k, g_shift(g, K, cap), ctx);
  Certificate c;
  c.theorem = "omega_tilde";
  c.bound = ctx.clamp(delta_term + K);
  c.offset = K;
  c.extras.emplace_back("delta_term", delta_term);
  c.exact = !ctx.saturated();
  return c;
}

Nat omega_tilde(const Nat& k, const Modulus& g, const Functional& psi_fn, const Modulus& phi_pp, EvalContext& ctx) {
  return omega_tilde_certificate(k, g, psi_fn, phi_pp, ctx).bound;
}

Nat omega_tilde(const Nat& k, const Modulus& g, const Functional& psi_fn, const Modulus& phi_pp) {
  EvalContext ctx;
  Nat v = omega_tilde(k, g, psi_fn, phi_pp, ctx);
  if (ctx.saturated()) throw CapExceeded("omega_tilde exceeds the evaluation budget");
  return v;
}

Functional psi_plus(const RateInputs& in, const Modulus& phi_plus_at_zero, const Nat& cap) {
  RateInputs t = in;
  t.phi = majorant(phi_plus_at_zero, cap);
  t.chi = in.chi.majorant(cap);
  t.gh.alpha_G = majorant(in.gh.alpha_G, cap);
  t.gh.beta_H = majorant(in.gh.beta_H, cap);
  t.gamma = majorant(in.gamma, cap);
  return Functional(std::make_shared<PsiPlusFunctional>(std::move(t)));
}

Certificate psi_hat(const RateInputs& in, const LiminfBound& phi_hat, EvalContext& ctx) {
  if (!in.xi) throw ConfigError("/xi", "psi_hat needs a Cauchy modulus xi of the error sum");
  const Nat cap = ctx.limits().majorant_cap;
  Nat r = ctx.clamp(4 * in.gh.beta_H.eval(ctx.clamp(2 * in.k + 1), ctx) + 3);
  Nat P = ctx.clamp(in.gamma.eval(in.gh.alpha_G.eval(r, ctx), ctx) + 1);
  Nat xi_r = in.xi->eval(r, ctx);
  LiminfBound bound{majorant(phi_hat.base, cap)};
  ChiMajorant cm(in.chi, in.g, r);
  Certificate c =
      run_recursion("psi_hat", P, [&](const Nat& n) { return bound.eval(cm.at(n, ctx), xi_r, ctx); }, ctx);
  c.extras.emplace_back("r", r);
  c.extras.emplace_back("xi_r", xi_r);
  return c;
}

Certificate psi_hat(const RateInputs& in, const LiminfBound& phi_hat) {
  EvalContext ctx;
  return psi_hat(in, phi_hat, ctx);
}

}  // namespace fejercert
