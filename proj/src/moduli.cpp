#include "fejercert/moduli.hpp"

#include "fejercert/errors.hpp"

#include <cmath>

namespace fejercert {

FejerModulus::FejerModulus() = default;

FejerModulus FejerModulus::picard() { return {}; }

FejerModulus FejerModulus::ishikawa() {
  FejerModulus f;
  f.family_ = Family::Ishikawa;
  return f;
}

FejerModulus FejerModulus::spc(Nat ceil_b) {
  FejerModulus f;
  f.family_ = Family::Spc;
  f.a_ = std::move(ceil_b);
  return f;
}

FejerModulus FejerModulus::cond_e(Rational mu, Nat L) {
  if (mu < 1) throw RangeError("mu", "condition (E) requires mu >= 1");
  if (L < 1) throw RangeError("L", "must be >= 1");
  FejerModulus f;
  f.family_ = Family::CondE;
  f.mu_ = std::move(mu);
  f.a_ = std::move(L);
  return f;
}

FejerModulus FejerModulus::asymptotic_ne(unsigned K) {
  FejerModulus f;
  f.family_ = Family::AsymptoticNe;
  f.a_ = K;
  f.ceil_ek_ = ceil_exp(K);
  return f;
}

FejerModulus FejerModulus::ppa() {
  FejerModulus f;
  f.family_ = Family::Ppa;
  return f;
}

FejerModulus FejerModulus::sum() {
  FejerModulus f;
  f.family_ = Family::Sum;
  return f;
}

FejerModulus FejerModulus::constant(Nat c) {
  FejerModulus f;
  f.family_ = Family::Constant;
  f.a_ = std::move(c);
  return f;
}

FejerModulus FejerModulus::of_n(Modulus m) {
  FejerModulus f;
  f.family_ = Family::OfN;
  f.f_ = std::make_shared<const Modulus>(std::move(m));
  return f;
}

FejerModulus FejerModulus::floor_max(Nat c, const FejerModulus& inner) {
  FejerModulus f;
  f.family_ = Family::FloorMax;
  f.a_ = std::move(c);
  f.inner_ = std::make_shared<const FejerModulus>(inner);
  return f;
}

Nat FejerModulus::eval(const Nat& n, const Nat& m, const Nat& r, EvalContext& ctx) const {
  switch (family_) {
    case Family::Picard: return ctx.clamp(m * (r + 1));
    case Family::Ishikawa: return ctx.clamp(2 * m * (r + 1));
    case Family::Spc: return ctx.clamp(m * (2 * n + m + 5) * (r + 1) * a_);
    case Family::CondE: {
      Rational v = mu_ * Rational(a_ - 1, a_) * Rational(Nat(m * (r + 1)));
      return ctx.clamp(ceil_rational(v));
    }
    case Family::AsymptoticNe: return ctx.clamp(m * (n + m + a_) * ceil_ek_ * (r + 1));
    case Family::Ppa: return ctx.clamp(std::max(monus(n + m, 1), Nat(m * (r + 1))));
    case Family::Sum: return ctx.clamp(n + m);
    case Family::Constant: return ctx.clamp(a_);
    case Family::OfN: return f_->eval(n, ctx);
    case Family::FloorMax: return std::max(ctx.clamp(a_), inner_->eval(n, m, r, ctx));
  }
  return 0;
}

Nat FejerModulus::operator()(const Nat& n, const Nat& m, const Nat& r) const {
  EvalContext ctx;
  Nat v = eval(n, m, r, ctx);
  if (ctx.saturated()) throw CapExceeded("Fejér modulus value exceeds the evaluation ceiling");
  return v;
}

bool FejerModulus::monotone() const {
  switch (family_) {
    case Family::OfN: return f_->monotone();
    case Family::FloorMax: return inner_->monotone();
    default: return true;
  }
}

FejerModulus FejerModulus::majorant(const Nat& cap) const {
  if (monotone()) return *this;
  if (family_ == Family::OfN) return of_n(fejercert::majorant(*f_, cap));
  return floor_max(a_, inner_->majorant(cap));
}

namespace {

const char* family_name(FejerModulus::Family f) {
  using F = FejerModulus::Family;
  switch (f) {
    case F::Picard: return "picard";
    case F::Ishikawa: return "ishikawa";
    case F::Spc: return "spc";
    case F::CondE: return "cond_e";
    case F::AsymptoticNe: return "asymptotic_ne";
    case F::Ppa: return "ppa";
    case F::Sum: return "sum";
    case F::Constant: return "const";
    case F::OfN: return "of_n";
    case F::FloorMax: return "floor_max";
  }
  return "?";
}

const json& field(const json& j, const char* key, const std::string& pointer) {
  if (!j.contains(key)) throw ConfigError(pointer + "/" + key, "missing field");
  return j.at(key);
}

}  // namespace

json FejerModulus::to_json() const {
  json j = {{"kind", family_name(family_)}};
  switch (family_) {
    case Family::Spc: j["ceil_b"] = nat_to_json(a_); break;
    case Family::CondE:
      j["mu"] = rational_to_json(mu_);
      j["L"] = nat_to_json(a_);
      break;
    case Family::AsymptoticNe: j["K"] = nat_to_json(a_); break;
    case Family::Constant: j["c"] = nat_to_json(a_); break;
    case Family::OfN: j["f"] = f_->to_json(); break;
    case Family::FloorMax:
      j["c"] = nat_to_json(a_);
      j["inner"] = inner_->to_json();
      break;
    default: break;
  }
  return j;
}

FejerModulus FejerModulus::from_json(const json& j, const std::string& pointer) {
  if (!j.is_object()) throw ConfigError(pointer, "expected a Fejér modulus object");
  std::string kind = field(j, "kind", pointer).get<std::string>();
  if (kind == "picard") return picard();
  if (kind == "ishikawa") return ishikawa();
  if (kind == "spc") return spc(nat_from_json(field(j, "ceil_b", pointer), pointer + "/ceil_b"));
  if (kind == "cond_e") {
    return cond_e(rational_from_json(field(j, "mu", pointer), pointer + "/mu"),
                  nat_from_json(field(j, "L", pointer), pointer + "/L"));
  }
  if (kind == "asymptotic_ne") {
    Nat K = nat_from_json(field(j, "K", pointer), pointer + "/K");
    if (K > 700) throw ConfigError(pointer + "/K", "K too large");
    return asymptotic_ne(K.convert_to<unsigned>());
  }
  if (kind == "ppa") return ppa();
  if (kind == "sum") return sum();
  if (kind == "const") return constant(nat_from_json(field(j, "c", pointer), pointer + "/c"));
  if (kind == "of_n") return of_n(Modulus::from_json(field(j, "f", pointer), pointer + "/f"));
  if (kind == "floor_max") {
    return floor_max(nat_from_json(field(j, "c", pointer), pointer + "/c"),
                     from_json(field(j, "inner", pointer), pointer + "/inner"));
  }
  throw ConfigError(pointer + "/kind", "unknown Fejér modulus kind '" + kind + "'");
}

GHModuli GHModuli::identity() { return {}; }

GHModuli GHModuli::square() {
  GHModuli gh;
  gh.tag = Tag::Square;
  gh.alpha_G = Modulus::ceil_sqrt(Modulus::identity());
  // a² ≤ 1/((k+1)²) gives a ≤ 1/(k+1); k² alone does not (k=1, a=0.7).
  gh.beta_H = Modulus::polynomial({0, 2, 1});
  return gh;
}

GHModuli GHModuli::scaled(unsigned K) {
  GHModuli gh;
  gh.tag = Tag::Scaled;
  gh.K = K;
  gh.beta_H = Modulus::affine(ceil_exp(K), ceil_exp(K));
  return gh;
}

double GHModuli::G(double a) const { return tag == Tag::Square ? a * a : a; }

double GHModuli::H(double a) const {
  switch (tag) {
    case Tag::Identity: return a;
    case Tag::Square: return a * a;
    case Tag::Scaled: return a / std::exp(static_cast<double>(K));
  }
  return a;
}

json GHModuli::to_json() const {
  switch (tag) {
    case Tag::Identity: return {{"kind", "identity"}};
    case Tag::Square: return {{"kind", "square"}};
    case Tag::Scaled: return {{"kind", "scaled"}, {"K", K}};
  }
  return {};
}

GHModuli GHModuli::from_json(const json& j, const std::string& pointer) {
  std::string kind = j.is_string() ? j.get<std::string>() : field(j, "kind", pointer).get<std::string>();
  if (kind == "identity") return identity();
  if (kind == "square") return square();
  if (kind == "scaled") {
    Nat K = nat_from_json(field(j, "K", pointer), pointer + "/K");
    if (K > 700) throw ConfigError(pointer + "/K", "K too large");
    return scaled(K.convert_to<unsigned>());
  }
  throw ConfigError(pointer + "/kind", "unknown (G,H) pair '" + kind + "'");
}

json ClosednessModuli::to_json() const { return {{"delta_F", delta_F.to_json()}, {"omega_F", omega_F.to_json()}}; }

ClosednessModuli ClosednessModuli::from_json(const json& j, const std::string& pointer) {
  ClosednessModuli c;
  c.delta_F = Modulus::from_json(field(j, "delta_F", pointer), pointer + "/delta_F");
  c.omega_F = Modulus::from_json(field(j, "omega_F", pointer), pointer + "/omega_F");
  return c;
}

Nat LiminfBound::eval(const Nat& k, const Nat& n, EvalContext& ctx) const { return ctx.clamp(n + base.eval(k, ctx)); }

Nat LiminfBound::operator()(const Nat& k, const Nat& n) const {
  EvalContext ctx;
  return eval(k, n, ctx);
}

json LiminfBound::to_json() const { return {{"kind", "offset"}, {"base", base.to_json()}}; }

LiminfBound LiminfBound::from_json(const json& j, const std::string& pointer) {
  if (j.is_object() && j.value("kind", "") == "offset") {
    return {Modulus::from_json(field(j, "base", pointer), pointer + "/base")};
  }
  // A bare modulus is read as the base.
  return {Modulus::from_json(j, pointer)};
}

}  // namespace fejercert
