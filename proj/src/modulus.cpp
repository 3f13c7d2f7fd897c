#include "fejercert/modulus.hpp"

#include "fejercert/errors.hpp"
#include "fejercert/total_boundedness.hpp"

#include <algorithm>
#include <charconv>
#include <mutex>
#include <utility>

namespace fejercert {

namespace {

std::size_t bit_width(const Nat& v) { return v == 0 ? 0 : boost::multiprecision::msb(v) + 1; }

class ConstantNode final : public ModulusNode {
 public:
  explicit ConstantNode(Nat c) : c_(std::move(c)) {}
  Nat eval(const Nat&, EvalContext& ctx) const override { return ctx.clamp(c_); }
  bool monotone() const override { return true; }
  json to_json() const override { return {{"kind", "const"}, {"c", nat_to_json(c_)}}; }

 private:
  Nat c_;
};

class AffineNode final : public ModulusNode {
 public:
  AffineNode(Nat a, Nat b) : a_(std::move(a)), b_(std::move(b)) {}
  Nat eval(const Nat& n, EvalContext& ctx) const override { return ctx.clamp(a_ * n + b_); }
  bool monotone() const override { return true; }
  json to_json() const override {
    if (a_ == 1 && b_ == 0) return {{"kind", "identity"}};
    return {{"kind", "affine"}, {"a", nat_to_json(a_)}, {"b", nat_to_json(b_)}};
  }

 private:
  Nat a_, b_;
};

class PolynomialNode final : public ModulusNode {
 public:
  explicit PolynomialNode(std::vector<Nat> coeffs) : coeffs_(std::move(coeffs)) {}
  Nat eval(const Nat& n, EvalContext& ctx) const override {
    Nat acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
      acc = ctx.clamp(acc * n + *it);
      if (ctx.at_ceiling(acc)) return acc;
    }
    return acc;
  }
  bool monotone() const override { return true; }
  json to_json() const override {
    json c = json::array();
    for (const auto& v : coeffs_) c.push_back(nat_to_json(v));
    return {{"kind", "poly"}, {"coeffs", c}};
  }

 private:
  std::vector<Nat> coeffs_;
};

Nat saturating_pow(const Nat& x, std::uint64_t p, EvalContext& ctx) {
  if (x <= 1 || p == 0) return p == 0 ? Nat(1) : x;
  // x >= 2^(w-1), so x^p >= 2^((w-1)p).
  if ((bit_width(x) - 1) * p >= ctx.limits().max_bits) return ctx.clamp(ctx.ceiling());
  return ctx.clamp(pow_nat(x, p));
}

class CeilScaledPowerNode final : public ModulusNode {
 public:
  CeilScaledPowerNode(Rational c, std::uint64_t p) : c_(std::move(c)), p_(p) {}
  Nat eval(const Nat& n, EvalContext& ctx) const override {
    Nat base = saturating_pow(Nat(n + 1), p_, ctx);
    if (ctx.at_ceiling(base)) return base;
    return ctx.clamp(ceil_rational(c_ * Rational(base)));
  }
  bool monotone() const override { return c_ >= 0; }
  json to_json() const override {
    return {{"kind", "ceil_pow"}, {"c", rational_to_json(c_)}, {"p", p_}};
  }

 private:
  Rational c_;
  std::uint64_t p_;
};

class TableNode final : public ModulusNode {
 public:
  TableNode(std::vector<Nat> values, std::optional<Modulus> tail)
      : values_(std::move(values)), tail_(std::move(tail)) {}
  Nat eval(const Nat& n, EvalContext& ctx) const override {
    if (n < values_.size()) return ctx.clamp(values_[n.convert_to<std::size_t>()]);
    if (!tail_) {
      throw DomainError("table modulus evaluated at " + to_decimal(n) + " beyond its length " +
                        std::to_string(values_.size()) + " and no tail declared");
    }
    return tail_->eval(n, ctx);
  }
  bool monotone() const override {
    if (!std::is_sorted(values_.begin(), values_.end())) return false;
    if (!tail_) return true;
    if (!tail_->monotone()) return false;
    if (values_.empty()) return true;
    EvalContext ctx;
    return tail_->eval(values_.size(), ctx) >= values_.back();
  }
  json to_json() const override {
    json v = json::array();
    for (const auto& x : values_) v.push_back(nat_to_json(x));
    json j = {{"kind", "table"}, {"values", v}};
    if (tail_) j["tail"] = tail_->to_json();
    return j;
  }

 private:
  std::vector<Nat> values_;
  std::optional<Modulus> tail_;
};

class ComposeNode final : public ModulusNode {
 public:
  ComposeNode(Modulus outer, Modulus inner) : outer_(std::move(outer)), inner_(std::move(inner)) {}
  Nat eval(const Nat& n, EvalContext& ctx) const override { return outer_.eval(inner_.eval(n, ctx), ctx); }
  bool monotone() const override { return outer_.monotone() && inner_.monotone(); }
  json to_json() const override {
    return {{"kind", "compose"}, {"outer", outer_.to_json()}, {"inner", inner_.to_json()}};
  }

 private:
  Modulus outer_, inner_;
};

class FoldNode final : public ModulusNode {
 public:
  enum class Op { Max, Sum, Product };
  FoldNode(Op op, std::vector<Modulus> args) : op_(op), args_(std::move(args)) {}
  Nat eval(const Nat& n, EvalContext& ctx) const override {
    Nat acc = op_ == Op::Product ? 1 : 0;
    for (const auto& a : args_) {
      Nat v = a.eval(n, ctx);
      switch (op_) {
        case Op::Max: acc = std::max(acc, v); break;
        case Op::Sum: acc = ctx.clamp(acc + v); break;
        case Op::Product: acc = ctx.clamp(acc * v); break;
      }
    }
    return acc;
  }
  bool monotone() const override {
    return std::all_of(args_.begin(), args_.end(), [](const Modulus& m) { return m.monotone(); });
  }
  json to_json() const override {
    json a = json::array();
    for (const auto& m : args_) a.push_back(m.to_json());
    const char* kind = op_ == Op::Max ? "max" : op_ == Op::Sum ? "sum" : "product";
    return {{"kind", kind}, {"args", a}};
  }

 private:
  Op op_;
  std::vector<Modulus> args_;
};

class MonusNode final : public ModulusNode {
 public:
  MonusNode(Modulus m, Nat c) : m_(std::move(m)), c_(std::move(c)) {}
  Nat eval(const Nat& n, EvalContext& ctx) const override {
    return fejercert::monus(m_.eval(n, ctx), c_);
  }
  bool monotone() const override { return m_.monotone(); }
  json to_json() const override { return {{"kind", "monus"}, {"arg", m_.to_json()}, {"c", nat_to_json(c_)}}; }

 private:
  Modulus m_;
  Nat c_;
};

class CeilScaleNode final : public ModulusNode {
 public:
  enum class Mode { Linear, Sqrt, SqrtScale };
  CeilScaleNode(Mode mode, Rational q, Modulus m) : mode_(mode), q_(std::move(q)), m_(std::move(m)) {}
  Nat eval(const Nat& n, EvalContext& ctx) const override {
    Nat v = m_.eval(n, ctx);
    if (mode_ != Mode::Sqrt && ctx.at_ceiling(v) && q_ >= 1) return v;
    switch (mode_) {
      case Mode::Linear: return ctx.clamp(ceil_rational(q_ * Rational(v)));
      case Mode::Sqrt: return ctx.clamp(fejercert::ceil_sqrt(v));
      case Mode::SqrtScale: return ctx.clamp(ceil_sqrt_rational(q_ * Rational(v * v)));
    }
    return v;
  }
  bool monotone() const override { return q_ >= 0 && m_.monotone(); }
  json to_json() const override {
    switch (mode_) {
      case Mode::Linear: return {{"kind", "ceil_scale"}, {"q", rational_to_json(q_)}, {"arg", m_.to_json()}};
      case Mode::Sqrt: return {{"kind", "ceil_sqrt"}, {"arg", m_.to_json()}};
      case Mode::SqrtScale:
        return {{"kind", "ceil_sqrt_scale"}, {"q", rational_to_json(q_)}, {"arg", m_.to_json()}};
    }
    return {};
  }

 private:
  Mode mode_;
  Rational q_;
  Modulus m_;
};

class CeilLog2Node final : public ModulusNode {
 public:
  explicit CeilLog2Node(Modulus m) : m_(std::move(m)) {}
  Nat eval(const Nat& n, EvalContext& ctx) const override { return fejercert::ceil_log2(m_.eval(n, ctx)); }
  bool monotone() const override { return m_.monotone(); }
  json to_json() const override { return {{"kind", "ceil_log2"}, {"arg", m_.to_json()}}; }

 private:
  Modulus m_;
};

class PowerNode final : public ModulusNode {
 public:
  PowerNode(Modulus m, std::uint64_t p) : m_(std::move(m)), p_(p) {}
  Nat eval(const Nat& n, EvalContext& ctx) const override { return saturating_pow(m_.eval(n, ctx), p_, ctx); }
  bool monotone() const override { return m_.monotone(); }
  json to_json() const override { return {{"kind", "pow"}, {"arg", m_.to_json()}, {"p", p_}}; }

 private:
  Modulus m_;
  std::uint64_t p_;
};

class ShiftNode final : public ModulusNode {
 public:
  ShiftNode(Modulus m, Nat c) : m_(std::move(m)), c_(std::move(c)) {}
  Nat eval(const Nat& n, EvalContext& ctx) const override { return m_.eval(ctx.clamp(n + c_), ctx); }
  bool monotone() const override { return m_.monotone(); }
  json to_json() const override { return {{"kind", "shift"}, {"arg", m_.to_json()}, {"c", nat_to_json(c_)}}; }

 private:
  Modulus m_;
  Nat c_;
};

class MajorantNode final : public ModulusNode {
 public:
  MajorantNode(Modulus m, Nat cap) : m_(std::move(m)), cap_(std::move(cap)) {}
  Nat eval(const Nat& n, EvalContext& ctx) const override {
    if (n > cap_) {
      throw DomainError("majorant of a non-monotone modulus evaluated at " + to_decimal(n) +
                        " beyond its cap " + to_decimal(cap_));
    }
    auto idx = n.convert_to<std::size_t>();
    std::lock_guard<std::mutex> lock(mu_);
    while (prefix_.size() <= idx) {
      Nat v = m_.eval(prefix_.size(), ctx);
      prefix_.push_back(prefix_.empty() ? v : std::max(prefix_.back(), v));
    }
    return ctx.clamp(prefix_[idx]);
  }
  bool monotone() const override { return true; }
  json to_json() const override {
    return {{"kind", "majorant"}, {"arg", m_.to_json()}, {"cap", nat_to_json(cap_)}};
  }

 private:
  Modulus m_;
  Nat cap_;
  mutable std::mutex mu_;
  mutable std::vector<Nat> prefix_;
};

const json& require(const json& j, const char* key, const std::string& pointer) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(pointer + "/" + key, "missing field");
  return j.at(key);
}

std::vector<Modulus> modulus_list(const json& j, const std::string& pointer) {
  if (!j.is_array() || j.empty()) throw ConfigError(pointer, "expected a non-empty array of moduli");
  std::vector<Modulus> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(Modulus::from_json(j[i], pointer + "/" + std::to_string(i)));
  return out;
}

std::uint64_t small_nat(const json& j, const std::string& pointer) {
  Nat v = nat_from_json(j, pointer);
  if (v > 4096) throw ConfigError(pointer, "exponent too large");
  return v.convert_to<std::uint64_t>();
}

}  // namespace

Modulus::Modulus() : Modulus(std::make_shared<ConstantNode>(0)) {}

Modulus::Modulus(std::shared_ptr<const ModulusNode> node) : node_(std::move(node)) {
  monotone_ = node_->monotone();
}

Modulus Modulus::constant(Nat c) { return Modulus(std::make_shared<ConstantNode>(std::move(c))); }
Modulus Modulus::identity() { return affine(1, 0); }
Modulus Modulus::affine(Nat a, Nat b) { return Modulus(std::make_shared<AffineNode>(std::move(a), std::move(b))); }
Modulus Modulus::polynomial(std::vector<Nat> coeffs) {
  return Modulus(std::make_shared<PolynomialNode>(std::move(coeffs)));
}
Modulus Modulus::ceil_scaled_power(Rational c, std::uint64_t p) {
  if (c < 0) throw RangeError("c", "ceil_pow scale must be nonnegative");
  return Modulus(std::make_shared<CeilScaledPowerNode>(std::move(c), p));
}
Modulus Modulus::table(std::vector<Nat> values, std::optional<Modulus> tail) {
  return Modulus(std::make_shared<TableNode>(std::move(values), std::move(tail)));
}
Modulus Modulus::compose(const Modulus& outer, const Modulus& inner) {
  return Modulus(std::make_shared<ComposeNode>(outer, inner));
}
Modulus Modulus::max_of(std::vector<Modulus> args) {
  return Modulus(std::make_shared<FoldNode>(FoldNode::Op::Max, std::move(args)));
}
Modulus Modulus::sum_of(std::vector<Modulus> args) {
  return Modulus(std::make_shared<FoldNode>(FoldNode::Op::Sum, std::move(args)));
}
Modulus Modulus::product_of(std::vector<Modulus> args) {
  return Modulus(std::make_shared<FoldNode>(FoldNode::Op::Product, std::move(args)));
}
Modulus Modulus::monus(const Modulus& m, Nat c) { return Modulus(std::make_shared<MonusNode>(m, std::move(c))); }
Modulus Modulus::ceil_scale(Rational q, const Modulus& m) {
  if (q < 0) throw RangeError("q", "scale must be nonnegative");
  return Modulus(std::make_shared<CeilScaleNode>(CeilScaleNode::Mode::Linear, std::move(q), m));
}
Modulus Modulus::ceil_sqrt(const Modulus& m) {
  return Modulus(std::make_shared<CeilScaleNode>(CeilScaleNode::Mode::Sqrt, Rational(1), m));
}
Modulus Modulus::ceil_sqrt_scale(Rational q, const Modulus& m) {
  if (q < 0) throw RangeError("q", "scale must be nonnegative");
  return Modulus(std::make_shared<CeilScaleNode>(CeilScaleNode::Mode::SqrtScale, std::move(q), m));
}
Modulus Modulus::ceil_log2(const Modulus& m) { return Modulus(std::make_shared<CeilLog2Node>(m)); }
Modulus Modulus::power(const Modulus& m, std::uint64_t p) { return Modulus(std::make_shared<PowerNode>(m, p)); }
Modulus Modulus::shift(const Modulus& m, Nat c) { return Modulus(std::make_shared<ShiftNode>(m, std::move(c))); }

Nat Modulus::eval(const Nat& n, EvalContext& ctx) const { return node_->eval(n, ctx); }

Nat Modulus::operator()(const Nat& n) const {
  EvalContext ctx;
  Nat v = eval(n, ctx);
  if (ctx.saturated()) throw CapExceeded("modulus value at " + approx_string(n) + " exceeds the evaluation ceiling");
  return v;
}

Modulus Modulus::without_monotone_claim() const {
  Modulus copy = *this;
  copy.monotone_ = false;
  return copy;
}

json Modulus::to_json() const {
  json j = node_->to_json();
  j["monotone"] = monotone_;
  return j;
}

Modulus Modulus::from_json(const json& j, const std::string& pointer) {
  if (j.is_number_unsigned() || j.is_string()) return constant(nat_from_json(j, pointer));
  if (!j.is_object()) throw ConfigError(pointer, "expected a modulus object");
  std::string kind = require(j, "kind", pointer).get<std::string>();
  Modulus m;
  if (kind == "const") {
    m = constant(nat_from_json(require(j, "c", pointer), pointer + "/c"));
  } else if (kind == "identity") {
    m = identity();
  } else if (kind == "affine") {
    m = affine(nat_from_json(require(j, "a", pointer), pointer + "/a"),
               j.contains("b") ? nat_from_json(j.at("b"), pointer + "/b") : Nat(0));
  } else if (kind == "poly") {
    const json& c = require(j, "coeffs", pointer);
    if (!c.is_array()) throw ConfigError(pointer + "/coeffs", "expected an array");
    std::vector<Nat> coeffs;
    for (std::size_t i = 0; i < c.size(); ++i) coeffs.push_back(nat_from_json(c[i], pointer + "/coeffs/" + std::to_string(i)));
    m = polynomial(std::move(coeffs));
  } else if (kind == "ceil_pow") {
    m = ceil_scaled_power(rational_from_json(require(j, "c", pointer), pointer + "/c"),
                          small_nat(require(j, "p", pointer), pointer + "/p"));
  } else if (kind == "table") {
    const json& v = require(j, "values", pointer);
    if (!v.is_array()) throw ConfigError(pointer + "/values", "expected an array");
    std::vector<Nat> values;
    for (std::size_t i = 0; i < v.size(); ++i) values.push_back(nat_from_json(v[i], pointer + "/values/" + std::to_string(i)));
    std::optional<Modulus> tail;
    if (j.contains("tail")) tail = from_json(j.at("tail"), pointer + "/tail");
    m = table(std::move(values), std::move(tail));
  } else if (kind == "compose") {
    m = compose(from_json(require(j, "outer", pointer), pointer + "/outer"),
                from_json(require(j, "inner", pointer), pointer + "/inner"));
  } else if (kind == "max" || kind == "sum" || kind == "product") {
    auto args = modulus_list(require(j, "args", pointer), pointer + "/args");
    m = kind == "max" ? max_of(std::move(args)) : kind == "sum" ? sum_of(std::move(args)) : product_of(std::move(args));
  } else if (kind == "monus") {
    m = monus(from_json(require(j, "arg", pointer), pointer + "/arg"), nat_from_json(require(j, "c", pointer), pointer + "/c"));
  } else if (kind == "ceil_scale") {
    m = ceil_scale(rational_from_json(require(j, "q", pointer), pointer + "/q"),
                   from_json(require(j, "arg", pointer), pointer + "/arg"));
  } else if (kind == "ceil_sqrt") {
    m = ceil_sqrt(from_json(require(j, "arg", pointer), pointer + "/arg"));
  } else if (kind == "ceil_sqrt_scale") {
    m = ceil_sqrt_scale(rational_from_json(require(j, "q", pointer), pointer + "/q"),
                        from_json(require(j, "arg", pointer), pointer + "/arg"));
  } else if (kind == "ceil_log2") {
    m = ceil_log2(from_json(require(j, "arg", pointer), pointer + "/arg"));
  } else if (kind == "pow") {
    m = power(from_json(require(j, "arg", pointer), pointer + "/arg"), small_nat(require(j, "p", pointer), pointer + "/p"));
  } else if (kind == "shift") {
    m = shift(from_json(require(j, "arg", pointer), pointer + "/arg"), nat_from_json(require(j, "c", pointer), pointer + "/c"));
  } else if (kind == "majorant") {
    m = majorant(from_json(require(j, "arg", pointer), pointer + "/arg"),
                 nat_from_json(require(j, "cap", pointer), pointer + "/cap"));
  } else if (kind == "ii_to_i") {
    try {
      m = modulus_II_to_I(from_json(require(j, "arg", pointer), pointer + "/arg"));
    } catch (const DomainError& e) {
      throw ConfigError(pointer + "/arg", e.what());
    }
  } else if (kind == "convex_hull") {
    m = tb_modulus_convex_hull(from_json(require(j, "gamma", pointer), pointer + "/gamma"),
                               rational_from_json(require(j, "b", pointer), pointer + "/b"));
  } else if (kind == "interval") {
    m = tb_modulus_interval();
  } else if (kind == "ball") {
    Nat dim = nat_from_json(require(j, "dim", pointer), pointer + "/dim");
    Rational b = rational_from_json(require(j, "radius", pointer), pointer + "/radius");
    if (dim == 0 || dim > 64) throw ConfigError(pointer + "/dim", "dimension must be in [1,64]");
    if (b <= 0) throw ConfigError(pointer + "/radius", "radius must be positive");
    m = tb_modulus_ball(dim.convert_to<std::uint64_t>(), b);
  } else {
    throw ConfigError(pointer + "/kind", "unknown modulus kind '" + kind + "'");
  }
  if (j.contains("monotone")) {
    const json& flag = j.at("monotone");
    if (!flag.is_boolean()) throw ConfigError(pointer + "/monotone", "expected a boolean");
    if (flag.get<bool>() && !m.monotone()) {
      throw ConfigError(pointer + "/monotone", "declared monotone but the expression is not nondecreasing");
    }
    if (!flag.get<bool>()) m = m.without_monotone_claim();
  }
  return m;
}

Modulus majorant(const Modulus& m, const Nat& cap) {
  if (m.monotone()) return m;
  return Modulus(std::make_shared<MajorantNode>(m, cap));
}

Nat nat_from_json(const json& j, const std::string& pointer) {
  if (j.is_number_unsigned()) return Nat(j.get<std::uint64_t>());
  if (j.is_number_integer()) {
    if (j.get<std::int64_t>() < 0) throw ConfigError(pointer, "expected a natural number");
    return Nat(j.get<std::int64_t>());
  }
  if (j.is_string()) {
    try {
      return parse_nat(j.get<std::string>());
    } catch (const DomainError& e) {
      throw ConfigError(pointer, e.what());
    }
  }
  throw ConfigError(pointer, "expected a natural number (integer or decimal string)");
}

json nat_to_json(const Nat& n) { return to_decimal(n); }

Rational rational_from_json(const json& j, const std::string& pointer) {
  try {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_number_unsigned()) return Rational(j.get<std::uint64_t>());
    if (j.is_number_float()) {
      // Read the shortest decimal that round-trips, so 0.1 means 1/10.
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof buf, j.get<double>());
      return parse_rational(std::string(buf, res.ptr));
    }
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const DomainError& e) {
    throw ConfigError(pointer, e.what());
  }
  throw ConfigError(pointer, "expected a real number or rational string");
}

json rational_to_json(const Rational& q) { return rational_to_string(q); }

}  // namespace fejercert
