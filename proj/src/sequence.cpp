#include "fejercert/sequence.hpp"

#include "fejercert/errors.hpp"

#include <algorithm>
#include <cmath>

namespace fejercert {

SequenceSpec::SequenceSpec() = default;

SequenceSpec SequenceSpec::constant(Rational v) {
  SequenceSpec s;
  s.a_ = std::move(v);
  return s;
}

SequenceSpec SequenceSpec::harmonic(Rational a, Rational c) {
  SequenceSpec s;
  s.kind_ = Kind::Harmonic;
  s.a_ = std::move(a);
  s.c_ = std::move(c);
  return s;
}

SequenceSpec SequenceSpec::table(std::vector<Rational> values, Rational tail) {
  SequenceSpec s;
  s.kind_ = Kind::Table;
  s.values_ = std::move(values);
  s.a_ = std::move(tail);
  return s;
}

SequenceSpec SequenceSpec::geometric(Rational scale, Rational ratio) {
  if (scale < 0) throw RangeError("scale", "must be nonnegative");
  if (ratio < 0 || ratio > 1) throw RangeError("ratio", "must lie in [0,1]");
  SequenceSpec s;
  s.kind_ = Kind::Geometric;
  s.a_ = std::move(scale);
  s.c_ = std::move(ratio);
  return s;
}

double SequenceSpec::at(std::uint64_t n) const {
  switch (kind_) {
    case Kind::Constant: return to_double(a_);
    case Kind::Harmonic: return to_double(a_) + to_double(c_) / static_cast<double>(n + 1);
    case Kind::Table: return n < values_.size() ? to_double(values_[n]) : to_double(a_);
    case Kind::Geometric: return to_double(a_) * std::pow(to_double(c_), static_cast<double>(n));
  }
  return 0.0;
}

bool SequenceSpec::is_constant() const {
  switch (kind_) {
    case Kind::Constant: return true;
    case Kind::Harmonic: return c_ == 0;
    case Kind::Table:
      return std::all_of(values_.begin(), values_.end(), [&](const Rational& v) { return v == a_; });
    case Kind::Geometric: return a_ == 0 || c_ == 1;
  }
  return false;
}

namespace {

SequenceSpec::Range range_from(const SequenceSpec& s, SequenceSpec::Kind kind, const Rational& a, const Rational& c,
                               const std::vector<Rational>& values, std::uint64_t from) {
  using K = SequenceSpec::Kind;
  SequenceSpec::Range r;
  switch (kind) {
    case K::Constant: r.lo = r.hi = a; break;
    case K::Harmonic: {
      Rational first = a + c / Rational(Nat(from + 1));
      if (c == 0) {
        r.lo = r.hi = a;
      } else if (c > 0) {
        r.hi = first;
        r.lo = a;
        r.lo_attained = false;
      } else {
        r.lo = first;
        r.hi = a;
        r.hi_attained = false;
      }
      break;
    }
    case K::Table: {
      r.lo = r.hi = a;
      for (std::size_t i = from; i < values.size(); ++i) {
        r.lo = std::min(r.lo, values[i]);
        r.hi = std::max(r.hi, values[i]);
      }
      break;
    }
    case K::Geometric: {
      Rational first = a;
      for (std::uint64_t i = 0; i < from && first > 0 && c < 1; ++i) first *= c;
      r.hi = first;
      if (c == 1 || a == 0) {
        r.lo = first;
      } else {
        r.lo = 0;
        r.lo_attained = c == 0 && from >= 1;
      }
      break;
    }
  }
  (void)s;
  return r;
}

bool range_within(const SequenceSpec::Range& r, const Rational& lo, const Rational& hi, bool lo_open, bool hi_open) {
  bool lower_ok = (r.lo_attained && lo_open) ? r.lo > lo : r.lo >= lo;
  bool upper_ok = (r.hi_attained && hi_open) ? r.hi < hi : r.hi <= hi;
  return lower_ok && upper_ok;
}

}  // namespace

SequenceSpec::Range SequenceSpec::range() const { return range_from(*this, kind_, a_, c_, values_, 0); }

bool SequenceSpec::all_in(const Rational& lo, const Rational& hi, bool lo_open, bool hi_open) const {
  return range_within(range(), lo, hi, lo_open, hi_open);
}

bool SequenceSpec::all_in_from(std::uint64_t from, const Rational& lo, const Rational& hi, bool lo_open,
                               bool hi_open) const {
  return range_within(range_from(*this, kind_, a_, c_, values_, from), lo, hi, lo_open, hi_open);
}

Rational SequenceSpec::prefix_max(const Nat& k) const {
  switch (kind_) {
    case Kind::Constant: return a_;
    case Kind::Harmonic:
      if (c_ >= 0) return a_ + c_;
      return a_ + c_ / Rational(Nat(k + 1));
    case Kind::Table: {
      bool have = false;
      Rational best;
      for (std::size_t i = 0; i < values_.size() && Nat(i) <= k; ++i) {
        if (!have || values_[i] > best) best = values_[i];
        have = true;
      }
      if (k >= values_.size() && (!have || a_ > best)) best = a_;
      return best;
    }
    case Kind::Geometric: return a_;
  }
  return a_;
}

json SequenceSpec::to_json() const {
  switch (kind_) {
    case Kind::Constant: return {{"kind", "constant"}, {"value", rational_to_json(a_)}};
    case Kind::Harmonic: return {{"kind", "harmonic"}, {"a", rational_to_json(a_)}, {"c", rational_to_json(c_)}};
    case Kind::Table: {
      json v = json::array();
      for (const auto& x : values_) v.push_back(rational_to_json(x));
      return {{"kind", "table"}, {"values", v}, {"tail", rational_to_json(a_)}};
    }
    case Kind::Geometric:
      return {{"kind", "geometric"}, {"scale", rational_to_json(a_)}, {"ratio", rational_to_json(c_)}};
  }
  return {};
}

SequenceSpec SequenceSpec::from_json(const json& j, const std::string& pointer) {
  if (j.is_number() || j.is_string()) return constant(rational_from_json(j, pointer));
  if (!j.is_object() || !j.contains("kind")) throw ConfigError(pointer, "expected a sequence spec");
  auto get = [&](const char* key) -> Rational {
    if (!j.contains(key)) throw ConfigError(pointer + "/" + key, "missing field");
    return rational_from_json(j.at(key), pointer + "/" + key);
  };
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") return constant(get("value"));
  if (kind == "harmonic") return harmonic(get("a"), get("c"));
  if (kind == "table") {
    if (!j.contains("values") || !j.at("values").is_array()) throw ConfigError(pointer + "/values", "expected an array");
    std::vector<Rational> values;
    const json& v = j.at("values");
    for (std::size_t i = 0; i < v.size(); ++i) values.push_back(rational_from_json(v[i], pointer + "/values/" + std::to_string(i)));
    return table(std::move(values), get("tail"));
  }
  if (kind == "geometric") {
    try {
      return geometric(get("scale"), get("ratio"));
    } catch (const RangeError& e) {
      throw ConfigError(pointer + "/" + e.field(), e.what());
    }
  }
  throw ConfigError(pointer + "/kind", "unknown sequence kind '" + kind + "'");
}

}  // namespace fejercert
