#pragma once

#include "fejercert/modulus.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fejercert {

// Closed-form real sequences for step sizes, relaxation parameters and error terms.
class SequenceSpec {
 public:
  enum class Kind {
    Constant,   // v
    Harmonic,   // a + c/(n+1)
    Table,      // values[n], then tail
    Geometric,  // scale · ratio^n
  };

  // Bounds of the value set; *_attained says whether the bound is a value.
  struct Range {
    Rational lo, hi;
    bool lo_attained = true;
    bool hi_attained = true;
  };

  SequenceSpec();  // constant 0

  static SequenceSpec constant(Rational v);
  static SequenceSpec harmonic(Rational a, Rational c);
  static SequenceSpec table(std::vector<Rational> values, Rational tail);
  static SequenceSpec geometric(Rational scale, Rational ratio);

  double at(std::uint64_t n) const;
  Kind kind() const { return kind_; }
  bool is_constant() const;
  const Rational& constant_value() const { return a_; }

  Range range() const;
  // True iff every term lies in the interval with the given open/closed ends.
  bool all_in(const Rational& lo, const Rational& hi, bool lo_open, bool hi_open) const;
  // Same, restricted to indices n >= from.
  bool all_in_from(std::uint64_t from, const Rational& lo, const Rational& hi, bool lo_open, bool hi_open) const;
  // max_{i≤k} term_i.
  Rational prefix_max(const Nat& k) const;

  json to_json() const;
  static SequenceSpec from_json(const json& j, const std::string& pointer = "");

 private:
  Kind kind_ = Kind::Constant;
  Rational a_, c_;  // constant/harmonic: a, c; geometric: scale, ratio; table: tail in a_
  std::vector<Rational> values_;
};

}  // namespace fejercert
