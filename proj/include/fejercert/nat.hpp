#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace fejercert {

using Nat = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Truncated subtraction a ∸ b.
Nat monus(const Nat& a, const Nat& b);

Nat ceil_div(const Nat& a, const Nat& b);

// Smallest natural >= q. Negative q gives 0.
Nat ceil_rational(const Rational& q);

Nat isqrt(const Nat& x);
Nat ceil_sqrt(const Nat& x);

// Smallest natural M with M*M >= q.
Nat ceil_sqrt_rational(const Rational& q);

// Smallest e with 2^e >= x; 0 for x <= 1.
Nat ceil_log2(const Nat& x);

// ceil(e^K), exact for the small K used at desk scale.
Nat ceil_exp(unsigned k);

Nat pow_nat(const Nat& base, std::uint64_t exponent);

// Exact value of a finite double.
Rational rational_from_double(double v);

// Accepts "3", "-0.25", "1/3", "1e-3".
Rational parse_rational(const std::string& text);

std::string rational_to_string(const Rational& q);

Nat parse_nat(const std::string& text);
std::string to_decimal(const Nat& n);

// Saturates at DBL_MAX.
double to_double(const Nat& n);
double to_double(const Rational& q);

std::uint64_t to_u64_saturating(const Nat& n);

// Abbreviated human-readable form, e.g. "1.2345e+678 (679 digits)".
std::string approx_string(const Nat& n);

}  // namespace fejercert
