#include "fejercert/nat.hpp"

#include "fejercert/errors.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace fejercert {

namespace mp = boost::multiprecision;

Nat monus(const Nat& a, const Nat& b) { return a > b ? Nat(a - b) : Nat(0); }

Nat ceil_div(const Nat& a, const Nat& b) {
  if (b == 0) throw DomainError("ceil_div by zero");
  Nat q = a / b;
  if (q * b != a) ++q;
  return q;
}

Nat ceil_rational(const Rational& q) {
  if (q <= 0) return 0;
  Nat num = mp::numerator(q);
  Nat den = mp::denominator(q);
  return ceil_div(num, den);
}

Nat isqrt(const Nat& x) {
  if (x < 0) throw DomainError("isqrt of negative");
  return mp::sqrt(x);
}

Nat ceil_sqrt(const Nat& x) {
  Nat r = isqrt(x);
  if (r * r < x) ++r;
  return r;
}

Nat ceil_sqrt_rational(const Rational& q) {
  if (q <= 0) return 0;
  Nat p = mp::numerator(q);
  Nat d = mp::denominator(q);
  Nat m = isqrt(p / d);
  while (m * m * d < p) ++m;
  return m;
}

Nat ceil_log2(const Nat& x) {
  if (x <= 1) return 0;
  Nat y = x - 1;
  return Nat(mp::msb(y) + 1);
}

Nat ceil_exp(unsigned k) {
  if (k == 0) return 1;
  using F = mp::cpp_bin_float_100;
  F e = mp::exp(F(k));
  return Nat(mp::ceil(e));
}

Nat pow_nat(const Nat& base, std::uint64_t exponent) {
  Nat result = 1;
  Nat b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent > 0) b *= b;
  }
  return result;
}

Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw DomainError("non-finite real parameter");
  int exp = 0;
  double mant = std::frexp(v, &exp);
  // mant * 2^53 is an exact integer.
  auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r(scaled);
  if (exp > 0) {
    r *= Rational(pow_nat(2, static_cast<std::uint64_t>(exp)));
  } else if (exp < 0) {
    r /= Rational(pow_nat(2, static_cast<std::uint64_t>(-exp)));
  }
  return r;
}

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw DomainError("empty rational literal");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    Rational num = parse_rational(text.substr(0, slash));
    Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw DomainError("zero denominator in '" + text + "'");
    return num / den;
  }
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '-' || text[pos] == '+') {
    negative = text[pos] == '-';
    ++pos;
  }
  Nat digits = 0;
  long scale = 0;
  bool seen_digit = false;
  bool seen_dot = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c >= '0' && c <= '9') {
      digits = digits * 10 + (c - '0');
      if (seen_dot) --scale;
      seen_digit = true;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw DomainError("malformed rational '" + text + "'");
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') throw DomainError("malformed rational '" + text + "'");
    try {
      std::size_t used = 0;
      long e = std::stol(text.substr(pos + 1), &used);
      if (pos + 1 + used != text.size()) throw DomainError("malformed rational '" + text + "'");
      scale += e;
    } catch (const std::logic_error&) {
      throw DomainError("malformed rational '" + text + "'");
    }
  }
  Rational r(digits);
  if (scale > 0) r *= Rational(pow_nat(10, static_cast<std::uint64_t>(scale)));
  if (scale < 0) r /= Rational(pow_nat(10, static_cast<std::uint64_t>(-scale)));
  return negative ? Rational(-r) : r;
}

std::string rational_to_string(const Rational& q) {
  Nat num = mp::numerator(q);
  Nat den = mp::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Nat parse_nat(const std::string& text) {
  if (text.empty()) throw DomainError("empty natural literal");
  for (char c : text) {
    if (c < '0' || c > '9') throw DomainError("malformed natural '" + text + "'");
  }
  return Nat(text);
}

std::string to_decimal(const Nat& n) { return n.str(); }

double to_double(const Nat& n) {
  if (mp::msb(n + 1) > 1020) return std::numeric_limits<double>::max();
  return n.convert_to<double>();
}

double to_double(const Rational& q) {
  Nat num = mp::numerator(q);
  Nat den = mp::denominator(q);
  bool negative = num < 0;
  if (negative) num = -num;
  // Shift both sides down so the conversion stays in range.
  std::size_t nb = num == 0 ? 0 : mp::msb(num);
  std::size_t db = mp::msb(den);
  std::size_t shift = std::max(nb, db) > 900 ? std::max(nb, db) - 900 : 0;
  double v = Nat(num >> shift).convert_to<double>() / Nat(den >> shift).convert_to<double>();
  return negative ? -v : v;
}

std::uint64_t to_u64_saturating(const Nat& n) {
  if (n <= 0) return 0;
  if (n > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  return n.convert_to<std::uint64_t>();
}

std::string approx_string(const Nat& n) {
  std::string s = n.str();
  if (s.size() <= 20) return s;
  std::ostringstream out;
  out << s[0] << '.' << s.substr(1, 4) << "e+" << (s.size() - 1) << " (" << s.size() << " digits)";
  return out.str();
}

}  // namespace fejercert
