#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace relgame {

/// Exact rational number, always in lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

class RationalFormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline Rational make_rational(long long num, long long den = 1) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) return Rational(-Integer(num), -Integer(den));
  return Rational(Integer(num), Integer(den));
}

/// Parses "p/q", "p" or "-p/q". Decimal and exponent notation is refused so
/// that every value entering the core math is exact.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&](const std::string& why) -> Rational {
    throw RationalFormatError("invalid rational \"" + std::string(text) +
                              "\": " + why);
  };
  if (text.empty()) return fail("empty string");
  if (text.find_first_of(".eE") != std::string_view::npos) {
    return fail("decimal/float notation is not accepted, write it as \"p/q\" "
                "(e.g. \"1/3\" or \"-1/2\")");
  }

  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  auto digits = [&](std::size_t from) {
    std::size_t end = from;
    while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end])))
      ++end;
    return end;
  };

  std::size_t num_end = digits(pos);
  if (num_end == pos) return fail("expected digits");
  Integer num(std::string(text.substr(pos, num_end - pos)));
  Integer den(1);
  if (num_end < text.size()) {
    if (text[num_end] != '/') return fail("unexpected character");
    std::size_t den_end = digits(num_end + 1);
    if (den_end == num_end + 1 || den_end != text.size())
      return fail("malformed denominator");
    den = Integer(std::string(text.substr(num_end + 1, den_end - num_end - 1)));
    if (den == 0) return fail("zero denominator");
  }
  if (negative) num = -num;
  return Rational(num, den);
}

/// Canonical text form: "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& r) {
  const Integer& den = boost::multiprecision::denominator(r);
  std::string out = boost::multiprecision::numerator(r).str();
  if (den != 1) out += "/" + den.str();
  return out;
}

}  // namespace relgame
