#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace qosc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Integer power; negative exponents require a nonzero base.
Rational rational_pow(const Rational& base, long e);

/// Exact square root when the value is a perfect square, nullopt otherwise.
std::optional<Rational> rational_sqrt(const Rational& value);

double to_double(const Rational& value);

/// "p/q" with decimal integers and an optional leading minus; the denominator
/// is always written, so "3" serializes as "3/1".
std::string format_rational(const Rational& value);

/// Accepts "p/q", a bare integer, or a plain fixed-point decimal ("-0.75").
Rational parse_rational(const std::string& text);

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double value);

} // namespace qosc
