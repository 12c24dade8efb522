#include "qosc/rational.hpp"

#include <charconv>
#include <cstdlib>
#include <stdexcept>

namespace qosc {

Rational rational_pow(const Rational& base, long e) {
    if (e == 0) {
        return Rational(1);
    }
    if (base == 0) {
        if (e > 0) {
            return Rational(0);
        }
        throw std::domain_error("rational_pow: zero base with negative exponent");
    }
    const unsigned k = static_cast<unsigned>(e < 0 ? -e : e);
    BigInt num = boost::multiprecision::pow(boost::multiprecision::numerator(base), k);
    BigInt den = boost::multiprecision::pow(boost::multiprecision::denominator(base), k);
    if (e < 0) {
        std::swap(num, den);
        if (den < 0) { // the constructor requires a positive denominator
            num = -num;
            den = -den;
        }
    }
    return Rational(num, den);
}

std::optional<Rational> rational_sqrt(const Rational& value) {
    if (value < 0) {
        return std::nullopt;
    }
    const BigInt num = boost::multiprecision::numerator(value);
    const BigInt den = boost::multiprecision::denominator(value);
    const BigInt sn = boost::multiprecision::sqrt(num);
    const BigInt sd = boost::multiprecision::sqrt(den);
    if (sn * sn != num || sd * sd != den) {
        return std::nullopt;
    }
    return Rational(sn, sd);
}

double to_double(const Rational& value) {
    return value.convert_to<double>();
}

std::string format_rational(const Rational& value) {
    return boost::multiprecision::numerator(value).str() + "/" +
           boost::multiprecision::denominator(value).str();
}

namespace {

bool is_integer_text(const std::string& s) {
    if (s.empty()) {
        return false;
    }
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) {
        return false;
    }
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') {
            return false;
        }
    }
    return true;
}

// cpp_int's string constructor treats leading zeros as octal; strip them.
BigInt decimal_bigint(const std::string& s) {
    const bool neg = s[0] == '-';
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    while (i + 1 < s.size() && s[i] == '0') {
        ++i;
    }
    BigInt v(s.substr(i));
    return neg ? -v : v;
}

} // namespace

Rational parse_rational(const std::string& text) {
    if (text.empty()) {
        throw std::invalid_argument("parse_rational: empty string");
    }
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        const std::string num = text.substr(0, slash);
        const std::string den = text.substr(slash + 1);
        if (!is_integer_text(num) || !is_integer_text(den)) {
            throw std::invalid_argument("parse_rational: malformed fraction '" + text + "'");
        }
        BigInt d = decimal_bigint(den);
        if (d == 0) {
            throw std::invalid_argument("parse_rational: zero denominator in '" + text + "'");
        }
        if (d < 0) {
            return Rational(-decimal_bigint(num), -d);
        }
        return Rational(decimal_bigint(num), d);
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) {
        if (!is_integer_text(text)) {
            throw std::invalid_argument("parse_rational: malformed number '" + text + "'");
        }
        return Rational(decimal_bigint(text));
    }
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const std::size_t frac_len = text.size() - dot - 1;
    if (frac_len == 0 || !is_integer_text(digits)) {
        throw std::invalid_argument("parse_rational: malformed decimal '" + text + "'");
    }
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac_len));
    return Rational(decimal_bigint(digits), scale);
}

std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

} // namespace qosc
