#include "qosc/qparam.hpp"

#include <cmath>
#include <stdexcept>

namespace qosc {

const char* to_string(Regime r) {
    switch (r) {
        case Regime::BelowMinusOne: return "q < -1";
        case Regime::MinusOne: return "q = -1";
        case Regime::MinusOneToZero: return "-1 < q < 0";
        case Regime::Zero: return "q = 0";
        case Regime::ZeroToOne: return "0 < q < 1";
        case Regime::One: return "q = 1";
        case Regime::AboveOne: return "q > 1";
    }
    return "?";
}

QParam QParam::exact(Rational value) {
    QParam q;
    q.mode_ = ArithmeticMode::Exact;
    q.value_ = to_double(value);
    q.rational_value_ = std::move(value);
    q.tolerance_ = 0.0;
    return q;
}

QParam QParam::exact(long num, long den) {
    if (den == 0) {
        throw std::invalid_argument("QParam::exact: zero denominator");
    }
    return exact(Rational(num, den));
}

QParam QParam::floating(double value, double tolerance) {
    if (!std::isfinite(value)) {
        throw std::invalid_argument("QParam::floating: non-finite value");
    }
    if (!(tolerance > 0.0)) {
        throw std::invalid_argument("QParam::floating: tolerance must be positive");
    }
    QParam q;
    q.mode_ = ArithmeticMode::Float;
    q.value_ = value;
    q.tolerance_ = tolerance;
    return q;
}

QParam QParam::parse(const std::string& text, ArithmeticMode mode, double tolerance) {
    if (mode == ArithmeticMode::Exact) {
        return exact(parse_rational(text));
    }
    if (text.find('/') != std::string::npos) {
        return floating(to_double(parse_rational(text)), tolerance);
    }
    return floating(std::stod(text), tolerance);
}

const Rational& QParam::rational() const {
    if (!is_exact()) {
        throw std::logic_error("QParam::rational: parameter is in float mode");
    }
    return rational_value_;
}

Regime QParam::regime() const {
    if (is_exact()) {
        const Rational& v = rational_value_;
        if (v < -1) return Regime::BelowMinusOne;
        if (v == -1) return Regime::MinusOne;
        if (v < 0) return Regime::MinusOneToZero;
        if (v == 0) return Regime::Zero;
        if (v < 1) return Regime::ZeroToOne;
        if (v == 1) return Regime::One;
        return Regime::AboveOne;
    }
    const double v = value_;
    if (v < -1.0) return Regime::BelowMinusOne;
    if (v == -1.0) return Regime::MinusOne;
    if (v < 0.0) return Regime::MinusOneToZero;
    if (v == 0.0) return Regime::Zero;
    if (v < 1.0) return Regime::ZeroToOne;
    if (v == 1.0) return Regime::One;
    return Regime::AboveOne;
}

std::string QParam::str() const {
    return is_exact() ? format_rational(rational_value_) : format_double(value_);
}

QNumber QNumber::exact(Rational value) {
    QNumber n;
    n.exact_ = true;
    n.value_ = to_double(value);
    n.rational_value_ = std::move(value);
    n.error_ = 0.0;
    return n;
}

QNumber QNumber::approx(double value, double error_bound) {
    QNumber n;
    n.exact_ = false;
    n.value_ = value;
    n.error_ = error_bound;
    return n;
}

const Rational& QNumber::rational() const {
    if (!exact_) {
        throw std::logic_error("QNumber::rational: value is approximate");
    }
    return rational_value_;
}

std::string QNumber::str() const {
    return exact_ ? format_rational(rational_value_) : format_double(value_);
}

} // namespace qosc
