#pragma once

#include "qosc/rational.hpp"

#include <string>

namespace qosc {

enum class ArithmeticMode { Exact, Float };

/// Sign/size cases of the deformation parameter. Every module branches on
/// these, so the tag is derived from the stored value on demand and can
/// never drift out of sync with it.
enum class Regime {
    BelowMinusOne,
    MinusOne,
    MinusOneToZero,
    Zero,
    ZeroToOne,
    One,
    AboveOne,
};

const char* to_string(Regime r);

/// The deformation parameter q together with its arithmetic mode. Exact mode
/// requires a rational value; float mode carries a relative tolerance used by
/// downstream residual checks.
class QParam {
public:
    static constexpr double kDefaultTolerance = 1e-12;

    static QParam exact(Rational value);
    static QParam exact(long num, long den = 1);
    static QParam floating(double value, double tolerance = kDefaultTolerance);
    /// Accepts "p/q" or a decimal; exact mode converts decimals to rationals.
    static QParam parse(const std::string& text, ArithmeticMode mode = ArithmeticMode::Exact,
                        double tolerance = kDefaultTolerance);

    ArithmeticMode mode() const { return mode_; }
    bool is_exact() const { return mode_ == ArithmeticMode::Exact; }
    const Rational& rational() const;
    double value() const { return value_; }
    double tolerance() const { return tolerance_; }
    Regime regime() const;
    std::string str() const;

private:
    QParam() = default;
    Rational rational_value_;
    double value_ = 0.0;
    double tolerance_ = 0.0;
    ArithmeticMode mode_ = ArithmeticMode::Exact;
};

/// Scalar result of a q-combinatorial primitive: exact rational or a double
/// with an a-priori error bound. Exact values carry a zero bound.
class QNumber {
public:
    static QNumber exact(Rational value);
    static QNumber approx(double value, double error_bound);

    bool is_exact() const { return exact_; }
    const Rational& rational() const;
    double value() const { return value_; }
    double error_bound() const { return error_; }
    std::string str() const;

private:
    QNumber() = default;
    Rational rational_value_;
    double value_ = 0.0;
    double error_ = 0.0;
    bool exact_ = false;
};

} // namespace qosc
