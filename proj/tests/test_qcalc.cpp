#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qosc/qcalc.hpp"

#include <cmath>
#include <complex>

using namespace qosc;
using namespace qosc::qcalc;

namespace {

// Independent oracle: [x]_q as the geometric sum 1 + q + ... + q^{x-1}.
Rational basic_number_by_summation(long x, const Rational& q) {
    REQUIRE(x >= 0);
    Rational acc(0);
    Rational p(1);
    for (long k = 0; k < x; ++k) {
        acc += p;
        p *= q;
    }
    return acc;
}

// Independent oracle: brute-force partial sum of e_q with a fixed term count.
std::complex<double> small_e_by_summation(std::complex<double> z, double q, int terms) {
    std::complex<double> sum = 0.0;
    for (int k = 0; k < terms; ++k) {
        double poch = 1.0;
        for (int i = 0; i < k; ++i) {
            poch *= 1.0 - q * std::pow(q, i);
        }
        sum += std::pow(z, k) / poch;
    }
    return sum;
}

} // namespace

TEST_CASE("basic_number matches the paper conventions and the summation oracle") {
    CHECK(basic_number(5, QParam::exact(1)).rational() == 5);
    CHECK(basic_number(3, QParam::exact(0)).rational() == 1);
    CHECK(basic_number(3, QParam::exact(2)).rational() == 7); // 1 + 2 + 4

    for (long num : {-1L, 0L, 1L, 3L}) {
        const QParam q = QParam::exact(num, 2);
        for (long x = 0; x <= 9; ++x) {
            CHECK(basic_number(x, q).rational() == basic_number_by_summation(x, q.rational()));
        }
    }
}

TEST_CASE("basic_number handles negative x through the rational formula") {
    // [-1]_q = (1 - q^{-1})/(1 - q) = -1/q
    const QParam q = QParam::exact(1, 2);
    CHECK(basic_number(-1, q).rational() == Rational(-2));
    CHECK_THROWS_AS(basic_number(-1, QParam::exact(0)), std::domain_error);
}

TEST_CASE("basic_number float mode switches to summation near q = 1") {
    const QParam q = QParam::floating(1.0 - 1e-10);
    const auto v = basic_number(6, q);
    CHECK(!v.is_exact());
    // true value 6 - (1+2+3+4+5) * 1e-10 up to higher order
    CHECK(v.value() == doctest::Approx(6.0).epsilon(1e-8));
    CHECK(v.error_bound() > 0.0);

    // negative x goes through the extended-precision rational form
    const auto w = basic_number(-4, q);
    CHECK(w.value() == doctest::Approx(-4.0).epsilon(1e-6));
}

TEST_CASE("q_factorial examples") {
    CHECK(q_factorial(0, QParam::exact(7, 3)).rational() == 1);
    CHECK(q_factorial(4, QParam::exact(1)).rational() == 24);
    CHECK(q_factorial(4, QParam::exact(2)).rational() == 315); // 1*3*7*15
    CHECK_THROWS_AS(q_factorial(-1, QParam::exact(1)), std::invalid_argument);
}

TEST_CASE("q_binomial agrees with the factorial quotient where defined") {
    CHECK(q_binomial(4, 2, QParam::exact(1)).rational() == 6);
    CHECK(q_binomial(2, 3, QParam::exact(5, 7)).rational() == 0);
    CHECK(q_binomial(3, -1, QParam::exact(2)).rational() == 0);
    CHECK(q_binomial(4, 2, QParam::exact(2)).rational() == 35);

    for (long num : {-1L, 1L, 2L, 4L}) {
        const QParam q = QParam::exact(num, 2);
        for (int m = 0; m <= 8; ++m) {
            for (long n = 0; n <= m; ++n) {
                const Rational quotient = q_factorial(m, q).rational() /
                                          (q_factorial(m - static_cast<int>(n), q).rational() *
                                           q_factorial(static_cast<int>(n), q).rational());
                CHECK(q_binomial(m, n, q).rational() == quotient);
            }
        }
    }
}

TEST_CASE("q_binomial Pascal-type recurrence holds exactly") {
    for (long num : {-1L, 0L, 1L, 2L, 4L}) {
        const QParam q = QParam::exact(num, 2);
        for (int m = 1; m <= 9; ++m) {
            for (long n = 1; n < m; ++n) {
                const Rational lhs = q_binomial(m, n, q).rational();
                const Rational rhs = q_binomial(m - 1, n - 1, q).rational() +
                                     rational_pow(q.rational(), n) *
                                         q_binomial(m - 1, n, q).rational();
                CHECK(lhs == rhs);
            }
        }
    }
    // the Gaussian binomial is defined at q = -1 where the quotient is 0/0
    CHECK(q_binomial(2, 1, QParam::exact(-1)).rational() == 0);
}

TEST_CASE("q_pochhammer examples") {
    CHECK(q_pochhammer(QNumber::exact(Rational(1)), QParam::exact(1, 2), 3).rational() == 0);
    CHECK(q_pochhammer(QNumber::exact(Rational(0)), QParam::exact(9, 4), 5).rational() == 1);
    CHECK(q_pochhammer(QNumber::exact(Rational(1, 2)), QParam::exact(1, 2), 2).rational() ==
          Rational(3, 8));
}

TEST_CASE("q-factorial/pochhammer identity [n]_q! (1-q)^n = (q;q)_n") {
    for (long num : {-1L, 0L, 3L, 5L}) {
        const QParam q = QParam::exact(num, 4);
        for (int n = 0; n <= 10; ++n) {
            const Rational lhs =
                q_factorial(n, q).rational() * rational_pow(1 - q.rational(), n);
            const Rational rhs = q_pochhammer(QNumber::exact(q.rational()), q, n).rational();
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("basic numbers are nonnegative for q >= -1") {
    for (long num : {-4L, -2L, 0L, 1L, 4L, 8L}) {
        const QParam q = QParam::exact(num, 4);
        for (long x = 0; x <= 12; ++x) {
            CHECK(basic_number(x, q).rational() >= 0);
        }
    }
}

TEST_CASE("complement identity (1-q)[x]_q + q^x = 1") {
    for (long num : {-3L, -1L, 1L, 3L, 7L}) {
        const QParam q = QParam::exact(num, 2);
        for (long x = -6; x <= 10; ++x) {
            const Rational lhs = (1 - q.rational()) * basic_number(x, q).rational() +
                                 rational_pow(q.rational(), x);
            CHECK(lhs == 1);
        }
    }
}

TEST_CASE("q_exponential basics") {
    const auto one = q_exponential(QExpKind::SmallE, 0.0, QParam::exact(1, 2), 1e-12);
    CHECK(one.value.real() == doctest::Approx(1.0).epsilon(1e-14));

    // brute-force summation oracle
    const auto v = q_exponential(QExpKind::SmallE, 0.5, QParam::floating(0.5), 1e-13);
    const auto oracle = small_e_by_summation(0.5, 0.5, 60);
    CHECK(std::abs(v.value - oracle) < 1e-12);
    CHECK(v.terms > 5);
}

// The two series are dual through e_q(z) = E_{1/q}(-z/q): substituting 1/q
// into (a;q)_k pulls out a factor (-1)^k q^{-k(k+1)/2}, which cancels the
// E-series prefactor only after the argument is rescaled by 1/q.
TEST_CASE("q_exponential duality e_q(z) = E_{1/q}(-z/q)") {
    const double tol = 1e-13;
    const auto lhs = q_exponential(QExpKind::SmallE, 0.3, QParam::floating(0.5), tol);
    const auto rhs = q_exponential(QExpKind::BigE, -0.3 / 0.5, QParam::floating(2.0), tol);
    CHECK(std::abs(lhs.value - rhs.value) <= 2 * tol);

    const std::complex<double> z(0.1, 0.2);
    const auto lhs2 = q_exponential(QExpKind::SmallE, z, QParam::exact(-1, 2), tol);
    const auto rhs2 = q_exponential(QExpKind::BigE, -z / -0.5, QParam::exact(-2), tol);
    CHECK(std::abs(lhs2.value - rhs2.value) <= 2 * tol);

    // the unscaled pairing E_{1/q}(-z) instead matches e_q(qz)
    const auto scaled = q_exponential(QExpKind::SmallE, 0.3 * 0.5, QParam::floating(0.5), tol);
    const auto raw = q_exponential(QExpKind::BigE, -0.3, QParam::floating(2.0), tol);
    CHECK(std::abs(scaled.value - raw.value) <= 2 * tol);
}

TEST_CASE("q_exponential domain and parameter errors") {
    CHECK_THROWS_AS(q_exponential(QExpKind::SmallE, 1.5, QParam::exact(1, 2), 1e-10),
                    std::domain_error);
    CHECK_THROWS_AS(q_exponential(QExpKind::BigE, 0.5, QParam::exact(0), 1e-10),
                    std::domain_error);
    CHECK_THROWS_AS(q_exponential(QExpKind::SmallE, 0.5, QParam::exact(1), 1e-10),
                    std::domain_error);
    CHECK_THROWS_AS(q_exponential(QExpKind::BigE, 0.5, QParam::exact(1), 1e-10),
                    std::domain_error);
    // z on the domain boundary for |q| > 1 under kind E
    CHECK_THROWS_AS(q_exponential(QExpKind::BigE, 1.0, QParam::exact(2), 1e-10),
                    std::domain_error);
    CHECK(classical_exp(std::complex<double>(0.0, 0.0)) == std::complex<double>(1.0, 0.0));
}

TEST_CASE("QParam regimes derive from the value") {
    CHECK(QParam::exact(-3).regime() == Regime::BelowMinusOne);
    CHECK(QParam::exact(-1).regime() == Regime::MinusOne);
    CHECK(QParam::exact(-1, 2).regime() == Regime::MinusOneToZero);
    CHECK(QParam::exact(0).regime() == Regime::Zero);
    CHECK(QParam::exact(1, 2).regime() == Regime::ZeroToOne);
    CHECK(QParam::exact(1).regime() == Regime::One);
    CHECK(QParam::exact(3, 2).regime() == Regime::AboveOne);
    CHECK(QParam::floating(0.25).regime() == Regime::ZeroToOne);
}

TEST_CASE("rational parsing and formatting round trip") {
    CHECK(parse_rational("1/2") == Rational(1, 2));
    CHECK(parse_rational("-7/4") == Rational(-7, 4));
    CHECK(parse_rational("3") == Rational(3));
    CHECK(parse_rational("0.5") == Rational(1, 2));
    CHECK(parse_rational("-0.75") == Rational(-3, 4));
    CHECK(format_rational(Rational(-7, 4)) == "-7/4");
    CHECK(format_rational(Rational(5)) == "5/1");
    CHECK(parse_rational(format_rational(Rational(22, 7))) == Rational(22, 7));
    CHECK_THROWS_AS(parse_rational("a/b"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);

    for (double v : {0.1, -2.5, 1e-17, 3.141592653589793}) {
        CHECK(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("QNumber carries exactness and error bounds") {
    const auto e = QNumber::exact(Rational(3, 4));
    CHECK(e.is_exact());
    CHECK(e.error_bound() == 0.0);
    CHECK(e.value() == 0.75);
    const auto a = QNumber::approx(1.5, 1e-12);
    CHECK(!a.is_exact());
    CHECK(a.error_bound() == 1e-12);
    CHECK_THROWS_AS(a.rational(), std::logic_error);
}
