#pragma once

#include "qosc/qparam.hpp"

#include <complex>

namespace qosc::qcalc {

/// Basic number [x]_q = (1 - q^x)/(1 - q), with [x]_1 = x. x may be negative;
/// q = 0 with negative x is a pole of the formula and is rejected.
QNumber basic_number(long x, const QParam& q);

/// [n]_q! = [1]_q [2]_q ... [n]_q, with [0]_q! = 1.
QNumber q_factorial(int n, const QParam& q);

/// Gaussian binomial, evaluated through the addition-only recurrence
///   binom(m, n) = binom(m-1, n-1) + q^n binom(m-1, n),
/// which is a polynomial in q and therefore valid at every parameter value.
/// Agrees with [m]_q! / ([m-n]_q! [n]_q!) wherever that quotient is defined;
/// 0 whenever n < 0 or n > m.
QNumber q_binomial(int m, long n, const QParam& q);

/// (a; q)_k = (1 - a)(1 - aq) ... (1 - aq^{k-1}), with (a; q)_0 = 1.
QNumber q_pochhammer(const QNumber& a, const QParam& q, int k);

enum class QExpKind {
    SmallE, // e_q(z) = sum z^k / (q;q)_k           on omega_q
    BigE,   // E_q(z) = sum q^{k(k-1)/2} z^k/(q;q)_k on omega_{1/q}, q != 0
};

struct QExpValue {
    std::complex<double> value;
    int terms;
};

/// Partial summation of the chosen q-exponential series, stopping when the
/// next term falls below tol * max(1, |partial sum|). Capped at 1e6 terms;
/// hitting the cap reports non-convergence instead of returning a value.
/// q = 1 is refused for both kinds (the series coefficients are poles there);
/// the classical exponential is served by classical_exp instead.
QExpValue q_exponential(QExpKind kind, std::complex<double> z, const QParam& q, double tol);

/// Whether z lies in the declared convergence domain of the chosen series.
bool q_exponential_in_domain(QExpKind kind, std::complex<double> z, const QParam& q);

/// The q = 1 branch, kept separate from the series evaluations.
std::complex<double> classical_exp(std::complex<double> z);

} // namespace qosc::qcalc
