#include "qosc/qcalc.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace qosc::qcalc {

namespace {

constexpr double kNearOneSwitch = 1e-8;
constexpr int kMaxSeriesTerms = 1000000;

double approx_error(double value, const QParam& q) {
    const double tol = q.tolerance() > 0.0 ? q.tolerance() : QParam::kDefaultTolerance;
    return std::max(std::abs(value), 1.0) * tol;
}

} // namespace

QNumber basic_number(long x, const QParam& q) {
    if (q.is_exact()) {
        const Rational& qv = q.rational();
        if (qv == 1) {
            return QNumber::exact(Rational(x));
        }
        if (qv == 0 && x < 0) {
            throw std::domain_error("basic_number: q = 0 with negative x is a pole");
        }
        Rational qx = rational_pow(qv, x);
        return QNumber::exact((1 - qx) / (1 - qv));
    }
    const double qv = q.value();
    if (qv == 1.0) {
        return QNumber::approx(static_cast<double>(x), 0.0);
    }
    if (qv == 0.0 && x < 0) {
        throw std::domain_error("basic_number: q = 0 with negative x is a pole");
    }
    // Near q = 1 the rational form cancels catastrophically; fall back to the
    // finite geometric sum for x >= 0 and extended precision for x < 0.
    if (std::abs(1.0 - qv) < kNearOneSwitch) {
        if (x >= 0) {
            double sum = 0.0;
            double p = 1.0;
            for (long k = 0; k < x; ++k) {
                sum += p;
                p *= qv;
            }
            return QNumber::approx(sum, approx_error(sum, q));
        }
        const long double ql = static_cast<long double>(qv);
        const long double v = (1.0L - std::pow(ql, static_cast<long double>(x))) / (1.0L - ql);
        return QNumber::approx(static_cast<double>(v), approx_error(static_cast<double>(v), q));
    }
    const double v = (1.0 - std::pow(qv, static_cast<double>(x))) / (1.0 - qv);
    return QNumber::approx(v, approx_error(v, q));
}

QNumber q_factorial(int n, const QParam& q) {
    if (n < 0) {
        throw std::invalid_argument("q_factorial: n must be nonnegative");
    }
    if (q.is_exact()) {
        Rational acc(1);
        for (int k = 1; k <= n; ++k) {
            acc *= basic_number(k, q).rational();
        }
        return QNumber::exact(acc);
    }
    double acc = 1.0;
    for (int k = 1; k <= n; ++k) {
        acc *= basic_number(k, q).value();
    }
    return QNumber::approx(acc, approx_error(acc, q));
}

QNumber q_binomial(int m, long n, const QParam& q) {
    if (m < 0) {
        throw std::invalid_argument("q_binomial: m must be nonnegative");
    }
    if (n < 0 || n > m) {
        return q.is_exact() ? QNumber::exact(Rational(0)) : QNumber::approx(0.0, 0.0);
    }
    const int nn = static_cast<int>(n);
    if (q.is_exact()) {
        const Rational& qv = q.rational();
        std::vector<Rational> qpow(nn + 1);
        qpow[0] = 1;
        for (int j = 1; j <= nn; ++j) {
            qpow[j] = qpow[j - 1] * qv;
        }
        std::vector<Rational> row(nn + 1);
        row[0] = 1;
        for (int mm = 1; mm <= m; ++mm) {
            for (int j = std::min(nn, mm); j >= 1; --j) {
                row[j] = row[j - 1] + qpow[j] * row[j];
            }
        }
        return QNumber::exact(row[nn]);
    }
    const double qv = q.value();
    std::vector<double> qpow(nn + 1);
    qpow[0] = 1.0;
    for (int j = 1; j <= nn; ++j) {
        qpow[j] = qpow[j - 1] * qv;
    }
    std::vector<double> row(nn + 1, 0.0);
    row[0] = 1.0;
    for (int mm = 1; mm <= m; ++mm) {
        for (int j = std::min(nn, mm); j >= 1; --j) {
            row[j] = row[j - 1] + qpow[j] * row[j];
        }
    }
    return QNumber::approx(row[nn], approx_error(row[nn], q));
}

QNumber q_pochhammer(const QNumber& a, const QParam& q, int k) {
    if (k < 0) {
        throw std::invalid_argument("q_pochhammer: k must be nonnegative");
    }
    if (q.is_exact() && a.is_exact()) {
        const Rational& qv = q.rational();
        const Rational& av = a.rational();
        Rational acc(1);
        Rational qp(1);
        for (int i = 0; i < k; ++i) {
            acc *= (1 - av * qp);
            qp *= qv;
        }
        return QNumber::exact(acc);
    }
    const double qv = q.value();
    const double av = a.value();
    double acc = 1.0;
    double qp = 1.0;
    for (int i = 0; i < k; ++i) {
        acc *= (1.0 - av * qp);
        qp *= qv;
    }
    return QNumber::approx(acc, approx_error(acc, q));
}

bool q_exponential_in_domain(QExpKind kind, std::complex<double> z, const QParam& q) {
    const double aq = std::abs(q.value());
    if (kind == QExpKind::SmallE) {
        return aq < 1.0 ? std::abs(z) < 1.0 : true;
    }
    // omega_{1/q}: the unit disc when |1/q| < 1, i.e. |q| > 1.
    return aq > 1.0 ? std::abs(z) < 1.0 : true;
}

QExpValue q_exponential(QExpKind kind, std::complex<double> z, const QParam& q, double tol) {
    if (!(tol > 0.0)) {
        throw std::invalid_argument("q_exponential: tol must be positive");
    }
    const double qv = q.value();
    if (qv == 1.0) {
        throw std::domain_error("q_exponential: q = 1 is a pole of (q;q)_k; use classical_exp");
    }
    if (kind == QExpKind::BigE && qv == 0.0) {
        throw std::domain_error("q_exponential: kind E requires q != 0");
    }
    if (!q_exponential_in_domain(kind, z, q)) {
        throw std::domain_error("q_exponential: z outside the series domain");
    }

    std::complex<double> sum = 0.0;
    std::complex<double> term = 1.0; // k = 0
    double qk = 1.0;                 // q^k while computing term k+1
    int terms = 0;
    for (;;) {
        sum += term;
        ++terms;
        if (terms >= kMaxSeriesTerms) {
            throw std::runtime_error("q_exponential: series did not converge within term cap");
        }
        qk *= qv; // now q^{terms}
        const double denom = 1.0 - qk;
        if (denom == 0.0) {
            throw std::domain_error("q_exponential: (q;q)_k vanishes at this q; series undefined");
        }
        std::complex<double> next = term * z / denom;
        if (kind == QExpKind::BigE) {
            next *= qk / qv; // extra factor q^{k-1} for term k
        }
        if (std::abs(next) < tol * std::max(1.0, std::abs(sum))) {
            sum += next;
            ++terms;
            return {sum, terms};
        }
        term = next;
    }
}

std::complex<double> classical_exp(std::complex<double> z) {
    return std::exp(z);
}

} // namespace qosc::qcalc
