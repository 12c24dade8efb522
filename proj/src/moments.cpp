#include "qosc/moments.hpp"

#include "qosc/qcalc.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qosc::moments {

namespace {

constexpr double kNodeFloor = -1e-12;

} // namespace

MomentSequence MomentSequence::q_factorials(const QParam& q, int n_max) {
    if (n_max < 0) {
        throw std::invalid_argument("MomentSequence: n_max must be nonnegative");
    }
    MomentSequence b;
    b.provenance_ = Provenance::QFactorial;
    b.q_ = q;
    b.exact_ = q.is_exact();
    if (b.exact_) {
        for (int n = 0; n <= n_max; ++n) {
            b.exact_values_.push_back(qcalc::q_factorial(n, q).rational());
        }
        for (const auto& v : b.exact_values_) {
            b.values_.push_back(to_double(v));
        }
    } else {
        for (int n = 0; n <= n_max; ++n) {
            b.values_.push_back(qcalc::q_factorial(n, q).value());
        }
    }
    b.validate();
    return b;
}

MomentSequence MomentSequence::custom(std::vector<Rational> values) {
    MomentSequence b;
    b.provenance_ = Provenance::Custom;
    b.exact_ = true;
    b.values_.reserve(values.size());
    for (const auto& v : values) {
        b.values_.push_back(to_double(v));
    }
    b.exact_values_ = std::move(values);
    b.validate();
    return b;
}

MomentSequence MomentSequence::custom(std::vector<double> values) {
    MomentSequence b;
    b.provenance_ = Provenance::Custom;
    b.exact_ = false;
    b.values_ = std::move(values);
    b.validate();
    return b;
}

void MomentSequence::validate() const {
    if (values_.empty()) {
        throw std::invalid_argument("MomentSequence: empty sequence");
    }
    const bool positive = exact_ ? (exact_values_[0] > 0) : (values_[0] > 0.0);
    if (!positive) {
        throw std::domain_error("MomentSequence: b_0 must be positive");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const bool neg = exact_ ? (exact_values_[i] < 0) : (values_[i] < 0.0);
        if (neg) {
            throw std::domain_error("MomentSequence: negative entry at index " + std::to_string(i));
        }
    }
}

double MomentSequence::value(int n) const {
    if (n < 0 || n > n_max()) {
        throw std::out_of_range("MomentSequence::value: index out of range");
    }
    return values_[static_cast<std::size_t>(n)];
}

const Rational& MomentSequence::value_exact(int n) const {
    if (!exact_) {
        throw std::logic_error("MomentSequence::value_exact: sequence is in float mode");
    }
    if (n < 0 || n > n_max()) {
        throw std::out_of_range("MomentSequence::value_exact: index out of range");
    }
    return exact_values_[static_cast<std::size_t>(n)];
}

namespace {

Rational exact_det(std::vector<std::vector<Rational>> m) {
    const std::size_t n = m.size();
    Rational det(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m[pivot][col] == 0) {
            ++pivot;
        }
        if (pivot == n) {
            return Rational(0);
        }
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (std::size_t row = col + 1; row < n; ++row) {
            if (m[row][col] == 0) {
                continue;
            }
            const Rational f = m[row][col] / m[col][col];
            for (std::size_t k = col; k < n; ++k) {
                m[row][k] -= f * m[col][k];
            }
        }
    }
    return det;
}

double float_det(const std::vector<std::vector<double>>& m) {
    const int n = static_cast<int>(m.size());
    Eigen::MatrixXd e(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            e(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    return e.determinant();
}

} // namespace

HankelReport hankel_psd_check(const MomentSequence& b, int max_size) {
    if (max_size < 1) {
        throw std::invalid_argument("hankel_psd_check: max_size must be positive");
    }
    if (2 * max_size - 1 > b.n_max()) {
        throw std::invalid_argument("hankel_psd_check: needs moments up to b_{2*max_size-1}");
    }
    HankelReport report;
    report.positive_definite_plain = true;
    report.positive_definite_shifted = true;

    for (int shift = 0; shift <= 1; ++shift) {
        auto& minors = shift == 0 ? report.minors_plain : report.minors_shifted;
        auto& zeros = shift == 0 ? report.zero_minors_plain : report.zero_minors_shifted;
        bool& pd = shift == 0 ? report.positive_definite_plain : report.positive_definite_shifted;
        for (int s = 1; s <= max_size; ++s) {
            if (b.is_exact()) {
                std::vector<std::vector<Rational>> h(static_cast<std::size_t>(s),
                                                     std::vector<Rational>(static_cast<std::size_t>(s)));
                for (int i = 0; i < s; ++i) {
                    for (int j = 0; j < s; ++j) {
                        h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                            b.value_exact(i + j + shift);
                    }
                }
                Rational det = exact_det(std::move(h));
                if (det == 0) {
                    zeros.push_back(s);
                }
                if (det <= 0) {
                    pd = false;
                }
                minors.push_back(QNumber::exact(std::move(det)));
            } else {
                std::vector<std::vector<double>> h(static_cast<std::size_t>(s),
                                                   std::vector<double>(static_cast<std::size_t>(s)));
                for (int i = 0; i < s; ++i) {
                    for (int j = 0; j < s; ++j) {
                        h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                            b.value(i + j + shift);
                    }
                }
                const double det = float_det(h);
                if (det == 0.0) {
                    zeros.push_back(s);
                }
                if (det <= 0.0) {
                    pd = false;
                }
                minors.push_back(QNumber::approx(det, std::abs(det) * 1e-12));
            }
        }
    }
    return report;
}

DiscreteMeasure::DiscreteMeasure(std::vector<double> nodes, std::vector<double> masses)
    : nodes_(std::move(nodes)), masses_(std::move(masses)) {
    if (nodes_.size() != masses_.size() || nodes_.empty()) {
        throw std::invalid_argument("DiscreteMeasure: nodes and masses must match and be nonempty");
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i] < 0.0) {
            throw std::domain_error("DiscreteMeasure: negative node");
        }
        if (!(masses_[i] > 0.0)) {
            throw std::domain_error("DiscreteMeasure: masses must be positive");
        }
        if (i > 0 && !(nodes_[i] > nodes_[i - 1])) {
            throw std::invalid_argument("DiscreteMeasure: nodes must increase strictly");
        }
    }
}

double DiscreteMeasure::moment(int k) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        acc += masses_[i] * std::pow(nodes_[i], k);
    }
    return acc;
}

DiscreteMeasure DiscreteMeasure::with_sqrt_nodes() const {
    std::vector<double> r(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        r[i] = std::sqrt(nodes_[i]);
    }
    return DiscreteMeasure(std::move(r), masses_);
}

namespace {

struct Recurrence {
    std::vector<double> alpha; // diagonal
    std::vector<double> beta;  // beta[0] = b_0, beta[k>=1] off-diagonal squares
    bool reduced = false;
};

// Moment-to-recurrence map (sigma table). Exact arithmetic when the input is
// exact; a vanishing sigma_{k,k} means the measure has only k atoms.
template <typename T>
Recurrence chebyshev_recurrence(const std::vector<T>& m, int n_nodes) {
    const int two_n = 2 * n_nodes;
    std::vector<T> prev(static_cast<std::size_t>(two_n), T(0)); // sigma_{k-2}
    std::vector<T> curr;                                        // sigma_{k-1}
    curr.assign(m.begin(), m.begin() + two_n);                  // sigma_0 = moments

    Recurrence rec;
    rec.alpha.reserve(static_cast<std::size_t>(n_nodes));
    rec.beta.reserve(static_cast<std::size_t>(n_nodes));

    std::vector<T> alpha_t, beta_t;
    alpha_t.push_back(curr[1] / curr[0]);
    beta_t.push_back(curr[0]);

    for (int k = 1; k < n_nodes; ++k) {
        std::vector<T> next(static_cast<std::size_t>(two_n), T(0));
        for (int l = k; l <= two_n - k - 1; ++l) {
            T v = curr[static_cast<std::size_t>(l + 1)] -
                  alpha_t[static_cast<std::size_t>(k - 1)] * curr[static_cast<std::size_t>(l)];
            if (k >= 2) {
                v -= beta_t[static_cast<std::size_t>(k - 1)] * prev[static_cast<std::size_t>(l)];
            }
            next[static_cast<std::size_t>(l)] = v;
        }
        const T& skk = next[static_cast<std::size_t>(k)];
        if (skk == T(0)) {
            rec.reduced = true;
            break;
        }
        if (skk < T(0)) {
            throw std::domain_error(
                "quadrature_from_moments: Hankel form not positive (not a moment sequence)");
        }
        alpha_t.push_back(next[static_cast<std::size_t>(k + 1)] / skk -
                          curr[static_cast<std::size_t>(k)] / curr[static_cast<std::size_t>(k - 1)]);
        beta_t.push_back(skk / curr[static_cast<std::size_t>(k - 1)]);
        prev = std::move(curr);
        curr = std::move(next);
    }

    for (const T& a : alpha_t) {
        if constexpr (std::is_same_v<T, Rational>) {
            rec.alpha.push_back(to_double(a));
        } else {
            rec.alpha.push_back(a);
        }
    }
    for (const T& b : beta_t) {
        if constexpr (std::is_same_v<T, Rational>) {
            rec.beta.push_back(to_double(b));
        } else {
            rec.beta.push_back(b);
        }
    }
    return rec;
}

} // namespace

QuadratureResult quadrature_from_moments(const MomentSequence& b, int n_nodes) {
    if (n_nodes < 1) {
        throw std::invalid_argument("quadrature_from_moments: n_nodes must be positive");
    }
    if (2 * n_nodes - 1 > b.n_max()) {
        throw std::invalid_argument("quadrature_from_moments: needs moments up to b_{2*n_nodes-1}");
    }

    Recurrence rec;
    if (b.is_exact()) {
        std::vector<Rational> m;
        for (int n = 0; n < 2 * n_nodes; ++n) {
            m.push_back(b.value_exact(n));
        }
        rec = chebyshev_recurrence<Rational>(m, n_nodes);
    } else {
        std::vector<double> m;
        for (int n = 0; n < 2 * n_nodes; ++n) {
            m.push_back(b.value(n));
        }
        rec = chebyshev_recurrence<double>(m, n_nodes);
    }

    const int k = static_cast<int>(rec.alpha.size());
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
        jacobi(i, i) = rec.alpha[static_cast<std::size_t>(i)];
        if (i + 1 < k) {
            const double off = std::sqrt(rec.beta[static_cast<std::size_t>(i + 1)]);
            jacobi(i, i + 1) = off;
            jacobi(i + 1, i) = off;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
    std::vector<double> nodes(static_cast<std::size_t>(k));
    std::vector<double> masses(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        double node = es.eigenvalues()(i);
        if (node < kNodeFloor) {
            throw std::domain_error(
                "quadrature_from_moments: negative node; input is not a Stieltjes sequence");
        }
        nodes[static_cast<std::size_t>(i)] = std::max(node, 0.0);
        const double v0 = es.eigenvectors()(0, i);
        masses[static_cast<std::size_t>(i)] = b.value(0) * v0 * v0;
    }
    return {DiscreteMeasure(std::move(nodes), std::move(masses)), rec.reduced};
}

double equispaced_phase_average(int diff, int points) {
    if (points < 1) {
        throw std::invalid_argument("equispaced_phase_average: points must be positive");
    }
    const int r = diff % points;
    return r == 0 ? 1.0 : 0.0;
}

double radial_lift_verify(const QParam& q, const RadialMeasure& mu, int n_max) {
    if (n_max < 0) {
        throw std::invalid_argument("radial_lift_verify: n_max must be nonnegative");
    }
    if (mu.angular_points < 2 * n_max + 1) {
        throw std::invalid_argument(
            "radial_lift_verify: insufficient angular points for the requested degree");
    }
    double dev = 0.0;
    for (int m = 0; m <= n_max; ++m) {
        for (int n = 0; n <= n_max; ++n) {
            const double avg = equispaced_phase_average(m - n, mu.angular_points);
            double gram = 0.0;
            if (avg != 0.0) {
                for (int i = 0; i < mu.radial.atoms(); ++i) {
                    gram += mu.radial.masses()[static_cast<std::size_t>(i)] *
                            std::pow(mu.radial.nodes()[static_cast<std::size_t>(i)], m + n) * avg;
                }
            }
            const double target = m == n ? qcalc::q_factorial(m, q).value() : 0.0;
            dev = std::max(dev, std::abs(gram - target));
        }
    }
    return dev;
}

double radial_lift_verify(const QParam& q, const DiscreteMeasure& radial, int n_max) {
    return radial_lift_verify(q, RadialMeasure{radial, 2 * n_max + 1}, n_max);
}

KernelCoefficients kernel_coefficients(const QParam& q, int n_max) {
    const Regime regime = q.regime();
    if (regime != Regime::ZeroToOne && regime != Regime::One && regime != Regime::AboveOne) {
        throw std::domain_error("kernel_coefficients: requires q > 0");
    }
    if (n_max < 0) {
        throw std::invalid_argument("kernel_coefficients: n_max must be nonnegative");
    }
    KernelCoefficients kc;
    for (int n = 0; n <= n_max; ++n) {
        if (q.is_exact()) {
            kc.c.push_back(QNumber::exact(Rational(1) / qcalc::q_factorial(n, q).rational()));
        } else {
            const double f = qcalc::q_factorial(n, q).value();
            kc.c.push_back(QNumber::approx(1.0 / f, std::abs(1.0 / f) * 1e-14));
        }
    }
    kc.radius = regime == Regime::ZeroToOne
                    ? 1.0 / std::sqrt(std::abs(1.0 - q.value()))
                    : std::numeric_limits<double>::infinity();
    return kc;
}

Polynomial m_apply(const Polynomial& f) {
    if (f.is_zero()) {
        return f;
    }
    std::vector<std::complex<double>> c(static_cast<std::size_t>(f.degree()) + 2);
    for (int n = 0; n <= f.degree(); ++n) {
        c[static_cast<std::size_t>(n + 1)] = f.coeff(n);
    }
    return Polynomial(std::move(c));
}

RationalPolynomial m_apply(const RationalPolynomial& f) {
    if (f.is_zero()) {
        return f;
    }
    std::vector<Rational> c(static_cast<std::size_t>(f.degree()) + 2);
    for (int n = 0; n <= f.degree(); ++n) {
        c[static_cast<std::size_t>(n + 1)] = f.coeff(n);
    }
    return RationalPolynomial(std::move(c));
}

Polynomial dq_apply(const Polynomial& f, const QParam& q) {
    if (f.degree() < 1) {
        return Polynomial();
    }
    std::vector<std::complex<double>> c(static_cast<std::size_t>(f.degree()));
    for (int n = 1; n <= f.degree(); ++n) {
        c[static_cast<std::size_t>(n - 1)] = qcalc::basic_number(n, q).value() * f.coeff(n);
    }
    return Polynomial(std::move(c));
}

RationalPolynomial dq_apply(const RationalPolynomial& f, const QParam& q) {
    if (f.degree() < 1) {
        return RationalPolynomial();
    }
    std::vector<Rational> c(static_cast<std::size_t>(f.degree()));
    for (int n = 1; n <= f.degree(); ++n) {
        c[static_cast<std::size_t>(n - 1)] = qcalc::basic_number(n, q).rational() * f.coeff(n);
    }
    return RationalPolynomial(std::move(c));
}

QNumber poly_ccr_residual(const QParam& q, int n_max) {
    if (n_max < 0) {
        throw std::invalid_argument("poly_ccr_residual: n_max must be nonnegative");
    }
    if (q.is_exact()) {
        Rational max_dev(0);
        for (int n = 0; n <= n_max; ++n) {
            const auto zn = RationalPolynomial::monomial(n);
            const auto lhs = dq_apply(m_apply(zn), q);
            const auto rhs = dq_apply(zn, q);
            const int deg = std::max({lhs.degree(), n, rhs.degree() + 1});
            for (int t = 0; t <= deg; ++t) {
                Rational d = lhs.coeff(t) - q.rational() * (t >= 1 ? rhs.coeff(t - 1) : Rational(0)) -
                             zn.coeff(t);
                if (d < 0) {
                    d = -d;
                }
                if (d > max_dev) {
                    max_dev = d;
                }
            }
        }
        return QNumber::exact(max_dev);
    }
    double max_dev = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        const auto zn = Polynomial::monomial(n);
        const auto lhs = dq_apply(m_apply(zn), q);
        const auto mdq = m_apply(dq_apply(zn, q));
        const int deg = std::max({lhs.degree(), mdq.degree(), n});
        for (int t = 0; t <= deg; ++t) {
            const std::complex<double> d = lhs.coeff(t) - q.value() * mdq.coeff(t) - zn.coeff(t);
            max_dev = std::max(max_dev, std::abs(d));
        }
    }
    return QNumber::approx(max_dev, 1e-14);
}

namespace {

// <f, g> = sum_n conj(f_n) g_n [n]_q! under the diagonal Gram of monomials.
Rational gram_inner(const RationalPolynomial& f, const RationalPolynomial& g, const QParam& q) {
    Rational acc(0);
    const int deg = std::min(f.degree(), g.degree());
    for (int n = 0; n <= deg; ++n) {
        acc += f.coeff(n) * g.coeff(n) * qcalc::q_factorial(n, q).rational();
    }
    return acc;
}

std::complex<double> gram_inner(const Polynomial& f, const Polynomial& g, const QParam& q) {
    std::complex<double> acc = 0.0;
    const int deg = std::min(f.degree(), g.degree());
    for (int n = 0; n <= deg; ++n) {
        acc += std::conj(f.coeff(n)) * g.coeff(n) * qcalc::q_factorial(n, q).value();
    }
    return acc;
}

} // namespace

QNumber adjointness_check(const QParam& q, int n_max) {
    if (n_max < 0) {
        throw std::invalid_argument("adjointness_check: n_max must be nonnegative");
    }
    const Regime regime = q.regime();
    if (regime != Regime::ZeroToOne && regime != Regime::One && regime != Regime::AboveOne) {
        throw std::domain_error("adjointness_check: requires q > 0");
    }
    if (q.is_exact()) {
        Rational max_dev(0);
        for (int a = 0; a <= n_max; ++a) {
            const auto za = RationalPolynomial::monomial(a);
            const auto mza = m_apply(za);
            for (int b = 0; b <= n_max; ++b) {
                const auto zb = RationalPolynomial::monomial(b);
                Rational d = gram_inner(mza, zb, q) - gram_inner(za, dq_apply(zb, q), q);
                if (d < 0) {
                    d = -d;
                }
                if (d > max_dev) {
                    max_dev = d;
                }
            }
        }
        return QNumber::exact(max_dev);
    }
    double max_dev = 0.0;
    for (int a = 0; a <= n_max; ++a) {
        const auto za = Polynomial::monomial(a);
        const auto mza = m_apply(za);
        for (int b = 0; b <= n_max; ++b) {
            const auto zb = Polynomial::monomial(b);
            const auto d = gram_inner(mza, zb, q) - gram_inner(za, dq_apply(zb, q), q);
            max_dev = std::max(max_dev, std::abs(d));
        }
    }
    return QNumber::approx(max_dev, 1e-14);
}

} // namespace qosc::moments
