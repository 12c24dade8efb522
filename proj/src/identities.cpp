#include "qosc/identities.hpp"

#include "qosc/pathcoeff.hpp"
#include "qosc/qcalc.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <stdexcept>

namespace qosc::identities {

using shiftops::PathCoefficient;
using shiftops::ShiftDirection;
using shiftops::ShiftKind;
using shiftops::WeightProvenance;
using shiftops::WeightSequence;

namespace {

constexpr double kEigenFloor = 1e-12;

double uniform_pm1(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * (2.0 / 9007199254740992.0) - 1.0;
}

std::vector<Eigen::MatrixXcd> matrix_powers(const Eigen::MatrixXcd& a, int t_max) {
    std::vector<Eigen::MatrixXcd> pows;
    pows.reserve(static_cast<std::size_t>(t_max) + 1);
    pows.push_back(Eigen::MatrixXcd::Identity(a.rows(), a.cols()));
    for (int t = 1; t <= t_max; ++t) {
        pows.push_back(pows.back() * a);
    }
    return pows;
}

IndexWindow x5_columns(const TruncatedOperator& S, int i, int j) {
    const bool bilateral =
        S.has_weights() && S.weights().kind() == ShiftKind::Bilateral;
    IndexWindow win;
    win.lo = S.index_origin() + (bilateral ? i + j : 0);
    win.hi = S.index_top() - (i + j);
    return win;
}

// Exact traversal state: a basis index and the accumulated coefficient.
struct PathState {
    int index;
    PathCoefficient coeff;
};

class ExactShiftWord {
public:
    ExactShiftWord(const WeightSequence& w, const Rational& q, int origin, int top)
        : w_(w), q_(q), origin_(origin), top_(top) {}

    void ascend(PathState& s) const { // apply S
        if (s.coeff.is_zero()) {
            ++s.index;
            return;
        }
        if (s.index > top_ - 1) {
            throw std::logic_error("x5 exact path: ascended past the truncation boundary");
        }
        s.coeff.mul_weight(s.index, w_.sq_exact(s.index));
        ++s.index;
    }

    void descend(PathState& s) const { // apply S*
        if (s.index == origin_) {
            // genuine bottom of a unilateral shift
            s.coeff = PathCoefficient::zero();
            return;
        }
        if (!s.coeff.is_zero()) {
            s.coeff.mul_weight(s.index - 1, w_.sq_exact(s.index - 1));
        }
        --s.index;
    }

    void selfcommutator_power(PathState& s, int k) const { // apply C^k
        if (k == 0 || s.coeff.is_zero()) {
            return;
        }
        const Rational b = (s.index == origin_) ? Rational(0) : w_.sq_exact(s.index - 1);
        const Rational c = 1 + (q_ - 1) * b;
        Rational ck(1);
        for (int t = 0; t < k; ++t) {
            ck *= c;
        }
        s.coeff.mul_rational(ck);
    }

private:
    const WeightSequence& w_;
    const Rational& q_;
    int origin_;
    int top_;
};

X5Result x5_exact(const TruncatedOperator& S, const QParam& q, int i, int j, IndexWindow win) {
    const WeightSequence& w = S.weights();
    const Rational& qv = q.rational();
    ExactShiftWord word(w, qv, S.index_origin(), S.index_top());
    const int kmax = std::min(i, j);

    std::vector<Rational> coef(static_cast<std::size_t>(kmax) + 1);
    for (int k = 0; k <= kmax; ++k) {
        coef[static_cast<std::size_t>(k)] = qcalc::q_factorial(k, q).rational() *
                                            qcalc::q_binomial(i, k, q).rational() *
                                            qcalc::q_binomial(j, k, q).rational();
    }

    Rational max_sq(0);
    for (int n = win.lo; n <= win.hi; ++n) {
        PathState lhs{n, PathCoefficient::one()};
        for (int t = 0; t < j; ++t) {
            word.ascend(lhs);
        }
        for (int t = 0; t < i; ++t) {
            word.descend(lhs);
        }

        PathCoefficient rhs = PathCoefficient::zero();
        for (int k = 0; k <= kmax; ++k) {
            PathState term{n, PathCoefficient::one()};
            for (int t = 0; t < i - k; ++t) {
                word.descend(term);
            }
            word.selfcommutator_power(term, k);
            for (int t = 0; t < j - k; ++t) {
                word.ascend(term);
            }
            term.coeff.mul_rational(coef[static_cast<std::size_t>(k)]);
            rhs.add(term.coeff);
        }

        PathCoefficient diff = lhs.coeff;
        diff.sub(rhs);
        Rational sq = diff.abs_squared();
        if (sq > max_sq) {
            max_sq = sq;
        }
    }
    return {std::sqrt(to_double(max_sq)), true, win};
}

X5Result x5_float(const TruncatedOperator& S, const QParam& q, int i, int j, IndexWindow win) {
    const auto& a = S.entries();
    const Eigen::MatrixXcd ad = a.adjoint();
    const int kmax = std::min(i, j);
    const auto spow = matrix_powers(a, j);
    const auto sadpow = matrix_powers(ad, i);
    const Eigen::MatrixXcd c =
        Eigen::MatrixXcd::Identity(S.dim(), S.dim()) + (q.value() - 1.0) * (a * ad);
    const auto cpow = matrix_powers(c, kmax);

    Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(S.dim(), S.dim());
    for (int k = 0; k <= kmax; ++k) {
        const double coef = qcalc::q_factorial(k, q).value() * qcalc::q_binomial(i, k, q).value() *
                            qcalc::q_binomial(j, k, q).value();
        rhs += coef * (spow[static_cast<std::size_t>(j - k)] * cpow[static_cast<std::size_t>(k)] *
                       sadpow[static_cast<std::size_t>(i - k)]);
    }
    const Eigen::MatrixXcd lhs =
        sadpow[static_cast<std::size_t>(i)] * spow[static_cast<std::size_t>(j)];
    const Eigen::MatrixXcd diff = lhs - rhs;
    // Columns grow like powers of the weights for q > 1, so the float
    // residual is measured relative to the column scale (floored at 1);
    // for the bounded regimes this coincides with the absolute residual.
    double best = 0.0;
    for (int n = win.lo; n <= win.hi; ++n) {
        const double scale = std::max(1.0, lhs.col(S.col_of(n)).norm());
        best = std::max(best, diff.col(S.col_of(n)).norm() / scale);
    }
    return {best, false, win};
}

bool is_canonical_forward(const TruncatedOperator& S) {
    return S.has_weights() && S.weights().direction() == ShiftDirection::Forward &&
           S.weights().provenance().tag == WeightProvenance::Tag::Canonical;
}

// Principal square root of the positive part of C, restricted to the interior
// of S. Canonical shifts use the closed-form diagonal q^{n/2}; everything else
// goes through a Hermitian eigendecomposition with the [-1e-12, 0) floor.
Eigen::MatrixXcd selfcommutator_sqrt(const TruncatedOperator& S, const QParam& q) {
    const int d = S.dim();
    if (is_canonical_forward(S) && q.value() >= 0.0) {
        Eigen::MatrixXcd chalf = Eigen::MatrixXcd::Zero(d, d);
        for (int n = 0; n < d; ++n) {
            chalf(n, n) = std::pow(q.value(), 0.5 * n);
        }
        return chalf;
    }
    const auto& a = S.entries();
    const Eigen::MatrixXcd c =
        Eigen::MatrixXcd::Identity(d, d) + (q.value() - 1.0) * (a * a.adjoint());
    const IndexWindow win = S.interior();
    if (win.empty()) {
        throw std::domain_error("selfcommutator_sqrt: empty interior");
    }
    const int lo = S.col_of(win.lo);
    const int m = win.size();
    const Eigen::MatrixXcd sub = c.block(lo, lo, m, m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((sub + sub.adjoint()) / 2.0);
    Eigen::VectorXd lam = es.eigenvalues();
    for (int t = 0; t < m; ++t) {
        if (lam(t) < -kEigenFloor) {
            throw std::domain_error(
                "selfcommutator_sqrt: C has a negative interior eigenvalue (hypothesis fails)");
        }
        lam(t) = std::max(lam(t), 0.0);
    }
    Eigen::MatrixXcd chalf = Eigen::MatrixXcd::Zero(d, d);
    chalf.block(lo, lo, m, m) = es.eigenvectors() *
                                lam.cwiseSqrt().asDiagonal() *
                                es.eigenvectors().adjoint();
    return chalf;
}

int max_support_index(const TruncatedOperator& S, const Eigen::VectorXcd& f) {
    int top = -1;
    for (int r = 0; r < f.size(); ++r) {
        if (f(r) != std::complex<double>(0.0, 0.0)) {
            top = r;
        }
    }
    return top < 0 ? top : S.index_origin() + top;
}

} // namespace

X5Result verify_x5(const TruncatedOperator& S, const QParam& q, int i, int j) {
    if (i < 0 || j < 0) {
        throw std::invalid_argument("verify_x5: powers must be nonnegative");
    }
    const IndexWindow win = x5_columns(S, i, j);
    if (win.empty()) {
        throw std::domain_error("verify_x5: interior exhausted for the requested powers");
    }
    if (S.has_weights() && S.weights().direction() == ShiftDirection::Forward &&
        S.weights().is_exact() && q.is_exact()) {
        return x5_exact(S, q, i, j, win);
    }
    return x5_float(S, q, i, j, win);
}

double verify_x8(const TruncatedOperator& S, const QParam& q,
                 const std::vector<Eigen::VectorXcd>& family, int p) {
    if (p < 0) {
        throw std::invalid_argument("verify_x8: p must be nonnegative");
    }
    if (family.size() != static_cast<std::size_t>(p) + 1) {
        throw std::invalid_argument("verify_x8: family must have p+1 vectors");
    }
    for (const auto& f : family) {
        if (f.size() != S.dim()) {
            throw std::invalid_argument("verify_x8: family vector has wrong dimension");
        }
        const int top = max_support_index(S, f);
        if (top >= 0 && top + p > S.index_top()) {
            throw std::invalid_argument(
                "verify_x8: family support too close to the truncation boundary");
        }
    }

    const auto& a = S.entries();
    const auto spow = matrix_powers(a, p);
    const auto sadpow = matrix_powers(a.adjoint(), p);

    std::complex<double> lhs = 0.0;
    for (int i = 0; i <= p; ++i) {
        for (int j = 0; j <= p; ++j) {
            const Eigen::VectorXcd u = spow[static_cast<std::size_t>(i)] *
                                       family[static_cast<std::size_t>(j)];
            const Eigen::VectorXcd v = spow[static_cast<std::size_t>(j)] *
                                       family[static_cast<std::size_t>(i)];
            lhs += v.dot(u); // <u, v> with the first slot linear
        }
    }

    const Eigen::MatrixXcd chalf = selfcommutator_sqrt(S, q);
    const auto chalf_pow = matrix_powers(chalf, p);
    double rhs = 0.0;
    for (int k = 0; k <= p; ++k) {
        Eigen::VectorXcd g = Eigen::VectorXcd::Zero(S.dim());
        for (int i = k; i <= p; ++i) {
            const double b = qcalc::q_binomial(i, k, q).value();
            g += b * (chalf_pow[static_cast<std::size_t>(k)] *
                      (sadpow[static_cast<std::size_t>(i - k)] * family[static_cast<std::size_t>(i)]));
        }
        rhs += qcalc::q_factorial(k, q).value() * g.squaredNorm();
    }
    return std::abs(lhs - std::complex<double>(rhs, 0.0));
}

FormResult halmos_bram_form(const TruncatedOperator& S, int p, int d_sub) {
    if (p < 0 || d_sub < 1) {
        throw std::invalid_argument("halmos_bram_form: need p >= 0 and d_sub >= 1");
    }
    const IndexWindow interior = S.interior();
    if (interior.empty() || S.index_origin() + d_sub - 1 + p > interior.hi) {
        throw std::domain_error("halmos_bram_form: interior exhausted for the requested family");
    }
    const auto spow = matrix_powers(S.entries(), p);
    const int rows = (p + 1) * d_sub;
    HermitianForm h;
    h.p = p;
    h.d_sub = d_sub;
    h.label = "PD(" + S.label() + ")";
    h.entries = Eigen::MatrixXcd(rows, rows);
    for (int i = 0; i <= p; ++i) {
        for (int a = 0; a < d_sub; ++a) {
            for (int j = 0; j <= p; ++j) {
                for (int b = 0; b < d_sub; ++b) {
                    // <S^i e_b, S^j e_a>, first slot linear
                    const std::complex<double> val =
                        spow[static_cast<std::size_t>(j)].col(a).dot(
                            spow[static_cast<std::size_t>(i)].col(b));
                    h.entries(h.index_of(i, a), h.index_of(j, b)) = val;
                }
            }
        }
    }
    const double herm_dev = (h.entries - h.entries.adjoint()).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, h.entries.cwiseAbs().maxCoeff());
    if (herm_dev > 1e-12 * scale) {
        throw std::logic_error("halmos_bram_form: form is not Hermitian within tolerance");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((h.entries + h.entries.adjoint()) / 2.0);
    return {std::move(h), es.eigenvalues().minCoeff()};
}

double form_value(const HermitianForm& h, const std::vector<Eigen::VectorXcd>& family) {
    if (family.size() != static_cast<std::size_t>(h.p) + 1) {
        throw std::invalid_argument("form_value: family size must be p+1");
    }
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(h.entries.rows());
    for (int i = 0; i <= h.p; ++i) {
        const auto& f = family[static_cast<std::size_t>(i)];
        for (int b = 0; b < h.d_sub; ++b) {
            v(h.index_of(i, b)) = b < f.size() ? f(b) : std::complex<double>(0.0);
        }
    }
    const std::complex<double> val = v.dot(h.entries * v);
    return val.real();
}

std::vector<Eigen::VectorXcd> seeded_family(const TruncatedOperator& S, int p, int support_dim,
                                            std::uint64_t seed) {
    if (support_dim < 1 || support_dim > S.dim()) {
        throw std::invalid_argument("seeded_family: bad support dimension");
    }
    std::mt19937_64 rng(seed);
    std::vector<Eigen::VectorXcd> family;
    family.reserve(static_cast<std::size_t>(p) + 1);
    for (int i = 0; i <= p; ++i) {
        Eigen::VectorXcd f = Eigen::VectorXcd::Zero(S.dim());
        for (int b = 0; b < support_dim; ++b) {
            f(b) = std::complex<double>(uniform_pm1(rng), uniform_pm1(rng));
        }
        family.push_back(std::move(f));
    }
    return family;
}

} // namespace qosc::identities
