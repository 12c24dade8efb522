#include "qosc/shiftops.hpp"

#include "qosc/qcalc.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <random>
#include <stdexcept>

namespace qosc::shiftops {

namespace {

Eigen::MatrixXcd identity_like(int d) {
    return Eigen::MatrixXcd::Identity(d, d);
}

double column_norm(const Eigen::MatrixXcd& m, int col) {
    return m.col(col).norm();
}

// Uniform in [-1, 1), bit-stable across platforms.
double uniform_pm1(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * (2.0 / 9007199254740992.0) - 1.0;
}

} // namespace

TruncatedOperator::TruncatedOperator(Eigen::MatrixXcd entries, int index_origin,
                                     IndexWindow interior, std::string label)
    : entries_(std::move(entries)), index_origin_(index_origin), interior_(interior),
      label_(std::move(label)) {
    if (entries_.rows() != entries_.cols()) {
        throw std::invalid_argument("TruncatedOperator: matrix must be square");
    }
    if (!interior_.empty() &&
        (interior_.lo < index_origin_ || interior_.hi > index_origin_ + dim() - 1)) {
        throw std::invalid_argument("TruncatedOperator: interior outside the index range");
    }
}

TruncatedOperator TruncatedOperator::adjoint() const {
    return TruncatedOperator(entries_.adjoint(), index_origin_, interior_, label_ + "^*");
}

const WeightSequence& TruncatedOperator::weights() const {
    if (!weights_) {
        throw std::logic_error("TruncatedOperator::weights: no weight provenance attached");
    }
    return *weights_;
}

TruncatedOperator build_shift(const WeightSequence& w, int d) {
    if (d < 1) {
        throw std::invalid_argument("build_shift: dimension must be positive");
    }
    if (d > w.size()) {
        throw std::invalid_argument("build_shift: dimension exceeds available weights");
    }
    const int o = w.index_low();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    IndexWindow interior;
    if (w.direction() == ShiftDirection::Forward) {
        for (int n = o; n <= o + d - 2; ++n) {
            m(n - o + 1, n - o) = std::sqrt(w.sq(n));
        }
        interior.lo = (w.kind() == ShiftKind::Unilateral) ? o : o + 1;
        interior.hi = o + d - 2;
    } else {
        for (int n = o + 1; n <= o + d - 1; ++n) {
            m(n - o - 1, n - o) = std::sqrt(w.sq(n));
        }
        const bool genuine_bottom = w.kind() == ShiftKind::Unilateral && w.sq(o) == 0.0;
        interior.lo = genuine_bottom ? o : o + 1;
        interior.hi = o + d - 2;
    }
    TruncatedOperator op(std::move(m), o, interior,
                         "shift(" + w.provenance().str() + ", d=" + std::to_string(d) + ")");
    if (w.direction() == ShiftDirection::Forward) {
        if (d >= 2) {
            op.attach_weights(w.slice(o, o + d - 2));
        }
    } else {
        op.attach_weights(w.slice(o, o + d - 1));
    }
    return op;
}

TruncatedOperator normal_solution(const QParam& q, int d, UnitarySpec spec, std::uint64_t seed) {
    const Regime regime = q.regime();
    if (regime == Regime::One || regime == Regime::AboveOne) {
        throw std::domain_error("normal_solution: no formally normal solution exists for q >= 1");
    }
    if (d < 1) {
        throw std::invalid_argument("normal_solution: dimension must be positive");
    }
    const double scale = 1.0 / std::sqrt(1.0 - q.value());
    Eigen::MatrixXcd u;
    std::string tag;
    switch (spec) {
        case UnitarySpec::Identity:
            u = identity_like(d);
            tag = "identity";
            break;
        case UnitarySpec::CyclicShift:
            u = Eigen::MatrixXcd::Zero(d, d);
            for (int i = 0; i < d; ++i) {
                u((i + 1) % d, i) = 1.0;
            }
            tag = "cyclic_shift";
            break;
        case UnitarySpec::SeededRandom: {
            std::mt19937_64 rng(seed);
            Eigen::MatrixXcd g(d, d);
            for (int i = 0; i < d; ++i) {
                for (int j = 0; j < d; ++j) {
                    const double re = uniform_pm1(rng);
                    const double im = uniform_pm1(rng);
                    g(i, j) = std::complex<double>(re, im);
                }
            }
            Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
            u = qr.householderQ() * identity_like(d);
            // Pin the column phases so the result is a function of the seed only.
            Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
            for (int j = 0; j < d; ++j) {
                const std::complex<double> rj = r(j, j);
                if (std::abs(rj) > 0.0) {
                    u.col(j) *= rj / std::abs(rj);
                }
            }
            tag = "seeded_random(seed=" + std::to_string(seed) + ")";
            break;
        }
    }
    IndexWindow interior{0, d - 1}; // honest operator on C^d, no truncation boundary
    return TruncatedOperator(scale * u, 0, interior,
                             "normal_solution(q=" + q.str() + ", " + tag + ")");
}

TruncatedOperator selfcommutator(const TruncatedOperator& S, const QParam& q) {
    const auto& a = S.entries();
    Eigen::MatrixXcd c =
        identity_like(S.dim()) + (q.value() - 1.0) * (a * a.adjoint());
    return TruncatedOperator(std::move(c), S.index_origin(), S.interior(), "C(" + S.label() + ")");
}

namespace {

// Per-column residual magnitudes of the three identities for a weight-backed
// forward shift, evaluated on the scalar type T (Rational or double). All
// three reduce to coefficients rational in q and the squared weights.
template <typename T>
struct WeightArithmetic {
    const WeightSequence& w;
    T qv;
    int o;      // bottom basis index of the matrix
    int top;    // top basis index of the matrix
    bool unilateral;

    T weight(int n) const; // squared weight, defined on [o, top-1]

    T incoming(int n) const { // ||S* e_n||^2 as represented
        if (n == o) {
            return T(0); // genuine zero for unilateral, never queried for bilateral
        }
        return weight(n - 1);
    }
    T outgoing(int n) const { return weight(n); } // ||S e_n||^2, n <= top-1
    T cdiag(int n) const { return T(1) + (qv - T(1)) * incoming(n); }

    T oq_sq(int n) const {
        const T r = outgoing(n) - qv * incoming(n) - T(1);
        return r * r;
    }
    T left_sq(int n) const {
        const T coeff = cdiag(n + 1) - qv * cdiag(n);
        return coeff * coeff * weight(n);
    }
    T right_sq(int n) const {
        if (unilateral && n == o) {
            return T(0);
        }
        const T coeff = qv * cdiag(n - 1) - cdiag(n);
        return coeff * coeff * weight(n - 1);
    }
};

template <>
Rational WeightArithmetic<Rational>::weight(int n) const {
    return w.sq_exact(n);
}

template <>
double WeightArithmetic<double>::weight(int n) const {
    return w.sq(n);
}

double to_double_generic(const Rational& v) { return to_double(v); }
double to_double_generic(double v) { return v; }

template <typename T, typename F>
Residual max_over_window(IndexWindow window, bool exact, F&& sq_at) {
    Residual r;
    r.window = window;
    r.exact = exact;
    r.argmax = window.lo;
    if (window.empty()) {
        return r;
    }
    T best = sq_at(window.lo);
    int arg = window.lo;
    for (int n = window.lo + 1; n <= window.hi; ++n) {
        T v = sq_at(n);
        if (v > best) {
            best = v;
            arg = n;
        }
    }
    r.argmax = arg;
    r.value = std::sqrt(to_double_generic(best));
    return r;
}

template <typename T>
ResidualSuite weight_residuals(const TruncatedOperator& S, const T& qv) {
    const WeightSequence& w = S.weights();
    const bool uni = w.kind() == ShiftKind::Unilateral;
    const int o = S.index_origin();
    const int top = S.index_top();
    WeightArithmetic<T> wa{w, qv, o, top, uni};
    const bool exact = std::is_same_v<T, Rational>;

    IndexWindow oq_win{uni ? o : o + 1, top - 1};
    IndexWindow left_win = oq_win;
    IndexWindow right_win{uni ? o : o + 2, top - 1};

    ResidualSuite suite;
    suite.oq = max_over_window<T>(oq_win, exact, [&](int n) { return wa.oq_sq(n); });
    suite.qcomm_left = max_over_window<T>(left_win, exact, [&](int n) { return wa.left_sq(n); });
    suite.qcomm_right = max_over_window<T>(right_win, exact, [&](int n) { return wa.right_sq(n); });
    return suite;
}

Residual matrix_residual(const Eigen::MatrixXcd& r, const TruncatedOperator& S) {
    Residual res;
    res.window = S.interior();
    res.exact = false;
    res.argmax = res.window.lo;
    if (res.window.empty()) {
        return res;
    }
    double best = -1.0;
    for (int n = res.window.lo; n <= res.window.hi; ++n) {
        const double v = column_norm(r, S.col_of(n));
        if (v > best) {
            best = v;
            res.argmax = n;
        }
    }
    res.value = best;
    return res;
}

} // namespace

ResidualSuite residual_suite(const TruncatedOperator& S, const QParam& q) {
    if (S.has_weights() && S.weights().direction() == ShiftDirection::Forward) {
        if (S.weights().is_exact() && q.is_exact()) {
            return weight_residuals<Rational>(S, q.rational());
        }
        return weight_residuals<double>(S, q.value());
    }
    const auto& a = S.entries();
    const Eigen::MatrixXcd ad = a.adjoint();
    const Eigen::MatrixXcd id = identity_like(S.dim());
    const Eigen::MatrixXcd c = id + (q.value() - 1.0) * (a * ad);
    ResidualSuite suite;
    suite.oq = matrix_residual(ad * a - q.value() * (a * ad) - id, S);
    suite.qcomm_left = matrix_residual(c * a - q.value() * (a * c), S);
    suite.qcomm_right = matrix_residual(q.value() * (c * ad) - ad * c, S);
    return suite;
}

std::vector<QNumber> selfcommutator_diagonal(const TruncatedOperator& S, const QParam& q,
                                             IndexWindow* window) {
    const WeightSequence& w = S.weights(); // throws without provenance
    if (w.direction() != ShiftDirection::Forward) {
        throw std::logic_error("selfcommutator_diagonal: defined for forward shifts");
    }
    const bool uni = w.kind() == ShiftKind::Unilateral;
    const int o = S.index_origin();
    IndexWindow win{uni ? o : o + 1, S.index_top()};
    if (window) {
        *window = win;
    }
    std::vector<QNumber> diag;
    diag.reserve(static_cast<std::size_t>(win.size()));
    const bool exact = w.is_exact() && q.is_exact();
    for (int n = win.lo; n <= win.hi; ++n) {
        if (exact) {
            const Rational b = (n == o) ? Rational(0) : w.sq_exact(n - 1);
            diag.push_back(QNumber::exact(1 + (q.rational() - 1) * b));
        } else {
            const double b = (n == o) ? 0.0 : w.sq(n - 1);
            const double v = 1.0 + (q.value() - 1.0) * b;
            diag.push_back(QNumber::approx(v, std::abs(v) * 1e-14));
        }
    }
    return diag;
}

std::optional<HyponormalityWitness> hyponormality_witness(const TruncatedOperator& S,
                                                          std::uint64_t seed, int samples) {
    const IndexWindow win = S.interior();
    if (win.empty()) {
        return std::nullopt;
    }

    if (S.has_weights() && S.weights().direction() == ShiftDirection::Forward) {
        const WeightSequence& w = S.weights();
        const bool uni = w.kind() == ShiftKind::Unilateral;
        const int o = S.index_origin();
        if (w.is_exact()) {
            for (int n = win.lo; n <= win.hi; ++n) {
                const Rational in = (n == o && uni) ? Rational(0) : w.sq_exact(n - 1);
                const Rational out = w.sq_exact(n);
                if (in > out) {
                    HyponormalityWitness hw;
                    hw.is_basis = true;
                    hw.basis_index = n;
                    hw.margin = to_double(in - out);
                    hw.exact = true;
                    return hw;
                }
            }
        } else {
            for (int n = win.lo; n <= win.hi; ++n) {
                const double in = (n == o && uni) ? 0.0 : w.sq(n - 1);
                const double out = w.sq(n);
                if (in > out) {
                    HyponormalityWitness hw;
                    hw.is_basis = true;
                    hw.basis_index = n;
                    hw.margin = in - out;
                    hw.exact = false;
                    return hw;
                }
            }
        }
    } else {
        const auto& a = S.entries();
        for (int n = win.lo; n <= win.hi; ++n) {
            const int c = S.col_of(n);
            const double in = a.row(c).norm();
            const double out = a.col(c).norm();
            if (in > out) {
                HyponormalityWitness hw;
                hw.is_basis = true;
                hw.basis_index = n;
                hw.margin = in * in - out * out;
                hw.exact = false;
                return hw;
            }
        }
    }

    // Seeded scan of random vectors supported on the interior.
    const auto& a = S.entries();
    const double scale = a.cwiseAbs().maxCoeff();
    const double floor = 1e-12 * (1.0 + scale * scale);
    std::mt19937_64 rng(seed);
    for (int s = 0; s < samples; ++s) {
        Eigen::VectorXcd f = Eigen::VectorXcd::Zero(S.dim());
        for (int n = win.lo; n <= win.hi; ++n) {
            f(S.col_of(n)) = std::complex<double>(uniform_pm1(rng), uniform_pm1(rng));
        }
        const double nf = f.norm();
        if (nf == 0.0) {
            continue;
        }
        f /= nf;
        const double margin = (a.adjoint() * f).squaredNorm() - (a * f).squaredNorm();
        if (margin > floor) {
            HyponormalityWitness hw;
            hw.is_basis = false;
            hw.vector = f;
            hw.margin = margin;
            hw.exact = false;
            return hw;
        }
    }
    return std::nullopt;
}

double norm_estimate(const TruncatedOperator& S) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(S.entries());
    return svd.singularValues()(0);
}

} // namespace qosc::shiftops
