#include "qosc/classify.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace qosc::classify {

using shiftops::build_shift;
using shiftops::normal_solution;
using shiftops::ShiftDirection;
using shiftops::ShiftKind;

const char* to_string(SchmudgenType t) {
    switch (t) {
        case SchmudgenType::I: return "I";
        case SchmudgenType::II: return "II";
        case SchmudgenType::III: return "III";
        case SchmudgenType::IV: return "IV";
    }
    return "?";
}

const char* to_string(WeightClass c) {
    switch (c) {
        case WeightClass::I: return "I";
        case WeightClass::II: return "II";
        case WeightClass::III: return "III";
        case WeightClass::IV: return "IV";
        case WeightClass::None: return "none";
        case WeightClass::Ambiguous: return "ambiguous";
    }
    return "?";
}

SchmudgenSpec SchmudgenSpec::type_i(QParam p) {
    SchmudgenSpec s;
    s.type = SchmudgenType::I;
    s.p = std::move(p);
    s.epsilon = +1;
    s.validate();
    return s;
}

SchmudgenSpec SchmudgenSpec::type_ii(QParam p, QNumber a) {
    SchmudgenSpec s;
    s.type = SchmudgenType::II;
    s.p = std::move(p);
    s.epsilon = +1;
    s.a = std::move(a);
    s.validate();
    return s;
}

SchmudgenSpec SchmudgenSpec::type_iii(QParam p, shiftops::UnitarySpec unitary) {
    SchmudgenSpec s;
    s.type = SchmudgenType::III;
    s.p = std::move(p);
    s.epsilon = +1;
    s.unitary = unitary;
    s.validate();
    return s;
}

SchmudgenSpec SchmudgenSpec::type_iv(QParam p) {
    SchmudgenSpec s;
    s.type = SchmudgenType::IV;
    s.p = std::move(p);
    s.epsilon = -1;
    s.validate();
    return s;
}

void SchmudgenSpec::validate() const {
    if (!(p.value() > 0.0 && p.value() < 1.0)) {
        throw std::invalid_argument("SchmudgenSpec: p must lie in (0, 1)");
    }
    const int expected_eps = type == SchmudgenType::IV ? -1 : +1;
    if (epsilon != expected_eps) {
        throw std::invalid_argument("SchmudgenSpec: epsilon does not match the type");
    }
    if (type == SchmudgenType::II) {
        if (!a) {
            throw std::invalid_argument("SchmudgenSpec: type II needs the scalar a");
        }
        const double av = a->value();
        if (!(av >= p.value() && av <= 1.0)) {
            throw std::invalid_argument("SchmudgenSpec: type II requires a in [p, 1]");
        }
    } else if (a) {
        throw std::invalid_argument("SchmudgenSpec: only type II carries the scalar a");
    }
}

WeightSequence schmudgen_weights(const SchmudgenSpec& spec, int window_lo, int window_hi) {
    spec.validate();
    if (window_hi < window_lo) {
        throw std::invalid_argument("schmudgen_weights: empty window");
    }
    const bool unilateral_type =
        spec.type == SchmudgenType::I || spec.type == SchmudgenType::IV;
    if (unilateral_type && window_lo != 0) {
        throw std::invalid_argument("schmudgen_weights: types I and IV start at index 0");
    }
    const int len = window_hi - window_lo + 1;
    const bool exact = spec.p.is_exact() && (spec.type != SchmudgenType::II || spec.a->is_exact());

    if (exact) {
        const Rational p2 = spec.p.rational() * spec.p.rational();
        std::vector<Rational> sq(static_cast<std::size_t>(len));
        switch (spec.type) {
            case SchmudgenType::I:
                for (int n = 0; n < len; ++n) {
                    sq[static_cast<std::size_t>(n)] = 1 - rational_pow(p2, n + 1);
                }
                return WeightSequence::unilateral(std::move(sq));
            case SchmudgenType::II: {
                const Rational a2 = spec.a->rational() * spec.a->rational();
                for (int n = 0; n < len; ++n) {
                    const long idx = static_cast<long>(window_lo) + n;
                    sq[static_cast<std::size_t>(n)] = 1 + rational_pow(p2, idx + 1) * a2;
                }
                return WeightSequence::bilateral(window_lo, std::move(sq));
            }
            case SchmudgenType::III:
                for (int n = 0; n < len; ++n) {
                    sq[static_cast<std::size_t>(n)] = 1;
                }
                return WeightSequence::bilateral(window_lo, std::move(sq));
            case SchmudgenType::IV: {
                Rational w(0); // w_0 = 0: the virtual f_{-1} vanishes
                for (int n = 0; n < len; ++n) {
                    sq[static_cast<std::size_t>(n)] = w;
                    w = (w + 1 - p2) / p2;
                }
                return WeightSequence::unilateral(std::move(sq), ShiftDirection::Backward);
            }
        }
    }

    const double p2 = spec.p.value() * spec.p.value();
    std::vector<double> sq(static_cast<std::size_t>(len));
    switch (spec.type) {
        case SchmudgenType::I:
            for (int n = 0; n < len; ++n) {
                sq[static_cast<std::size_t>(n)] = 1.0 - std::pow(p2, n + 1);
            }
            return WeightSequence::unilateral(std::move(sq));
        case SchmudgenType::II: {
            const double a2 = spec.a->value() * spec.a->value();
            for (int n = 0; n < len; ++n) {
                const double idx = static_cast<double>(window_lo + n);
                sq[static_cast<std::size_t>(n)] = 1.0 + std::pow(p2, idx + 1.0) * a2;
            }
            return WeightSequence::bilateral(window_lo, std::move(sq));
        }
        case SchmudgenType::III:
            for (int n = 0; n < len; ++n) {
                sq[static_cast<std::size_t>(n)] = 1.0;
            }
            return WeightSequence::bilateral(window_lo, std::move(sq));
        case SchmudgenType::IV: {
            double w = 0.0;
            for (int n = 0; n < len; ++n) {
                sq[static_cast<std::size_t>(n)] = w;
                w = (w + 1.0 - p2) / p2;
            }
            return WeightSequence::unilateral(std::move(sq), ShiftDirection::Backward);
        }
    }
    throw std::logic_error("schmudgen_weights: unreachable");
}

TruncatedOperator schmudgen_operator(const SchmudgenSpec& spec, int d) {
    if (spec.type == SchmudgenType::III) {
        // a unitary solves the relation with eps = +1 at every p
        auto op = normal_solution(QParam::exact(0), d, spec.unitary);
        return TruncatedOperator(op.entries(), 0, {0, d - 1}, "schmudgen(III)");
    }
    const bool unilateral_type =
        spec.type == SchmudgenType::I || spec.type == SchmudgenType::IV;
    const int lo = unilateral_type ? 0 : -(d / 2);
    return build_shift(schmudgen_weights(spec, lo, lo + d - 1), d);
}

namespace {

template <typename T>
struct SchiArithmetic {
    const WeightSequence& w;
    T p2;
    T eps;
    int o;
    int top;
    bool unilateral;
    bool backward;

    T weight(int n) const;

    T residual_sq(int n) const {
        T tt, tts;
        if (!backward) {
            tt = n <= top - 1 ? weight(n) : T(0);
            tts = (n == o) ? T(0) : weight(n - 1);
        } else {
            tt = weight(n);
            tts = weight(n + 1);
        }
        const T r = tt - p2 * tts - eps * (T(1) - p2);
        return r * r;
    }
};

template <>
Rational SchiArithmetic<Rational>::weight(int n) const {
    return w.sq_exact(n);
}
template <>
double SchiArithmetic<double>::weight(int n) const {
    return w.sq(n);
}

double to_double_generic(const Rational& v) { return to_double(v); }
double to_double_generic(double v) { return v; }

template <typename T>
Residual schi_weight_path(const TruncatedOperator& t, const T& p2, int epsilon) {
    const WeightSequence& w = t.weights();
    const bool uni = w.kind() == ShiftKind::Unilateral;
    const bool backward = w.direction() == ShiftDirection::Backward;
    const int o = t.index_origin();
    SchiArithmetic<T> sa{w, p2, T(epsilon), o, t.index_top(), uni, backward};

    Residual res;
    res.window = t.interior();
    res.exact = std::is_same_v<T, Rational>;
    res.argmax = res.window.lo;
    if (res.window.empty()) {
        return res;
    }
    T best = sa.residual_sq(res.window.lo);
    for (int n = res.window.lo + 1; n <= res.window.hi; ++n) {
        T v = sa.residual_sq(n);
        if (v > best) {
            best = v;
            res.argmax = n;
        }
    }
    res.value = std::sqrt(to_double_generic(best));
    return res;
}

Residual schi_matrix_path(const TruncatedOperator& t, double p2, int epsilon) {
    const auto& a = t.entries();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(t.dim(), t.dim());
    const Eigen::MatrixXcd r =
        a.adjoint() * a - p2 * (a * a.adjoint()) - static_cast<double>(epsilon) * (1.0 - p2) * id;
    Residual res;
    res.window = t.interior();
    res.exact = false;
    res.argmax = res.window.lo;
    double best = -1.0;
    for (int n = res.window.lo; n <= res.window.hi; ++n) {
        const double v = r.col(t.col_of(n)).norm();
        if (v > best) {
            best = v;
            res.argmax = n;
        }
    }
    res.value = std::max(best, 0.0);
    return res;
}

} // namespace

Residual schi_residual_sq(const TruncatedOperator& t, const QParam& p_squared, int epsilon) {
    if (epsilon != 1 && epsilon != -1) {
        throw std::invalid_argument("schi_residual: epsilon must be +1 or -1");
    }
    if (!(p_squared.value() > 0.0 && p_squared.value() < 1.0)) {
        throw std::invalid_argument("schi_residual: p^2 must lie in (0, 1)");
    }
    if (t.has_weights()) {
        if (t.weights().is_exact() && p_squared.is_exact()) {
            return schi_weight_path<Rational>(t, p_squared.rational(), epsilon);
        }
        return schi_weight_path<double>(t, p_squared.value(), epsilon);
    }
    return schi_matrix_path(t, p_squared.value(), epsilon);
}

Residual schi_residual(const TruncatedOperator& t, const QParam& p, int epsilon) {
    if (!(p.value() > 0.0 && p.value() < 1.0)) {
        throw std::invalid_argument("schi_residual: p must lie in (0, 1)");
    }
    if (p.is_exact()) {
        return schi_residual_sq(t, QParam::exact(p.rational() * p.rational()), epsilon);
    }
    return schi_residual_sq(t, QParam::floating(p.value() * p.value(), p.tolerance()), epsilon);
}

SchmudgenReduction reduce_to_schmudgen(const QParam& q, const TruncatedOperator& s) {
    const Regime regime = q.regime();
    if (regime == Regime::One) {
        throw std::domain_error("reduce_to_schmudgen: reduction undefined at q = 1");
    }
    if (regime != Regime::ZeroToOne && regime != Regime::AboveOne) {
        throw std::domain_error("reduce_to_schmudgen: requires q in (0,1) or (1,oo)");
    }

    auto p_from_sq = [](const QParam& p2) {
        if (p2.is_exact()) {
            if (auto root = rational_sqrt(p2.rational())) {
                return QParam::exact(*root);
            }
        }
        return QParam::floating(std::sqrt(p2.value()),
                                p2.is_exact() ? QParam::kDefaultTolerance : p2.tolerance());
    };

    if (regime == Regime::ZeroToOne) {
        // T = sqrt(1-q) S, p = sqrt(q), eps = +1
        const double scale = std::sqrt(1.0 - q.value());
        TruncatedOperator t(scale * s.entries(), s.index_origin(), s.interior(),
                            "sqrt(1-q)*" + s.label());
        if (s.has_weights() && s.weights().direction() == ShiftDirection::Forward) {
            const WeightSequence& w = s.weights();
            if (w.is_exact() && q.is_exact()) {
                std::vector<Rational> sq;
                sq.reserve(static_cast<std::size_t>(w.size()));
                for (int n = w.index_low(); n <= w.index_high(); ++n) {
                    sq.push_back((1 - q.rational()) * w.sq_exact(n));
                }
                t.attach_weights(w.kind() == ShiftKind::Unilateral
                                     ? WeightSequence::unilateral(std::move(sq))
                                     : WeightSequence::bilateral(w.index_low(), std::move(sq)));
            } else {
                std::vector<double> sq;
                sq.reserve(static_cast<std::size_t>(w.size()));
                for (int n = w.index_low(); n <= w.index_high(); ++n) {
                    sq.push_back((1.0 - q.value()) * w.sq(n));
                }
                t.attach_weights(w.kind() == ShiftKind::Unilateral
                                     ? WeightSequence::unilateral(std::move(sq))
                                     : WeightSequence::bilateral(w.index_low(), std::move(sq)));
            }
        }
        const QParam p2 = q;
        return {std::move(t), p_from_sq(p2), p2, +1};
    }

    // q > 1: T = sqrt(q-1) S*, p^2 = 1/q, eps = -1. The printed scaling
    // sqrt(p^2-1) p^{-1} is imaginary for p < 1; only its magnitude
    // sqrt(q-1) enters the relation and that is what is used here.
    const double scale = std::sqrt(q.value() - 1.0);
    TruncatedOperator t(scale * s.entries().adjoint(), s.index_origin(), s.interior(),
                        "sqrt(q-1)*" + s.label() + "^*");
    if (s.has_weights() && s.weights().direction() == ShiftDirection::Forward &&
        s.weights().kind() == ShiftKind::Unilateral) {
        const WeightSequence& w = s.weights();
        // backward weights: T e_n = sqrt((q-1) w_{n-1}) e_{n-1}, w'_0 = 0
        if (w.is_exact() && q.is_exact()) {
            std::vector<Rational> sq;
            sq.reserve(static_cast<std::size_t>(w.size()) + 1);
            sq.push_back(Rational(0));
            for (int n = w.index_low(); n <= w.index_high(); ++n) {
                sq.push_back((q.rational() - 1) * w.sq_exact(n));
            }
            t.attach_weights(
                WeightSequence::unilateral(std::move(sq), ShiftDirection::Backward));
        } else {
            std::vector<double> sq;
            sq.reserve(static_cast<std::size_t>(w.size()) + 1);
            sq.push_back(0.0);
            for (int n = w.index_low(); n <= w.index_high(); ++n) {
                sq.push_back((q.value() - 1.0) * w.sq(n));
            }
            t.attach_weights(
                WeightSequence::unilateral(std::move(sq), ShiftDirection::Backward));
        }
    }
    QParam p2 = q.is_exact() ? QParam::exact(Rational(1) / q.rational())
                             : QParam::floating(1.0 / q.value(), q.tolerance());
    return {std::move(t), p_from_sq(p2), std::move(p2), -1};
}

namespace {

struct TemplateFit {
    bool applicable = false;
    double residual = 0.0;
    std::optional<double> fitted_a;
};

TemplateFit fit_type_i(const WeightSequence& w, double p2) {
    if (w.kind() != ShiftKind::Unilateral || w.direction() != ShiftDirection::Forward) {
        return {};
    }
    double dev = 0.0;
    for (int n = 0; n <= w.index_high(); ++n) {
        dev = std::max(dev, std::abs(w.sq(n) - (1.0 - std::pow(p2, n + 1))));
    }
    return {true, dev, std::nullopt};
}

TemplateFit fit_type_ii(const WeightSequence& w, double p2, const QParam& p, double tol) {
    if (w.kind() != ShiftKind::Bilateral || w.direction() != ShiftDirection::Forward) {
        return {};
    }
    double sum = 0.0;
    int count = 0;
    for (int n = w.index_low(); n <= w.index_high(); ++n) {
        sum += (w.sq(n) - 1.0) / std::pow(p2, static_cast<double>(n) + 1.0);
        ++count;
    }
    const double a2 = sum / count;
    if (a2 < 0.0) {
        return {};
    }
    const double a = std::sqrt(a2);
    if (a < p.value() - tol || a > 1.0 + tol) {
        return {};
    }
    double dev = 0.0;
    for (int n = w.index_low(); n <= w.index_high(); ++n) {
        dev = std::max(dev,
                       std::abs(w.sq(n) - (1.0 + std::pow(p2, static_cast<double>(n) + 1.0) * a2)));
    }
    return {true, dev, a};
}

TemplateFit fit_type_iii(const WeightSequence& w) {
    if (w.kind() != ShiftKind::Bilateral || w.direction() != ShiftDirection::Forward) {
        return {};
    }
    double dev = 0.0;
    for (int n = w.index_low(); n <= w.index_high(); ++n) {
        dev = std::max(dev, std::abs(w.sq(n) - 1.0));
    }
    return {true, dev, std::nullopt};
}

TemplateFit fit_type_iv(const WeightSequence& w, double p2) {
    if (w.kind() != ShiftKind::Unilateral || w.direction() != ShiftDirection::Backward) {
        return {};
    }
    double dev = 0.0;
    for (int n = 0; n <= w.index_high(); ++n) {
        dev = std::max(dev, std::abs(w.sq(n) - (std::pow(p2, -n) - 1.0)));
    }
    return {true, dev, std::nullopt};
}

} // namespace

ClassifyResult classify_weights(const WeightSequence& w, const QParam& p, double tol) {
    if (!(p.value() > 0.0 && p.value() < 1.0)) {
        throw std::invalid_argument("classify_weights: p must lie in (0, 1)");
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("classify_weights: tol must be positive");
    }
    const double p2 = p.value() * p.value();

    struct Candidate {
        WeightClass cls;
        TemplateFit fit;
    };
    const Candidate candidates[] = {
        {WeightClass::I, fit_type_i(w, p2)},
        {WeightClass::II, fit_type_ii(w, p2, p, tol)},
        {WeightClass::III, fit_type_iii(w)},
        {WeightClass::IV, fit_type_iv(w, p2)},
    };

    ClassifyResult result;
    result.window = {w.index_low(), w.index_high()};
    int matches = 0;
    for (const auto& c : candidates) {
        if (c.fit.applicable && c.fit.residual < tol) {
            ++matches;
            if (matches == 1) {
                result.cls = c.cls;
                result.residual = c.fit.residual;
                result.fitted_a = c.fit.fitted_a;
            }
        }
    }
    if (matches > 1) {
        result.cls = WeightClass::Ambiguous;
        result.fitted_a.reset();
    } else if (matches == 0) {
        result.cls = WeightClass::None;
        result.residual = 0.0;
    }
    return result;
}

} // namespace qosc::classify
