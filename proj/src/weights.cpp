#include "qosc/weights.hpp"

#include "qosc/qcalc.hpp"

#include <cmath>
#include <stdexcept>

namespace qosc::shiftops {

std::string WeightProvenance::str() const {
    switch (tag) {
        case Tag::Canonical:
            return "canonical(q=" + (q ? q->str() : "?") + ")";
        case Tag::Bilateral:
            return "bilateral(q=" + (q ? q->str() : "?") + ", alpha=" + (alpha ? alpha->str() : "?") +
                   ", N=" + std::to_string(n_shift) + ")";
        case Tag::Custom:
            return "custom";
    }
    return "custom";
}

void WeightSequence::validate() const {
    if (kind_ == ShiftKind::Unilateral && index_low_ != 0) {
        throw std::invalid_argument("WeightSequence: unilateral sequences start at index 0");
    }
    if (squared_.empty()) {
        throw std::invalid_argument("WeightSequence: empty weight window");
    }
    for (std::size_t i = 0; i < squared_.size(); ++i) {
        const bool neg = exact_ ? (exact_squared_[i] < 0) : (squared_[i] < 0.0);
        if (neg) {
            throw std::domain_error("WeightSequence: negative squared weight at index " +
                                    std::to_string(index_low_ + static_cast<int>(i)));
        }
    }
}

WeightSequence WeightSequence::unilateral(std::vector<Rational> squared, ShiftDirection direction,
                                          WeightProvenance provenance) {
    WeightSequence w;
    w.kind_ = ShiftKind::Unilateral;
    w.direction_ = direction;
    w.index_low_ = 0;
    w.exact_ = true;
    w.squared_.reserve(squared.size());
    for (const auto& s : squared) {
        w.squared_.push_back(to_double(s));
    }
    w.exact_squared_ = std::move(squared);
    w.provenance_ = std::move(provenance);
    w.validate();
    return w;
}

WeightSequence WeightSequence::unilateral(std::vector<double> squared, ShiftDirection direction,
                                          WeightProvenance provenance) {
    WeightSequence w;
    w.kind_ = ShiftKind::Unilateral;
    w.direction_ = direction;
    w.index_low_ = 0;
    w.exact_ = false;
    w.squared_ = std::move(squared);
    w.provenance_ = std::move(provenance);
    w.validate();
    return w;
}

WeightSequence WeightSequence::bilateral(int index_low, std::vector<Rational> squared,
                                         ShiftDirection direction, WeightProvenance provenance) {
    WeightSequence w;
    w.kind_ = ShiftKind::Bilateral;
    w.direction_ = direction;
    w.index_low_ = index_low;
    w.exact_ = true;
    w.squared_.reserve(squared.size());
    for (const auto& s : squared) {
        w.squared_.push_back(to_double(s));
    }
    w.exact_squared_ = std::move(squared);
    w.provenance_ = std::move(provenance);
    w.validate();
    return w;
}

WeightSequence WeightSequence::bilateral(int index_low, std::vector<double> squared,
                                         ShiftDirection direction, WeightProvenance provenance) {
    WeightSequence w;
    w.kind_ = ShiftKind::Bilateral;
    w.direction_ = direction;
    w.index_low_ = index_low;
    w.exact_ = false;
    w.squared_ = std::move(squared);
    w.provenance_ = std::move(provenance);
    w.validate();
    return w;
}

double WeightSequence::sq(int n) const {
    if (!has(n)) {
        throw std::out_of_range("WeightSequence::sq: index outside window");
    }
    return squared_[static_cast<std::size_t>(n - index_low_)];
}

const Rational& WeightSequence::sq_exact(int n) const {
    if (!exact_) {
        throw std::logic_error("WeightSequence::sq_exact: sequence is in float mode");
    }
    if (!has(n)) {
        throw std::out_of_range("WeightSequence::sq_exact: index outside window");
    }
    return exact_squared_[static_cast<std::size_t>(n - index_low_)];
}

WeightSequence WeightSequence::slice(int lo, int hi) const {
    if (lo < index_low() || hi > index_high() || hi < lo) {
        throw std::out_of_range("WeightSequence::slice: window outside sequence");
    }
    WeightSequence w;
    w.kind_ = kind_;
    w.direction_ = direction_;
    w.index_low_ = lo;
    w.exact_ = exact_;
    const auto a = static_cast<std::size_t>(lo - index_low_);
    const auto b = static_cast<std::size_t>(hi - index_low_);
    w.squared_.assign(squared_.begin() + a, squared_.begin() + b + 1);
    if (exact_) {
        w.exact_squared_.assign(exact_squared_.begin() + a, exact_squared_.begin() + b + 1);
    }
    w.provenance_ = provenance_;
    if (kind_ == ShiftKind::Unilateral && lo != 0) {
        w.kind_ = ShiftKind::Bilateral;
    }
    return w;
}

WeightSequence canonical_weights(const QParam& q, int n_max) {
    if (n_max < 0) {
        throw std::invalid_argument("canonical_weights: n_max must be nonnegative");
    }
    WeightProvenance prov;
    prov.tag = WeightProvenance::Tag::Canonical;
    prov.q = q;
    if (q.is_exact()) {
        std::vector<Rational> squared;
        squared.reserve(static_cast<std::size_t>(n_max) + 1);
        for (int n = 0; n <= n_max; ++n) {
            Rational v = qcalc::basic_number(n + 1, q).rational();
            if (v < 0) {
                throw std::domain_error("canonical_weights: [" + std::to_string(n + 1) +
                                        "]_q < 0 (q < -1 admits no unilateral solution)");
            }
            squared.push_back(std::move(v));
        }
        return WeightSequence::unilateral(std::move(squared), ShiftDirection::Forward, prov);
    }
    std::vector<double> squared;
    squared.reserve(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        const double v = qcalc::basic_number(n + 1, q).value();
        if (v < 0.0) {
            throw std::domain_error("canonical_weights: [" + std::to_string(n + 1) +
                                    "]_q < 0 (q < -1 admits no unilateral solution)");
        }
        squared.push_back(v);
    }
    return WeightSequence::unilateral(std::move(squared), ShiftDirection::Forward, prov);
}

WeightSequence bilateral_weights(const QParam& q, const QNumber& alpha, int n_shift, int window_lo,
                                 int window_hi) {
    if (window_hi < window_lo) {
        throw std::invalid_argument("bilateral_weights: empty window");
    }
    const Regime regime = q.regime();
    if (regime == Regime::One || regime == Regime::AboveOne) {
        throw std::domain_error("bilateral_weights: no bilateral solution exists for q >= 1");
    }
    const bool negative_q = regime == Regime::BelowMinusOne || regime == Regime::MinusOne ||
                            regime == Regime::MinusOneToZero;

    if (q.is_exact() && alpha.is_exact()) {
        const Rational& qv = q.rational();
        const Rational bound = Rational(1) / (1 - qv);
        if (negative_q) {
            if (alpha.rational() != bound) {
                throw std::domain_error(
                    "bilateral_weights: for q < 0 the only admissible alpha is (1-q)^{-1}");
            }
        } else if (alpha.rational() < bound) {
            throw std::domain_error("bilateral_weights: alpha below (1-q)^{-1} gives a negative weight");
        }
        WeightProvenance prov;
        prov.tag = WeightProvenance::Tag::Bilateral;
        prov.q = q;
        prov.alpha = alpha;
        prov.n_shift = n_shift;
        std::vector<Rational> squared;
        squared.reserve(static_cast<std::size_t>(window_hi - window_lo) + 1);
        if (alpha.rational() == bound) {
            // alpha q^m + [m]_q collapses to the constant (1-q)^{-1}; evaluating
            // it termwise would hit the q^m pole at q = 0, m < 0.
            squared.assign(static_cast<std::size_t>(window_hi - window_lo) + 1, bound);
            return WeightSequence::bilateral(window_lo, std::move(squared), ShiftDirection::Forward,
                                             prov);
        }
        if (qv == 0 && static_cast<long>(window_lo) + n_shift < 0) {
            throw std::domain_error(
                "bilateral_weights: q = 0 weights are undefined below the shift origin");
        }
        for (int n = window_lo; n <= window_hi; ++n) {
            const long m = static_cast<long>(n) + n_shift;
            Rational v = alpha.rational() * rational_pow(qv, m) + qcalc::basic_number(m, q).rational();
            if (v < 0) {
                throw std::domain_error("bilateral_weights: negative squared weight at index " +
                                        std::to_string(n));
            }
            squared.push_back(std::move(v));
        }
        return WeightSequence::bilateral(window_lo, std::move(squared), ShiftDirection::Forward, prov);
    }

    const double qv = q.value();
    const double bound = 1.0 / (1.0 - qv);
    const double tol = std::max(q.tolerance(), QParam::kDefaultTolerance);
    const bool at_bound = std::abs(alpha.value() - bound) <= tol * std::max(1.0, std::abs(bound));
    if (negative_q) {
        if (!at_bound) {
            throw std::domain_error(
                "bilateral_weights: for q < 0 the only admissible alpha is (1-q)^{-1}");
        }
    } else if (alpha.value() < bound - tol * std::max(1.0, std::abs(bound))) {
        throw std::domain_error("bilateral_weights: alpha below (1-q)^{-1} gives a negative weight");
    }
    WeightProvenance float_prov;
    float_prov.tag = WeightProvenance::Tag::Bilateral;
    float_prov.q = q;
    float_prov.alpha = alpha;
    float_prov.n_shift = n_shift;
    if (at_bound) {
        std::vector<double> constant(static_cast<std::size_t>(window_hi - window_lo) + 1, bound);
        return WeightSequence::bilateral(window_lo, std::move(constant), ShiftDirection::Forward,
                                         float_prov);
    }
    if (qv == 0.0 && static_cast<long>(window_lo) + n_shift < 0) {
        throw std::domain_error(
            "bilateral_weights: q = 0 weights are undefined below the shift origin");
    }
    std::vector<double> squared;
    squared.reserve(static_cast<std::size_t>(window_hi - window_lo) + 1);
    for (int n = window_lo; n <= window_hi; ++n) {
        const long m = static_cast<long>(n) + n_shift;
        const double v = alpha.value() * std::pow(qv, static_cast<double>(m)) +
                         qcalc::basic_number(m, q).value();
        if (v < -tol) {
            throw std::domain_error("bilateral_weights: negative squared weight at index " +
                                    std::to_string(n));
        }
        squared.push_back(std::max(v, 0.0));
    }
    return WeightSequence::bilateral(window_lo, std::move(squared), ShiftDirection::Forward,
                                     float_prov);
}

} // namespace qosc::shiftops
