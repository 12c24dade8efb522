#pragma once

#include "qosc/qparam.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qosc::shiftops {

enum class ShiftKind { Unilateral, Bilateral };

/// Forward attaches the weight at index n to the transition n -> n+1,
/// backward to n -> n-1.
enum class ShiftDirection { Forward, Backward };

struct WeightProvenance {
    enum class Tag { Canonical, Bilateral, Custom };
    Tag tag = Tag::Custom;
    std::optional<QParam> q;
    std::optional<QNumber> alpha;
    int n_shift = 0;
    std::string str() const;
};

/// Squared-weight sequence |tau_n|^2 over a finite index window. The single
/// source of truth for every shift operator built here: exact-mode residual
/// checks read the rationals stored in it, float checks read the doubles.
class WeightSequence {
public:
    static WeightSequence unilateral(std::vector<Rational> squared,
                                     ShiftDirection direction = ShiftDirection::Forward,
                                     WeightProvenance provenance = {});
    static WeightSequence unilateral(std::vector<double> squared,
                                     ShiftDirection direction = ShiftDirection::Forward,
                                     WeightProvenance provenance = {});
    static WeightSequence bilateral(int index_low, std::vector<Rational> squared,
                                    ShiftDirection direction = ShiftDirection::Forward,
                                    WeightProvenance provenance = {});
    static WeightSequence bilateral(int index_low, std::vector<double> squared,
                                    ShiftDirection direction = ShiftDirection::Forward,
                                    WeightProvenance provenance = {});

    ShiftKind kind() const { return kind_; }
    ShiftDirection direction() const { return direction_; }
    int index_low() const { return index_low_; }
    int index_high() const { return index_low_ + static_cast<int>(squared_.size()) - 1; }
    int size() const { return static_cast<int>(squared_.size()); }
    bool is_exact() const { return exact_; }
    bool has(int n) const { return n >= index_low() && n <= index_high(); }

    /// Squared weight at absolute basis index n.
    double sq(int n) const;
    const Rational& sq_exact(int n) const;

    const WeightProvenance& provenance() const { return provenance_; }

    /// Copy restricted to absolute indices [lo, hi].
    WeightSequence slice(int lo, int hi) const;

private:
    WeightSequence() = default;
    void validate() const;

    ShiftKind kind_ = ShiftKind::Unilateral;
    ShiftDirection direction_ = ShiftDirection::Forward;
    int index_low_ = 0;
    bool exact_ = false;
    std::vector<Rational> exact_squared_;
    std::vector<double> squared_;
    WeightProvenance provenance_;
};

/// Squared weights [n+1]_q for n = 0..n_max of the canonical unilateral
/// solution S e_n = sqrt([n+1]_q) e_{n+1}. Requires q >= -1; below that some
/// squared weight goes negative and the construction is refused.
WeightSequence canonical_weights(const QParam& q, int n_max);

/// Squared weights alpha q^{n+N} + [n+N]_q of the bilateral solution over the
/// given window. Admissible only for q < 1: any alpha >= (1-q)^{-1} when
/// 0 <= q < 1, exactly alpha = (1-q)^{-1} when q < 0. For q >= 1 there is no
/// bilateral solution and the call is refused.
WeightSequence bilateral_weights(const QParam& q, const QNumber& alpha, int n_shift, int window_lo,
                                 int window_hi);

} // namespace qosc::shiftops
