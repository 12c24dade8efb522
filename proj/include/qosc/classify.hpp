#pragma once

#include "qosc/shiftops.hpp"

#include <optional>

namespace qosc::classify {

using shiftops::IndexWindow;
using shiftops::Residual;
using shiftops::TruncatedOperator;
using shiftops::UnitarySpec;
using shiftops::WeightSequence;

enum class SchmudgenType { I, II, III, IV };

const char* to_string(SchmudgenType t);

/// One of the four solution families of T*T - p^2 TT* = eps (1 - p^2):
///   I   forward unilateral, squared weight 1 - p^{2(n+1)}        (eps = +1)
///   II  forward bilateral,  squared weight 1 + p^{2(n+1)} a^2    (eps = +1),
///       a a scalar sample in [p, 1] of the selfadjoint parameter
///   III a unitary           (constant unit weights)              (eps = +1)
///   IV  backward unilateral, weights from the recurrence
///       w_{n+1} = (w_n + 1 - p^2)/p^2, w_0 = 0                   (eps = -1)
struct SchmudgenSpec {
    SchmudgenType type = SchmudgenType::I;
    QParam p = QParam::exact(1, 2);
    int epsilon = +1;
    std::optional<QNumber> a;                         // type II only
    UnitarySpec unitary = UnitarySpec::CyclicShift;   // type III realization

    static SchmudgenSpec type_i(QParam p);
    static SchmudgenSpec type_ii(QParam p, QNumber a);
    static SchmudgenSpec type_iii(QParam p, UnitarySpec unitary = UnitarySpec::CyclicShift);
    static SchmudgenSpec type_iv(QParam p);

    void validate() const;
};

/// Squared weights of the chosen type over [window_lo, window_hi]. Types I
/// and IV require window_lo = 0; type IV uses the recurrence forced by the
/// relation (closed form p^{-2n} - 1 is a derived consequence, not the
/// generator). Type III yields bilateral constant unit weights.
WeightSequence schmudgen_weights(const SchmudgenSpec& spec, int window_lo, int window_hi);

/// Operator realization: shifts are built from the weights; type III honors
/// the unitary_spec (identity or cyclic shift) directly.
TruncatedOperator schmudgen_operator(const SchmudgenSpec& spec, int d);

/// Interior-max column norm of T*T - p^2 TT* - eps (1 - p^2) I. Exact for
/// weight-backed operators whenever p^2 is rational.
Residual schi_residual(const TruncatedOperator& t, const QParam& p, int epsilon);

/// Same check parametrized by p^2, which is what the relation is rational in;
/// used by the reduction at parameters whose square root is irrational.
Residual schi_residual_sq(const TruncatedOperator& t, const QParam& p_squared, int epsilon);

struct SchmudgenReduction {
    TruncatedOperator t;
    QParam p;         // exact only when q (or 1/q) is a perfect rational square
    QParam p_squared; // exact whenever q is
    int epsilon = +1;
};

/// Remark-style reduction of the q-relation to the p-relation:
/// 0 < q < 1 maps S to sqrt(1-q) S with p = sqrt(q), eps = +1; q > 1 maps S
/// to sqrt(q-1) S* with p = 1/sqrt(q), eps = -1. Undefined at q = 1 and for
/// q <= 0.
SchmudgenReduction reduce_to_schmudgen(const QParam& q, const TruncatedOperator& s);

enum class WeightClass { I, II, III, IV, None, Ambiguous };

const char* to_string(WeightClass c);

struct ClassifyResult {
    WeightClass cls = WeightClass::None;
    double residual = 0.0; // template deviation of the matched class
    std::optional<double> fitted_a;
    IndexWindow window;
};

/// Matches the squared weights against the four closed forms at the given p.
/// Kind and direction disambiguate; type II fits the scalar a by least
/// squares and accepts it inside [p - tol, 1 + tol]. Ties (possible only on
/// windows shorter than 3) are reported as Ambiguous.
ClassifyResult classify_weights(const WeightSequence& w, const QParam& p, double tol = 1e-9);

} // namespace qosc::classify
