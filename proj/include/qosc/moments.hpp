#pragma once

#include "qosc/qparam.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace qosc::moments {

/// Nonnegative sequence b_0..b_{n_max} with b_0 > 0, treated as a moment
/// sequence in t = r^2 (the even part of the radial problem; odd entries are
/// never materialized).
class MomentSequence {
public:
    enum class Provenance { QFactorial, Custom };

    static MomentSequence q_factorials(const QParam& q, int n_max);
    static MomentSequence custom(std::vector<Rational> values);
    static MomentSequence custom(std::vector<double> values);

    int n_max() const { return static_cast<int>(values_.size()) - 1; }
    bool is_exact() const { return exact_; }
    double value(int n) const;
    const Rational& value_exact(int n) const;
    Provenance provenance() const { return provenance_; }
    const std::optional<QParam>& q() const { return q_; }

private:
    MomentSequence() = default;
    void validate() const;

    bool exact_ = false;
    std::vector<Rational> exact_values_;
    std::vector<double> values_;
    Provenance provenance_ = Provenance::Custom;
    std::optional<QParam> q_;
};

struct HankelReport {
    // leading principal minors of [b_{i+j}] and [b_{i+j+1}], sizes 1..max_size
    std::vector<QNumber> minors_plain;
    std::vector<QNumber> minors_shifted;
    bool positive_definite_plain = false;
    bool positive_definite_shifted = false;
    std::vector<int> zero_minors_plain;   // sizes with exactly-zero minors
    std::vector<int> zero_minors_shifted;
};

/// Stieltjes criterion at finite size: both Hankel forms positive. Exact
/// determinants in exact mode.
HankelReport hankel_psd_check(const MomentSequence& b, int max_size);

/// Finitely supported nonnegative measure: strictly increasing nodes >= 0
/// with positive masses.
class DiscreteMeasure {
public:
    DiscreteMeasure(std::vector<double> nodes, std::vector<double> masses);

    int atoms() const { return static_cast<int>(nodes_.size()); }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& masses() const { return masses_; }

    double moment(int k) const;

    /// Push-forward under t -> sqrt(t): the radial profile of a measure given
    /// in the squared-radius variable.
    DiscreteMeasure with_sqrt_nodes() const;

private:
    std::vector<double> nodes_;
    std::vector<double> masses_;
};

struct QuadratureResult {
    DiscreteMeasure measure;
    bool reduced = false; // input was degenerate; fewer atoms than requested
};

/// Gauss-type measure matching b_0..b_{2*n_nodes-1}: recurrence coefficients
/// of the orthogonal polynomials of b (computed in exact arithmetic when b
/// is exact), then the eigendecomposition of the symmetric tridiagonal
/// matrix; nodes are its eigenvalues, masses b_0 times the squared first
/// eigenvector components. Degenerate inputs return the smaller measure with
/// a flag; a node below -1e-12 reports non-Stieltjes input.
QuadratureResult quadrature_from_moments(const MomentSequence& b, int n_nodes);

/// Rotationally invariant planar measure: radial profile plus equally spaced
/// angles.
struct RadialMeasure {
    DiscreteMeasure radial;
    int angular_points = 1;
};

/// Average of e^{i*diff*2*pi*a/points} over a = 0..points-1; exactly 1 when
/// points divides diff and exactly 0 otherwise.
double equispaced_phase_average(int diff, int points);

/// Max over m, n <= n_max of |<Z^m, Z^n>_mu - delta_{mn} [m]_q!| for the
/// rotationally invariant measure built from the radial profile. Off-diagonal
/// entries vanish exactly once angular_points >= 2*n_max + 1; fewer points
/// are refused.
double radial_lift_verify(const QParam& q, const RadialMeasure& mu, int n_max);
double radial_lift_verify(const QParam& q, const DiscreteMeasure& radial, int n_max);

struct KernelCoefficients {
    std::vector<QNumber> c; // c_n = 1/[n]_q!
    double radius = 0.0;    // |1-q|^{-1/2} for 0 < q < 1, +infinity for q >= 1
};

KernelCoefficients kernel_coefficients(const QParam& q, int n_max);

/// Dense polynomial in the monomial basis; trailing zeros are trimmed so the
/// zero polynomial has degree -1.
template <typename Coeff>
class BasicPolynomial {
public:
    BasicPolynomial() = default;
    explicit BasicPolynomial(std::vector<Coeff> coeffs) : c_(std::move(coeffs)) { trim(); }

    static BasicPolynomial monomial(int degree, Coeff lead = Coeff(1)) {
        std::vector<Coeff> c(static_cast<std::size_t>(degree) + 1, Coeff(0));
        c.back() = std::move(lead);
        return BasicPolynomial(std::move(c));
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    Coeff coeff(int n) const {
        return (n >= 0 && n < static_cast<int>(c_.size())) ? c_[static_cast<std::size_t>(n)]
                                                           : Coeff(0);
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == Coeff(0)) {
            c_.pop_back();
        }
    }
    std::vector<Coeff> c_;
};

using Polynomial = BasicPolynomial<std::complex<double>>;
using RationalPolynomial = BasicPolynomial<Rational>;

/// (M f)(z) = z f(z).
Polynomial m_apply(const Polynomial& f);
RationalPolynomial m_apply(const RationalPolynomial& f);

/// The divided-difference derivative (D_q f)(z) = (f(z) - f(qz))/(z - qz),
/// acting as c_n -> [n]_q c_n one degree down; the q = 1 branch is the
/// ordinary derivative and agrees through [n]_1 = n.
Polynomial dq_apply(const Polynomial& f, const QParam& q);
RationalPolynomial dq_apply(const RationalPolynomial& f, const QParam& q);

/// Max over monomials Z^n, n <= n_max, of the coefficient deviation of
/// (D_q M - q M D_q)(Z^n) from Z^n. Exactly zero in exact mode.
QNumber poly_ccr_residual(const QParam& q, int n_max);

/// Max over a, b <= n_max of |<M Z^a, Z^b> - <Z^a, D_q Z^b>| under the
/// diagonal inner product <Z^m, Z^n> = delta_{mn} [m]_q!. Requires q > 0.
QNumber adjointness_check(const QParam& q, int n_max);

} // namespace qosc::moments
