#pragma once

#include "qosc/rational.hpp"

#include <map>

namespace qosc::shiftops {

/// Exact scalar arising when a word in the shift, its adjoint and the
/// selfcommutator is applied to a basis vector: a rational times the square
/// root of a product of distinct squared weights,
///
///   rho * sqrt( prod_{m in open} w_m ).
///
/// Multiplying by a weight sqrt(w_m) either opens the index m or closes it
/// into the rational part. Every term of the identities verified here starts
/// and ends on the same pair of basis indices, so all terms share the same
/// open set and addition stays inside the representation; a mismatched
/// addition indicates a bug and throws.
class PathCoefficient {
public:
    static PathCoefficient zero() { return PathCoefficient{}; }
    static PathCoefficient one();

    bool is_zero() const { return rho_ == 0; }

    void mul_rational(const Rational& r);
    /// Multiply by tau_index = sqrt(squared_weight).
    void mul_weight(int index, const Rational& squared_weight);
    void add(const PathCoefficient& other);
    void sub(const PathCoefficient& other);

    /// |rho| * sqrt(prod open weights), as a double for reporting.
    double abs() const;
    /// rho^2 * prod open weights, exact.
    Rational abs_squared() const;

private:
    Rational rho_ = 0;
    std::map<int, Rational> open_;
};

} // namespace qosc::shiftops
