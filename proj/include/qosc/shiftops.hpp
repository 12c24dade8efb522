#pragma once

#include "qosc/weights.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>

namespace qosc::shiftops {

inline constexpr std::uint64_t kDefaultSeed = 0x51C0FFEEULL;

/// Inclusive window of basis indices; empty when hi < lo.
struct IndexWindow {
    int lo = 0;
    int hi = -1;
    bool empty() const { return hi < lo; }
    bool contains(int n) const { return n >= lo && n <= hi; }
    int size() const { return empty() ? 0 : hi - lo + 1; }
};

/// A finite matrix standing for an operator on span{e_k}. index_origin maps
/// matrix row/column 0 to a basis index; interior is the sub-window on which
/// the represented identity is unaffected by the truncation boundary.
class TruncatedOperator {
public:
    TruncatedOperator(Eigen::MatrixXcd entries, int index_origin, IndexWindow interior,
                      std::string label);

    const Eigen::MatrixXcd& entries() const { return entries_; }
    int dim() const { return static_cast<int>(entries_.rows()); }
    int index_origin() const { return index_origin_; }
    int index_top() const { return index_origin_ + dim() - 1; }
    const IndexWindow& interior() const { return interior_; }
    const std::string& label() const { return label_; }

    /// Matrix column of the basis index n.
    int col_of(int n) const { return n - index_origin_; }

    /// Conjugate transpose with the same origin and interior. Weight
    /// provenance does not carry over.
    TruncatedOperator adjoint() const;

    bool has_weights() const { return weights_.has_value(); }
    const WeightSequence& weights() const;
    void attach_weights(WeightSequence w) { weights_ = std::move(w); }

private:
    Eigen::MatrixXcd entries_;
    int index_origin_ = 0;
    IndexWindow interior_;
    std::string label_;
    std::optional<WeightSequence> weights_;
};

/// d x d matrix realization of the weighted shift: entry sqrt(w_n) at
/// (n+1, n) for forward sequences, at (n-1, n) for backward ones, in basis
/// coordinates. The operator keeps the slice of weights it was built from so
/// that exact-mode checks can run on the rationals.
TruncatedOperator build_shift(const WeightSequence& w, int d);

enum class UnitarySpec { Identity, CyclicShift, SeededRandom };

/// (1-q)^{-1/2} U with U unitary of size d. Refused for q >= 1, where no
/// formally normal solution exists. Float arithmetic throughout. The seed
/// only matters for UnitarySpec::SeededRandom.
TruncatedOperator normal_solution(const QParam& q, int d, UnitarySpec spec,
                                  std::uint64_t seed = kDefaultSeed);

/// C = I + (q-1) S S*.
TruncatedOperator selfcommutator(const TruncatedOperator& S, const QParam& q);

struct Residual {
    double value = 0.0;
    bool exact = false; // computed in exact arithmetic; value 0.0 then means exactly zero
    IndexWindow window; // interior columns the max was taken over
    int argmax = 0;     // basis index attaining the max (lo of window when empty)
};

struct ResidualSuite {
    Residual oq;          // S*S - qSS* - I
    Residual qcomm_left;  // CS - qSC
    Residual qcomm_right; // qCS* - S*C
};

/// Interior-max column norms of the three defining identities. Weight-backed
/// forward shifts are evaluated on the squared weights (exactly when both the
/// weights and q are exact); anything else falls back to dense products over
/// the operator's interior. The identity S*S - SS* = C holds by construction
/// of C and is not measured separately.
ResidualSuite residual_suite(const TruncatedOperator& S, const QParam& q);

struct HyponormalityWitness {
    bool is_basis = true;
    int basis_index = 0;
    Eigen::VectorXcd vector; // set when !is_basis
    double margin = 0.0;     // ||S* f||^2 - ||S f||^2
    bool exact = false;
};

/// First interior basis vector with ||S* e_n|| > ||S e_n||, then a seeded
/// scan of random interior vectors; nullopt when no witness is found.
std::optional<HyponormalityWitness> hyponormality_witness(const TruncatedOperator& S,
                                                          std::uint64_t seed = kDefaultSeed,
                                                          int samples = 64);

/// Largest singular value.
double norm_estimate(const TruncatedOperator& S);

/// Selfcommutator diagonal <C e_n, e_n> = 1 + (q-1) w_{n-1} straight from the
/// weights; exact when the inputs are. Defined on the window where the
/// incoming weight is known (plus the genuine bottom of a unilateral shift).
std::vector<QNumber> selfcommutator_diagonal(const TruncatedOperator& S, const QParam& q,
                                             IndexWindow* window = nullptr);

} // namespace qosc::shiftops
