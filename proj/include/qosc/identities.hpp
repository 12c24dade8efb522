#pragma once

#include "qosc/shiftops.hpp"

#include <vector>

namespace qosc::identities {

using shiftops::IndexWindow;
using shiftops::TruncatedOperator;

/// Gram matrix of the power/basis family: H[(i,a),(j,b)] = <S^i e_b, S^j e_a>,
/// rows and columns indexed by i*d_sub + a. The quadratic form of this matrix
/// at stacked family coefficients equals sum_{ij} <S^i f_j, S^j f_i>.
struct HermitianForm {
    Eigen::MatrixXcd entries;
    int p = 0;
    int d_sub = 0;
    std::string label;

    int index_of(int power, int basis) const { return power * d_sub + basis; }
};

struct X5Result {
    double residual = 0.0;
    bool exact = false;
    IndexWindow columns; // basis columns the max was taken over
};

/// Interior-max residual of the mixed-product expansion
///   S*^i S^j = sum_k [k]_q! binom(i,k)_q binom(j,k)_q S^{j-k} C^k S*^{i-k},
/// with the k-sum cut at min(i,j) where the binomials vanish. Weight-backed
/// shifts with exact q are verified exactly on the squared weights. The dense
/// float path reports each column's residual relative to its own norm
/// (floored at 1), since for q > 1 the columns themselves grow like powers of
/// the weights. Throws when i + j eats the whole interior.
X5Result verify_x5(const TruncatedOperator& S, const QParam& q, int i, int j);

/// |LHS - RHS| of the norm identity
///   sum_{i,j<=p} <S^i f_j, S^j f_i>
///     = sum_k [k]_q! || sum_i binom(i,k)_q C^{k/2} S*^{i-k} f_i ||^2.
/// Requires C >= 0 on the interior; a C eigenvalue below -1e-12 is a hard
/// error (the hypothesis fails), eigenvalues in [-1e-12, 0) are floored to 0.
/// Family vectors must keep a margin of p indices to the truncation boundary.
double verify_x8(const TruncatedOperator& S, const QParam& q,
                 const std::vector<Eigen::VectorXcd>& family, int p);

struct FormResult {
    HermitianForm form;
    double min_eigenvalue = 0.0;
};

/// The positivity form over f_j in span{e_0..e_{d_sub-1}} with powers up to p.
FormResult halmos_bram_form(const TruncatedOperator& S, int p, int d_sub);

/// Value of the form at a stacked family (for cross-checks against verify_x8).
double form_value(const HermitianForm& h, const std::vector<Eigen::VectorXcd>& family);

/// Deterministic random family of p+1 vectors supported on the first
/// support_dim basis indices of S.
std::vector<Eigen::VectorXcd> seeded_family(const TruncatedOperator& S, int p, int support_dim,
                                            std::uint64_t seed);

} // namespace qosc::identities
