#pragma once

#include "qosc/shiftops.hpp"

#include <map>

namespace qosc::extension {

using shiftops::IndexWindow;
using shiftops::TruncatedOperator;

/// M x M upper-bidiagonal block matrix with d x d blocks: (n,n) holds
/// q^{n/2} S and (n,n+1) holds sqrt([n+1]_q) diag(q^{k/2}), S the canonical
/// truncated shift.
class BlockOperator {
public:
    BlockOperator(QParam q, int inner_dim, int num_blocks, std::string structure_tag);

    int num_blocks() const { return num_blocks_; }
    int inner_dim() const { return inner_dim_; }
    const QParam& q() const { return q_; }
    const std::string& structure_tag() const { return structure_tag_; }

    /// nullptr for structurally absent (zero) blocks.
    const Eigen::MatrixXcd* block(int row, int col) const;
    const std::map<std::pair<int, int>, Eigen::MatrixXcd>& block_map() const { return blocks_; }

    /// Replacing a block drops the canonical-build guarantee, so later checks
    /// fall back to dense arithmetic on the stored entries.
    void set_block(int row, int col, Eigen::MatrixXcd b);

    /// Built by build_extension and not modified since.
    bool canonical_build() const { return canonical_build_; }

    Eigen::MatrixXcd flatten() const;

private:
    friend BlockOperator build_extension(const QParam& q, int d, int M);

    QParam q_;
    int inner_dim_ = 0;
    int num_blocks_ = 0;
    std::string structure_tag_;
    std::map<std::pair<int, int>, Eigen::MatrixXcd> blocks_;
    bool canonical_build_ = false;
};

/// The truncated normal extension of the canonical shift. Requires q > 0.
BlockOperator build_extension(const QParam& q, int d, int M);

struct NormalityResidual {
    double value = 0.0;
    bool exact = false;
    IndexWindow block_window; // block rows measured
    IndexWindow inner_window; // inner indices measured
    int argmax_block = 0;
    int argmax_inner = 0;
};

/// Interior max of ||(N*N - NN*) e_{(n,k)}||. The interior excludes the last
/// block row and the last inner index, both of which lose one identity to
/// truncation; with M = 1 the single block is measured as-is and the residual
/// equals the non-normality of S itself.
NormalityResidual normality_residual(const BlockOperator& nop);

struct ConsistencyResult {
    bool consistent = false;
    double max_deviation = 0.0;
};

/// Checks that N applied to (f, 0, ..., 0) is (S f, 0, ..., 0): block (0,0)
/// equals S and the rest of block column 0 vanishes.
ConsistencyResult extension_consistency(const BlockOperator& nop, const TruncatedOperator& s);

} // namespace qosc::extension
