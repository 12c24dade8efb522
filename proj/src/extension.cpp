#include "qosc/extension.hpp"

#include "qosc/qcalc.hpp"
#include "qosc/weights.hpp"

#include <cmath>
#include <stdexcept>

namespace qosc::extension {

using shiftops::build_shift;
using shiftops::canonical_weights;

BlockOperator::BlockOperator(QParam q, int inner_dim, int num_blocks, std::string structure_tag)
    : q_(std::move(q)), inner_dim_(inner_dim), num_blocks_(num_blocks),
      structure_tag_(std::move(structure_tag)) {
    if (inner_dim_ < 1 || num_blocks_ < 1) {
        throw std::invalid_argument("BlockOperator: dimensions must be positive");
    }
}

const Eigen::MatrixXcd* BlockOperator::block(int row, int col) const {
    auto it = blocks_.find({row, col});
    return it == blocks_.end() ? nullptr : &it->second;
}

void BlockOperator::set_block(int row, int col, Eigen::MatrixXcd b) {
    if (row < 0 || row >= num_blocks_ || col < 0 || col >= num_blocks_) {
        throw std::out_of_range("BlockOperator::set_block: block index out of range");
    }
    if (b.rows() != inner_dim_ || b.cols() != inner_dim_) {
        throw std::invalid_argument("BlockOperator::set_block: wrong block dimensions");
    }
    blocks_[{row, col}] = std::move(b);
    canonical_build_ = false;
}

Eigen::MatrixXcd BlockOperator::flatten() const {
    const int n = num_blocks_ * inner_dim_;
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& [pos, b] : blocks_) {
        full.block(pos.first * inner_dim_, pos.second * inner_dim_, inner_dim_, inner_dim_) = b;
    }
    return full;
}

BlockOperator build_extension(const QParam& q, int d, int M) {
    const Regime regime = q.regime();
    if (regime != Regime::ZeroToOne && regime != Regime::One && regime != Regime::AboveOne) {
        throw std::domain_error("build_extension: requires q > 0");
    }
    if (d < 1 || M < 1) {
        throw std::invalid_argument("build_extension: dimensions must be positive");
    }
    BlockOperator nop(q, d, M, "upper-bidiagonal");

    const TruncatedOperator s = build_shift(canonical_weights(q, d - 1 > 0 ? d - 1 : 0), d);
    const double qv = q.value();

    Eigen::VectorXd lambda(d); // diag(q^{k/2})
    for (int k = 0; k < d; ++k) {
        lambda(k) = std::pow(qv, 0.5 * k);
    }

    for (int n = 0; n < M; ++n) {
        nop.blocks_[{n, n}] = std::pow(qv, 0.5 * n) * s.entries();
        if (n + 1 < M) {
            const double root = std::sqrt(qcalc::basic_number(n + 1, q).value());
            Eigen::MatrixXcd dn = Eigen::MatrixXcd::Zero(d, d);
            for (int k = 0; k < d; ++k) {
                dn(k, k) = root * lambda(k);
            }
            nop.blocks_[{n, n + 1}] = std::move(dn);
        }
    }
    nop.canonical_build_ = true;
    return nop;
}

namespace {

NormalityResidual exact_normality(const BlockOperator& nop) {
    const QParam& q = nop.q();
    const Rational& qv = q.rational();
    const int d = nop.inner_dim();
    const int M = nop.num_blocks();

    NormalityResidual res;
    res.exact = true;
    res.block_window = {0, M == 1 ? 0 : M - 2};
    res.inner_window = {0, d - 2};
    res.argmax_block = res.block_window.lo;
    res.argmax_inner = res.inner_window.lo;
    if (res.inner_window.empty()) {
        return res;
    }

    // Squared weights of the canonical shift and the two balance identities
    // that make the block commutator vanish on the interior.
    std::vector<Rational> w(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
        w[static_cast<std::size_t>(k)] = qcalc::basic_number(k + 1, q).rational();
    }
    auto qpow = [&](int e) { return rational_pow(qv, e); };
    for (int k = 1; k < d; ++k) {
        // off-diagonal balance on squared entries: q^k w_{k-1} = q * q^{k-1} w_{k-1}
        if (qpow(k) * w[static_cast<std::size_t>(k - 1)] !=
            qv * qpow(k - 1) * w[static_cast<std::size_t>(k - 1)]) {
            throw std::logic_error("normality_residual: off-diagonal balance failed");
        }
    }

    Rational max_abs(0);
    for (int n = res.block_window.lo; n <= res.block_window.hi; ++n) {
        for (int k = res.inner_window.lo; k <= res.inner_window.hi; ++k) {
            const Rational prev = k == 0 ? Rational(0) : w[static_cast<std::size_t>(k - 1)];
            // diagonal defect at (n, k); a single block keeps its selfcommutator
            Rational defect = M == 1 ? (w[static_cast<std::size_t>(k)] - prev)
                                     : qpow(n) * (w[static_cast<std::size_t>(k)] - prev - qpow(k));
            if (defect < 0) {
                defect = -defect;
            }
            if (defect > max_abs) {
                max_abs = defect;
                res.argmax_block = n;
                res.argmax_inner = k;
            }
        }
    }
    res.value = to_double(max_abs);
    return res;
}

} // namespace

NormalityResidual normality_residual(const BlockOperator& nop) {
    if (nop.canonical_build() && nop.q().is_exact()) {
        return exact_normality(nop);
    }
    const int d = nop.inner_dim();
    const int M = nop.num_blocks();
    const Eigen::MatrixXcd full = nop.flatten();
    const Eigen::MatrixXcd comm = full.adjoint() * full - full * full.adjoint();

    NormalityResidual res;
    res.exact = false;
    res.block_window = {0, M == 1 ? 0 : M - 2};
    res.inner_window = {0, d - 2};
    res.argmax_block = res.block_window.lo;
    res.argmax_inner = res.inner_window.lo;
    if (res.inner_window.empty()) {
        return res;
    }
    double best = -1.0;
    for (int n = res.block_window.lo; n <= res.block_window.hi; ++n) {
        for (int k = res.inner_window.lo; k <= res.inner_window.hi; ++k) {
            const double v = comm.col(n * d + k).norm();
            if (v > best) {
                best = v;
                res.argmax_block = n;
                res.argmax_inner = k;
            }
        }
    }
    res.value = best;
    return res;
}

ConsistencyResult extension_consistency(const BlockOperator& nop, const TruncatedOperator& s) {
    if (s.dim() != nop.inner_dim()) {
        throw std::invalid_argument("extension_consistency: inner dimension mismatch");
    }
    double dev = 0.0;
    const Eigen::MatrixXcd* b00 = nop.block(0, 0);
    if (b00 == nullptr) {
        dev = s.entries().cwiseAbs().maxCoeff();
    } else {
        dev = (*b00 - s.entries()).cwiseAbs().maxCoeff();
    }
    for (int r = 1; r < nop.num_blocks(); ++r) {
        const Eigen::MatrixXcd* b = nop.block(r, 0);
        if (b != nullptr) {
            dev = std::max(dev, b->cwiseAbs().maxCoeff());
        }
    }
    return {dev == 0.0, dev};
}

} // namespace qosc::extension
