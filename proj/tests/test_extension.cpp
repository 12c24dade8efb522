#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qosc/extension.hpp"
#include "qosc/qcalc.hpp"

#include <cmath>

using namespace qosc;
using namespace qosc::extension;
using shiftops::build_shift;
using shiftops::canonical_weights;

namespace {

// Dense oracle: interior-max column norm of N*N - NN* on the flattened matrix.
double flat_commutator_residual(const BlockOperator& nop) {
    const Eigen::MatrixXcd full = nop.flatten();
    const Eigen::MatrixXcd comm = full.adjoint() * full - full * full.adjoint();
    const int d = nop.inner_dim();
    const int block_hi = nop.num_blocks() == 1 ? 0 : nop.num_blocks() - 2;
    double best = 0.0;
    for (int n = 0; n <= block_hi; ++n) {
        for (int k = 0; k <= d - 2; ++k) {
            best = std::max(best, comm.col(n * d + k).norm());
        }
    }
    return best;
}

} // namespace

TEST_CASE("build_extension block structure") {
    const QParam q = QParam::exact(1, 2);
    const auto nop = build_extension(q, 3, 2);
    CHECK(nop.structure_tag() == "upper-bidiagonal");
    CHECK(nop.canonical_build());

    // S_1 = q^{1/2} S
    const auto s = build_shift(canonical_weights(q, 2), 3);
    REQUIRE(nop.block(1, 1) != nullptr);
    CHECK((*nop.block(1, 1) - std::sqrt(0.5) * s.entries()).cwiseAbs().maxCoeff() < 1e-15);

    // D_1 = sqrt([1]_q) diag(q^{k/2}) = diag(1, 2^{-1/2}, 1/2)
    REQUIRE(nop.block(0, 1) != nullptr);
    const auto& d1 = *nop.block(0, 1);
    CHECK(d1(0, 0).real() == doctest::Approx(1.0));
    CHECK(d1(1, 1).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(d1(2, 2).real() == doctest::Approx(0.5));

    // only the diagonal and first superdiagonal blocks exist
    CHECK(nop.block(1, 0) == nullptr);
    CHECK(nop.block_map().size() == 3);

    CHECK_THROWS_AS(build_extension(QParam::exact(0), 3, 2), std::domain_error);
    CHECK_THROWS_AS(build_extension(QParam::exact(-1, 2), 3, 2), std::domain_error);
}

TEST_CASE("build_extension at q = 1 has D_n = sqrt(n) I") {
    const auto nop = build_extension(QParam::exact(1), 4, 3);
    for (int n = 1; n < 3; ++n) {
        REQUIRE(nop.block(n - 1, n) != nullptr);
        const auto& dn = *nop.block(n - 1, n);
        for (int k = 0; k < 4; ++k) {
            CHECK(dn(k, k).real() == doctest::Approx(std::sqrt(static_cast<double>(n))));
        }
    }
}

TEST_CASE("M = 1 reduces to the single block S") {
    const QParam q = QParam::exact(1, 2);
    const auto nop = build_extension(q, 6, 1);
    const auto s = build_shift(canonical_weights(q, 5), 6);
    CHECK((*nop.block(0, 0) - s.entries()).cwiseAbs().maxCoeff() == 0.0);

    // the residual is the non-normality of S itself: max_n <C e_n, e_n> = 1
    const auto r = normality_residual(nop);
    CHECK(r.exact);
    CHECK(r.value == doctest::Approx(1.0));
    CHECK(r.argmax_inner == 0);
    // ... which the dense commutator confirms
    CHECK(flat_commutator_residual(nop) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("normality residual vanishes exactly on the interior") {
    for (long num : {1L, 2L, 4L}) {
        const QParam q = QParam::exact(num, 2);
        const auto nop = build_extension(q, 12, 6);
        const auto r = normality_residual(nop);
        CHECK(r.exact);
        CHECK(r.value == 0.0);
        CHECK(r.block_window.hi == 4);
        CHECK(r.inner_window.hi == 10);
    }
}

TEST_CASE("normality residual float path matches the exact claim") {
    for (double qv : {0.5, 1.0, 2.0}) {
        const QParam q = QParam::floating(qv);
        const auto nop = build_extension(q, 8, 4);
        const auto r = normality_residual(nop);
        CHECK(!r.exact);
        const double scale = std::max(1.0, std::pow(qv, 8 + 4));
        CHECK(r.value <= 1e-12 * scale);
        CHECK(std::abs(r.value - flat_commutator_residual(nop)) <= 1e-12 * scale);
    }
}

TEST_CASE("normality residual is non-increasing in d and M") {
    const QParam q = QParam::floating(0.5);
    double prev = 1e9;
    for (int s : {4, 8, 16}) {
        const auto r = normality_residual(build_extension(q, s, s));
        CHECK(r.value <= prev + 1e-12);
        prev = r.value;
    }
}

TEST_CASE("extension consistency") {
    const QParam q = QParam::exact(2);
    auto nop = build_extension(q, 6, 3);
    const auto s = build_shift(canonical_weights(q, 5), 6);
    const auto ok = extension_consistency(nop, s);
    CHECK(ok.consistent);
    CHECK(ok.max_deviation == 0.0);

    // corrupting block (1,0) is detected with the corruption magnitude
    Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(6, 6);
    bad(2, 3) = std::complex<double>(0.25, 0.0);
    nop.set_block(1, 0, bad);
    CHECK(!nop.canonical_build());
    const auto detect = extension_consistency(nop, s);
    CHECK(!detect.consistent);
    CHECK(detect.max_deviation == doctest::Approx(0.25));

    // dimension mismatch is an error
    const auto small = build_shift(canonical_weights(q, 3), 4);
    CHECK_THROWS_AS(extension_consistency(nop, small), std::invalid_argument);
}

TEST_CASE("corrupted diagonal block shows up in the float residual") {
    const QParam q = QParam::exact(1, 2);
    auto nop = build_extension(q, 6, 3);
    Eigen::MatrixXcd tweaked = *nop.block(0, 0);
    tweaked(3, 2) += 0.1;
    nop.set_block(0, 0, tweaked);
    const auto r = normality_residual(nop); // falls back to the dense path
    CHECK(!r.exact);
    CHECK(r.value > 1e-3);
}

TEST_CASE("diagonal and off-diagonal balance identities") {
    // q^n <C e_k, e_k> = q^n q^k and q^k w_{k-1} = q q^{k-1} w_{k-1}
    for (long num : {1L, 2L, 4L}) {
        const QParam q = QParam::exact(num, 2);
        for (int n = 0; n < 5; ++n) {
            for (int k = 0; k < 10; ++k) {
                const Rational ck = 1 + (q.rational() - 1) *
                                            (k == 0 ? Rational(0)
                                                    : qcalc::basic_number(k, q).rational());
                CHECK(rational_pow(q.rational(), n) * ck ==
                      rational_pow(q.rational(), n + k));
            }
        }
    }
}
