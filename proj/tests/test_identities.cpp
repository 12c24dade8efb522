#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qosc/identities.hpp"
#include "qosc/qcalc.hpp"

#include <cmath>

using namespace qosc;
using namespace qosc::identities;
using shiftops::build_shift;
using shiftops::canonical_weights;

namespace {

// Brute-force oracle: both sides of the mixed-product expansion as full
// dense matrix products, column-relative residual over the given columns.
double x5_matrix_oracle(const shiftops::TruncatedOperator& s, const QParam& q, int i, int j,
                        const shiftops::IndexWindow& win) {
    const auto& a = s.entries();
    const int d = s.dim();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
    const Eigen::MatrixXcd c = id + (q.value() - 1.0) * (a * a.adjoint());

    auto power = [&](const Eigen::MatrixXcd& m, int t) {
        Eigen::MatrixXcd acc = id;
        for (int k = 0; k < t; ++k) {
            acc = acc * m;
        }
        return acc;
    };

    Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(d, d);
    for (int k = 0; k <= std::min(i, j); ++k) {
        const double coef = qcalc::q_factorial(k, q).value() *
                            qcalc::q_binomial(i, k, q).value() *
                            qcalc::q_binomial(j, k, q).value();
        rhs += coef * (power(a, j - k) * power(c, k) * power(a.adjoint(), i - k));
    }
    const Eigen::MatrixXcd lhs = power(a.adjoint(), i) * power(a, j);
    const Eigen::MatrixXcd diff = lhs - rhs;
    double best = 0.0;
    for (int n = win.lo; n <= win.hi; ++n) {
        const double scale = std::max(1.0, lhs.col(s.col_of(n)).norm());
        best = std::max(best, diff.col(s.col_of(n)).norm() / scale);
    }
    return best;
}

} // namespace

TEST_CASE("x5 holds exactly for canonical shifts over the q grid") {
    for (long num : {-1L, 0L, 1L, 2L, 4L}) {
        const QParam q = QParam::exact(num, 2);
        const auto s = build_shift(canonical_weights(q, 23), 24);
        for (int i = 0; i <= 4; ++i) {
            for (int j = 0; j <= 4; ++j) {
                const auto r = verify_x5(s, q, i, j);
                CHECK(r.exact);
                CHECK(r.residual == 0.0);
            }
        }
    }
}

TEST_CASE("x5 float path matches the dense oracle") {
    for (double qv : {-0.5, 0.5, 2.0}) {
        const QParam q = QParam::floating(qv);
        const auto s = build_shift(canonical_weights(q, 15), 16);
        for (int i = 0; i <= 3; ++i) {
            for (int j = 0; j <= 3; ++j) {
                const auto r = verify_x5(s, q, i, j);
                CHECK(!r.exact);
                const double oracle = x5_matrix_oracle(s, q, i, j, r.columns);
                CHECK(r.residual <= 1e-10);
                CHECK(oracle <= 1e-10);
                CHECK(std::abs(r.residual - oracle) <= 1e-12);
            }
        }
    }
}

TEST_CASE("x5 trivial cases") {
    const QParam q = QParam::exact(1, 2);
    const auto s = build_shift(canonical_weights(q, 15), 16);
    // i = 0: both sides reduce to S^j
    for (int j = 0; j <= 4; ++j) {
        CHECK(verify_x5(s, q, 0, j).residual == 0.0);
    }
    // i = j = 1 is the selfcommutator identity S*S = SS* + C
    CHECK(verify_x5(s, q, 1, 1).residual == 0.0);
}

TEST_CASE("x5 exposes weights that do not satisfy the relation") {
    const auto w = shiftops::WeightSequence::unilateral(std::vector<Rational>{1, 1, 1, 1, 1, 1});
    const auto s = build_shift(w, 6);
    const auto r = verify_x5(s, QParam::exact(1, 2), 1, 1);
    CHECK(r.exact);
    CHECK(r.residual > 0.0);
}

TEST_CASE("x5 holds on bilateral solutions with the window shrunk at both ends") {
    const QParam q = QParam::exact(1, 2);
    const auto w = shiftops::bilateral_weights(q, QNumber::exact(Rational(3)), 0, -8, 8);
    const auto s = build_shift(w, w.size());
    for (int i = 0; i <= 3; ++i) {
        for (int j = 0; j <= 3; ++j) {
            const auto r = verify_x5(s, q, i, j);
            CHECK(r.exact);
            CHECK(r.residual == 0.0);
            CHECK(r.columns.lo == -8 + i + j);
            CHECK(r.columns.hi == 8 - i - j);
        }
    }
}

TEST_CASE("x5 on the scaled unitary solution: C vanishes and powers commute") {
    const QParam q = QParam::exact(1, 2);
    const auto s = shiftops::normal_solution(q, 8, shiftops::UnitarySpec::CyclicShift);
    for (int i = 0; i <= 3; ++i) {
        CHECK(verify_x5(s, q, i, i).residual < 1e-12);
    }
}

TEST_CASE("x5 interior exhaustion is an error") {
    const QParam q = QParam::exact(1, 2);
    const auto s = build_shift(canonical_weights(q, 1), 2);
    CHECK_THROWS_AS(verify_x5(s, q, 3, 3), std::domain_error);
}

TEST_CASE("x8 at p = 0 is the plain norm") {
    const QParam q = QParam::exact(1, 2);
    const auto s = build_shift(canonical_weights(q, 15), 16);
    Eigen::VectorXcd f = Eigen::VectorXcd::Zero(16);
    f(0) = std::complex<double>(0.3, -0.4);
    f(2) = 1.0;
    CHECK(verify_x8(s, q, {f}, 0) == 0.0);
}

TEST_CASE("x8 holds for canonical shifts") {
    const QParam qh = QParam::exact(1, 2);
    const auto s = build_shift(canonical_weights(qh, 23), 24);
    Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(24);
    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(24);
    e0(0) = 1.0;
    e1(1) = 1.0;
    CHECK(verify_x8(s, qh, {e0, e1}, 1) < 1e-12);

    const QParam q2 = QParam::exact(2);
    const auto s2 = build_shift(canonical_weights(q2, 23), 24);
    const auto family = seeded_family(s2, 2, 6, 1234);
    CHECK(verify_x8(s2, q2, family, 2) < 1e-10);
}

TEST_CASE("x8 rejects a selfcommutator with negative interior eigenvalues") {
    const QParam q = QParam::exact(-1, 2);
    const auto s = build_shift(canonical_weights(q, 15), 16);
    const auto family = seeded_family(s, 1, 4, 99);
    CHECK_THROWS_AS(verify_x8(s, q, family, 1), std::domain_error);
}

TEST_CASE("x8 rejects families touching the truncation boundary") {
    const QParam q = QParam::exact(1, 2);
    const auto s = build_shift(canonical_weights(q, 15), 16);
    Eigen::VectorXcd f = Eigen::VectorXcd::Zero(16);
    f(15) = 1.0;
    CHECK_THROWS_AS(verify_x8(s, q, {f, f}, 1), std::invalid_argument);
}

TEST_CASE("halmos_bram_form: identity Gram at p = 0") {
    const QParam q = QParam::exact(1, 2);
    const auto s = build_shift(canonical_weights(q, 15), 16);
    const auto fr = halmos_bram_form(s, 0, 5);
    CHECK(fr.form.entries.rows() == 5);
    CHECK((fr.form.entries - Eigen::MatrixXcd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(fr.min_eigenvalue == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("halmos_bram_form is positive semidefinite in the subnormal regimes") {
    for (long num : {1L, 2L, 4L}) {
        const QParam q = QParam::exact(num, 2);
        const auto s = build_shift(canonical_weights(q, 23), 24);
        const auto fr = halmos_bram_form(s, 2, 6);
        CHECK(fr.min_eigenvalue >= -1e-10);
        // Hermitian within the declared tolerance
        CHECK((fr.form.entries - fr.form.entries.adjoint()).cwiseAbs().maxCoeff() <=
              1e-12 * std::max(1.0, fr.form.entries.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("halmos_bram_form detects the q < 0 failure of positivity") {
    const QParam q = QParam::exact(-1, 2);
    const auto s = build_shift(canonical_weights(q, 23), 24);
    const auto fr = halmos_bram_form(s, 2, 6);
    CHECK(fr.min_eigenvalue < -1e-6);
}

TEST_CASE("submatrix eigenvalue interlacing: smaller families are no more negative") {
    const QParam q = QParam::exact(1, 2);
    const auto s = build_shift(canonical_weights(q, 23), 24);
    const double m_small = halmos_bram_form(s, 2, 4).min_eigenvalue;
    const double m_large = halmos_bram_form(s, 2, 6).min_eigenvalue;
    CHECK(m_small >= m_large - 1e-12);
    const double p_small = halmos_bram_form(s, 1, 6).min_eigenvalue;
    const double p_large = halmos_bram_form(s, 2, 6).min_eigenvalue;
    CHECK(p_small >= p_large - 1e-12);
}

TEST_CASE("halmos_bram_form interior exhaustion") {
    const QParam q = QParam::exact(1, 2);
    const auto s = build_shift(canonical_weights(q, 7), 8);
    CHECK_THROWS_AS(halmos_bram_form(s, 4, 6), std::domain_error);
}

TEST_CASE("x8 matches the form value on the same family") {
    const QParam q = QParam::exact(1, 2);
    const auto s = build_shift(canonical_weights(q, 23), 24);
    const int p = 2;
    const int d_sub = 6;
    const auto family = seeded_family(s, p, d_sub, 4321);
    const auto fr = halmos_bram_form(s, p, d_sub);

    // LHS of the norm identity equals the quadratic form value; the identity
    // then says both equal the RHS norm sum, so the residual bounds their gap.
    const double lhs_form = form_value(fr.form, family);
    const double residual = verify_x8(s, q, family, p);

    double lhs_direct = 0.0;
    {
        const auto& a = s.entries();
        std::vector<Eigen::MatrixXcd> pows{Eigen::MatrixXcd::Identity(24, 24)};
        for (int t = 1; t <= p; ++t) {
            pows.push_back(pows.back() * a);
        }
        std::complex<double> acc = 0.0;
        for (int i = 0; i <= p; ++i) {
            for (int j = 0; j <= p; ++j) {
                acc += (pows[static_cast<std::size_t>(j)] * family[static_cast<std::size_t>(i)])
                           .dot(pows[static_cast<std::size_t>(i)] *
                                family[static_cast<std::size_t>(j)]);
            }
        }
        lhs_direct = acc.real();
    }
    CHECK(lhs_form == doctest::Approx(lhs_direct).epsilon(1e-10));
    CHECK(residual <= 2e-10 * std::max(1.0, std::abs(lhs_form)));
}
