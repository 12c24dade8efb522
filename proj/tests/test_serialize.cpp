#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qosc/serialize.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qosc;
using namespace qosc::serialize;
using shiftops::build_shift;
using shiftops::canonical_weights;

TEST_CASE("complex formatting round trips") {
    for (std::complex<double> z :
         {std::complex<double>(1.5, 2.25), std::complex<double>(-0.125, -3.0),
          std::complex<double>(0.0, 0.0), std::complex<double>(1e-17, -2e8)}) {
        CHECK(parse_complex(format_complex(z)) == z);
    }
    CHECK(format_complex({1.5, 2.0}) == "1.5+2i");
    CHECK(format_complex({1.5, -2.0}) == "1.5-2i");
    CHECK_THROWS_AS(parse_complex("1.5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_complex("oops+1i"), std::invalid_argument);
}

TEST_CASE("matrix CSV round trips") {
    Eigen::MatrixXcd m(2, 3);
    m << std::complex<double>(1, 2), std::complex<double>(0, -1), std::complex<double>(0.5, 0),
        std::complex<double>(-2, 0.25), std::complex<double>(3, 3), std::complex<double>(0, 0);
    std::stringstream ss;
    write_matrix_csv(m, ss);
    const Eigen::MatrixXcd back = read_matrix_csv(ss);
    CHECK(back.rows() == 2);
    CHECK(back.cols() == 3);
    CHECK((back - m).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("operator envelope carries metadata") {
    const auto s = build_shift(canonical_weights(QParam::exact(1, 2), 7), 8);
    const auto env = operator_envelope(s);
    CHECK(env["index_origin"] == 0);
    CHECK(env["interior"]["lo"] == 0);
    CHECK(env["interior"]["hi"] == 6);
    CHECK(env["dim"] == 8);
    CHECK(env["provenance"] == "canonical(q=1/2)");

    std::stringstream ss;
    write_operator_csv(s, ss);
    const auto back = read_matrix_csv(ss);
    CHECK((back - s.entries()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("block manifest and flattened export") {
    const auto nop = extension::build_extension(QParam::exact(1, 2), 4, 3);
    const auto manifest = block_manifest(nop);
    CHECK(manifest["q"] == "1/2");
    CHECK(manifest["d"] == 4);
    CHECK(manifest["M"] == 3);
    CHECK(manifest["structure"] == "upper-bidiagonal");
    CHECK(manifest["blocks"].size() == 5); // 3 diagonal + 2 superdiagonal

    const auto dir = std::filesystem::temp_directory_path() / "qosc_block_test";
    std::filesystem::remove_all(dir);
    write_block_csvs(nop, dir);
    CHECK(std::filesystem::exists(dir / "manifest.json"));
    CHECK(std::filesystem::exists(dir / "block_0_0.csv"));
    CHECK(std::filesystem::exists(dir / "block_1_2.csv"));
    CHECK(std::filesystem::exists(dir / "flattened.csv"));

    std::ifstream flat(dir / "flattened.csv");
    const auto full = read_matrix_csv(flat);
    CHECK(full.rows() == 12);
    CHECK((full - nop.flatten()).cwiseAbs().maxCoeff() == 0.0);
    std::filesystem::remove_all(dir);
}

TEST_CASE("measure CSV round trips") {
    const moments::DiscreteMeasure m({0.5, 2.0, 7.25}, {1.0, 0.125, 3.5});
    std::stringstream ss;
    write_measure_csv(m, ss);
    const auto back = read_measure_csv(ss);
    CHECK(back.atoms() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(back.nodes()[static_cast<std::size_t>(i)] == m.nodes()[static_cast<std::size_t>(i)]);
        CHECK(back.masses()[static_cast<std::size_t>(i)] ==
              m.masses()[static_cast<std::size_t>(i)]);
    }
}

TEST_CASE("classification record") {
    const QParam p = QParam::exact(1, 2);
    const auto w = classify::schmudgen_weights(
        classify::SchmudgenSpec::type_ii(p, QNumber::exact(Rational(3, 4))), -4, 4);
    const auto r = classify::classify_weights(w, p);
    const auto j = classify_to_json(r, p);
    CHECK(j["type"] == "II");
    CHECK(j["p"] == "1/2");
    CHECK(j["fitted_a"] == doctest::Approx(0.75));
    CHECK(j["window"]["lo"] == -4);
    CHECK(j["window"]["hi"] == 4);

    const auto none = classify::classify_weights(shiftops::canonical_weights(p, 9), p);
    const auto jn = classify_to_json(none, p);
    CHECK(jn["type"] == "none");
    CHECK(!jn.contains("fitted_a"));
}

TEST_CASE("form envelope") {
    const auto s = build_shift(canonical_weights(QParam::exact(1, 2), 15), 16);
    const auto fr = identities::halmos_bram_form(s, 1, 3);
    const auto env = form_envelope(fr.form);
    CHECK(env["p"] == 1);
    CHECK(env["d_sub"] == 3);
    CHECK(env["dim"] == 6);
    std::stringstream ss;
    write_form_csv(fr.form, ss);
    CHECK(read_matrix_csv(ss).rows() == 6);
}
