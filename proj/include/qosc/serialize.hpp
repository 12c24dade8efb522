#pragma once

#include "qosc/classify.hpp"
#include "qosc/extension.hpp"
#include "qosc/identities.hpp"
#include "qosc/moments.hpp"
#include "qosc/shiftops.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>

namespace qosc::serialize {

/// "re+imi" with round-trip-exact decimal parts, e.g. "1.5+0.25i", "2-1i".
std::string format_complex(std::complex<double> z);
std::complex<double> parse_complex(const std::string& text);

/// Dense row-major CSV of complex entries.
void write_matrix_csv(const Eigen::MatrixXcd& m, std::ostream& os);
Eigen::MatrixXcd read_matrix_csv(std::istream& is);

nlohmann::json window_to_json(const shiftops::IndexWindow& w);

/// Metadata envelope; entries travel separately as CSV.
nlohmann::json operator_envelope(const shiftops::TruncatedOperator& op);
void write_operator_csv(const shiftops::TruncatedOperator& op, std::ostream& os);

nlohmann::json form_envelope(const identities::HermitianForm& h);
void write_form_csv(const identities::HermitianForm& h, std::ostream& os);

/// Manifest with q, d, M and the structure tag; per-block CSV files and a
/// flattened (M*d) x (M*d) export live next to it.
nlohmann::json block_manifest(const extension::BlockOperator& nop);
void write_block_csvs(const extension::BlockOperator& nop, const std::filesystem::path& dir);
void write_flattened_csv(const extension::BlockOperator& nop, std::ostream& os);

/// "node,mass" lines.
void write_measure_csv(const moments::DiscreteMeasure& m, std::ostream& os);
moments::DiscreteMeasure read_measure_csv(std::istream& is);

/// {type, p, fitted_a?, residual, window}.
nlohmann::json classify_to_json(const classify::ClassifyResult& result, const QParam& p);

} // namespace qosc::serialize
