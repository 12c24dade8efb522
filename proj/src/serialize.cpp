#include "qosc/serialize.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qosc::serialize {

std::string format_complex(std::complex<double> z) {
    std::string s = format_double(z.real());
    const std::string im = format_double(z.imag());
    if (!im.empty() && im[0] == '-') {
        s += im;
    } else {
        s += "+" + im;
    }
    return s + "i";
}

std::complex<double> parse_complex(const std::string& text) {
    if (text.empty() || text.back() != 'i') {
        throw std::invalid_argument("parse_complex: expected 're+imi', got '" + text + "'");
    }
    const std::string body = text.substr(0, text.size() - 1);
    // the imaginary part starts at the last sign that is not an exponent sign
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        const char c = body[k];
        if ((c == '+' || c == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string::npos) {
        throw std::invalid_argument("parse_complex: missing imaginary part in '" + text + "'");
    }
    const double re = std::stod(body.substr(0, split));
    const double im = std::stod(body.substr(split));
    return {re, im};
}

void write_matrix_csv(const Eigen::MatrixXcd& m, std::ostream& os) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) {
                os << ',';
            }
            os << format_complex(m(i, j));
        }
        os << '\n';
    }
}

Eigen::MatrixXcd read_matrix_csv(std::istream& is) {
    std::vector<std::vector<std::complex<double>>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::complex<double>> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            row.push_back(parse_complex(cell));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw std::invalid_argument("read_matrix_csv: empty input");
    }
    const auto cols = rows.front().size();
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) {
            throw std::invalid_argument("read_matrix_csv: ragged rows");
        }
        for (std::size_t j = 0; j < cols; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return m;
}

nlohmann::json window_to_json(const shiftops::IndexWindow& w) {
    return {{"lo", w.lo}, {"hi", w.hi}};
}

nlohmann::json operator_envelope(const shiftops::TruncatedOperator& op) {
    nlohmann::json j;
    j["label"] = op.label();
    j["index_origin"] = op.index_origin();
    j["interior"] = window_to_json(op.interior());
    j["dim"] = op.dim();
    j["provenance"] = op.has_weights() ? op.weights().provenance().str() : "matrix";
    return j;
}

void write_operator_csv(const shiftops::TruncatedOperator& op, std::ostream& os) {
    write_matrix_csv(op.entries(), os);
}

nlohmann::json form_envelope(const identities::HermitianForm& h) {
    nlohmann::json j;
    j["label"] = h.label;
    j["p"] = h.p;
    j["d_sub"] = h.d_sub;
    j["index_map"] = "row(power i, basis a) = i*d_sub + a";
    j["dim"] = h.entries.rows();
    return j;
}

void write_form_csv(const identities::HermitianForm& h, std::ostream& os) {
    write_matrix_csv(h.entries, os);
}

nlohmann::json block_manifest(const extension::BlockOperator& nop) {
    nlohmann::json j;
    j["q"] = nop.q().str();
    j["d"] = nop.inner_dim();
    j["M"] = nop.num_blocks();
    j["structure"] = nop.structure_tag();
    nlohmann::json blocks = nlohmann::json::array();
    for (const auto& [pos, b] : nop.block_map()) {
        (void)b;
        blocks.push_back({{"row", pos.first},
                          {"col", pos.second},
                          {"file", "block_" + std::to_string(pos.first) + "_" +
                                       std::to_string(pos.second) + ".csv"}});
    }
    j["blocks"] = std::move(blocks);
    return j;
}

void write_block_csvs(const extension::BlockOperator& nop, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream manifest(dir / "manifest.json");
        manifest << block_manifest(nop).dump(2) << '\n';
    }
    for (const auto& [pos, b] : nop.block_map()) {
        std::ofstream os(dir / ("block_" + std::to_string(pos.first) + "_" +
                                std::to_string(pos.second) + ".csv"));
        write_matrix_csv(b, os);
    }
    std::ofstream flat(dir / "flattened.csv");
    write_flattened_csv(nop, flat);
}

void write_flattened_csv(const extension::BlockOperator& nop, std::ostream& os) {
    write_matrix_csv(nop.flatten(), os);
}

void write_measure_csv(const moments::DiscreteMeasure& m, std::ostream& os) {
    for (int i = 0; i < m.atoms(); ++i) {
        os << format_double(m.nodes()[static_cast<std::size_t>(i)]) << ','
           << format_double(m.masses()[static_cast<std::size_t>(i)]) << '\n';
    }
}

nlohmann::json classify_to_json(const classify::ClassifyResult& result, const QParam& p) {
    nlohmann::json j;
    j["type"] = classify::to_string(result.cls);
    j["p"] = p.str();
    if (result.fitted_a) {
        j["fitted_a"] = *result.fitted_a;
    }
    j["residual"] = result.residual;
    j["window"] = window_to_json(result.window);
    return j;
}

moments::DiscreteMeasure read_measure_csv(std::istream& is) {
    std::vector<double> nodes;
    std::vector<double> masses;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::invalid_argument("read_measure_csv: expected 'node,mass'");
        }
        nodes.push_back(std::stod(line.substr(0, comma)));
        masses.push_back(std::stod(line.substr(comma + 1)));
    }
    return moments::DiscreteMeasure(std::move(nodes), std::move(masses));
}

} // namespace qosc::serialize
