#include "optibind/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace optibind {

CsvWriter::CsvWriter(const std::string& path) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
}

void CsvWriter::meta(const std::string& key, const std::string& value) {
    out_ << "# " << key << ": " << value << "\n";
}

void CsvWriter::header(const std::vector<std::string>& columns) {
    for (std::size_t i = 0; i < columns.size(); ++i)
        out_ << columns[i] << (i + 1 < columns.size() ? "," : "");
    out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i)
        out_ << format(values[i]) << (i + 1 < values.size() ? "," : "");
    out_ << "\n";
}

std::string CsvWriter::format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m,
                      const std::vector<std::pair<std::string, std::string>>& meta) {
    CsvWriter w(path);
    for (const auto& [k, v] : meta) w.meta(k, v);
    std::vector<std::string> cols;
    for (Eigen::Index c = 0; c < m.cols(); ++c) cols.push_back("c" + std::to_string(c));
    w.header(cols);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        std::vector<double> row(static_cast<std::size_t>(m.cols()));
        for (Eigen::Index c = 0; c < m.cols(); ++c) row[static_cast<std::size_t>(c)] = m(r, c);
        w.row(row);
    }
}

void write_complex_matrix_csv(const std::string& path, const Eigen::MatrixXcd& m,
                              const std::vector<std::pair<std::string, std::string>>& meta) {
    CsvWriter w(path);
    for (const auto& [k, v] : meta) w.meta(k, v);
    std::vector<std::string> cols;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        cols.push_back("c" + std::to_string(c) + "_re");
        cols.push_back("c" + std::to_string(c) + "_im");
    }
    w.header(cols);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        std::vector<double> row;
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c).real());
            row.push_back(m(r, c).imag());
        }
        w.row(row);
    }
}

void write_vector_csv(const std::string& path, const Eigen::VectorXd& v,
                      const std::string& column,
                      const std::vector<std::pair<std::string, std::string>>& meta) {
    CsvWriter w(path);
    for (const auto& [k, val] : meta) w.meta(k, val);
    w.header({column});
    for (Eigen::Index i = 0; i < v.size(); ++i) w.row({v[i]});
}

}  // namespace optibind
