#pragma once

#include <Eigen/Dense>
#include <fstream>
#include <string>
#include <vector>

namespace optibind {

// CSV files carry "#"-prefixed metadata lines, one header line, then data.
// Doubles are printed with 17 significant digits so files round-trip and are
// byte-stable for fixed inputs. Complex matrices are written as re/im column
// pairs.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path);
    void meta(const std::string& key, const std::string& value);
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);
    static std::string format(double v);

  private:
    std::ofstream out_;
};

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m,
                      const std::vector<std::pair<std::string, std::string>>& meta = {});
void write_complex_matrix_csv(const std::string& path, const Eigen::MatrixXcd& m,
                              const std::vector<std::pair<std::string, std::string>>& meta = {});
void write_vector_csv(const std::string& path, const Eigen::VectorXd& v,
                      const std::string& column,
                      const std::vector<std::pair<std::string, std::string>>& meta = {});

}  // namespace optibind
