#pragma once

#include <Eigen/Dense>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace optoarray {

using Cell = std::variant<double, std::string>;

/// Rectangular table written as CSV: comma separated, '\n' line endings,
/// doubles in shortest-exact form with 17 significant digits.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

std::string format_double(double value);
void write_csv(std::ostream& os, const Table& table);
std::string to_csv(const Table& table);
void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m);

}  // namespace optoarray
