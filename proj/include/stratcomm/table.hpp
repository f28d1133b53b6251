#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace stratcomm {

/// Column-labelled numeric table. Non-finite cells are written empty.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
};

/// Numbers with 12 significant digits, '.' decimal separator.
std::string format_number(double x);

/// Header row then one newline-terminated record per row.
void write_csv(std::ostream& out, const Table& table);

}  // namespace stratcomm
