#include "stratcomm/table.hpp"

#include <cmath>
#include <cstdio>

#include "stratcomm/error.hpp"

namespace stratcomm {

void Table::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) throw Error(ErrorKind::kDimensionMismatch, "table row has wrong width");
  rows.push_back(std::move(row));
}

std::string format_number(double x) {
  if (!std::isfinite(x)) return "";
  if (x == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
}

}  // namespace stratcomm
