#pragma once

// Tabular results and their CSV, JSON and plain-text renderings.
// Floats are written with 12 significant digits so identical runs give
// identical bytes.

#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cavitybec {

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void meta(const std::string& key, const std::string& value);
  void meta(const std::string& key, double value);
};

/// %.12g; nan and inf are spelled out.
std::string format_number(double x);

void write_csv(std::ostream& os, const Table& t);
void write_json(std::ostream& os, const Table& t);
/// Metadata block followed by aligned columns.
void write_text(std::ostream& os, const Table& t);

}  // namespace cavitybec
