#include "cavitybec/output.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace cavitybec {

void Table::meta(const std::string& key, const std::string& value) { metadata.emplace_back(key, value); }

void Table::meta(const std::string& key, double value) { metadata.emplace_back(key, format_number(value)); }

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace {

std::string cell_text(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return format_number(*d);
  return std::get<std::string>(c);
}

// Quote a CSV field only when it needs it.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

nlohmann::ordered_json json_cell(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return nullptr;
    // Round through the 12-digit text so JSON and CSV carry the same value.
    return std::strtod(format_number(*d).c_str(), nullptr);
  }
  return std::get<std::string>(c);
}

}  // namespace

void write_csv(std::ostream& os, const Table& t) {
  for (const auto& [k, v] : t.metadata) os << "# " << k << " = " << v << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(cell_text(row[i]));
    os << '\n';
  }
}

void write_json(std::ostream& os, const Table& t) {
  nlohmann::ordered_json doc;
  doc["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.metadata) doc["metadata"][k] = v;
  doc["columns"] = t.columns;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (const auto& c : row) r.push_back(json_cell(c));
    doc["rows"].push_back(std::move(r));
  }
  os << doc.dump(2) << '\n';
}

void write_text(std::ostream& os, const Table& t) {
  std::size_t kw = 0;
  for (const auto& kv : t.metadata) kw = std::max(kw, kv.first.size());
  for (const auto& [k, v] : t.metadata) os << k << std::string(kw - k.size() + 2, ' ') << v << '\n';
  if (t.columns.empty()) return;
  os << '\n';
  std::vector<std::size_t> w(t.columns.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = t.columns[i].size();
  std::vector<std::vector<std::string>> text;
  for (const auto& row : t.rows) {
    auto& r = text.emplace_back();
    for (std::size_t i = 0; i < row.size(); ++i) {
      r.push_back(cell_text(row[i]));
      if (i < w.size()) w[i] = std::max(w[i], r.back().size());
    }
  }
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      os << cells[i];
      if (i + 1 < cells.size()) os << std::string(w[i] - cells[i].size() + 2, ' ');
    }
    os << '\n';
  };
  line(t.columns);
  for (const auto& r : text) line(r);
}

}  // namespace cavitybec
