#include "output_table.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace telex::cli {

namespace {

double parse_real(const std::string& cell) {
  if (cell == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (cell == "inf") return std::numeric_limits<double>::infinity();
  if (cell == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || end != cell.data() + cell.size())
    throw std::invalid_argument("not a number: '" + cell + "'");
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

OutputTable::OutputTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void OutputTable::add_row(std::vector<double> row) {
  if (row.size() != columns_.size())
    throw std::invalid_argument("row width does not match the header");
  rows_.push_back(std::move(row));
}

void OutputTable::set_meta(const std::string& key, const std::string& value) {
  for (auto& kv : metadata_) {
    if (kv.first == key) {
      kv.second = value;
      return;
    }
  }
  metadata_.emplace_back(key, value);
}

void OutputTable::set_meta(const std::string& key, double value) {
  set_meta(key, format_real(value));
}

void OutputTable::write_csv(std::ostream& os) const {
  for (const auto& [k, v] : metadata_) os << "# " << k << '=' << v << '\n';
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
  os << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_real(row[i]);
    os << '\n';
  }
}

void OutputTable::write_json(std::ostream& os) const {
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : metadata_) meta[k] = v;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : rows_) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      // JSON has no non-finite numbers
      if (std::isfinite(row[i]))
        obj[columns_[i]] = row[i];
      else
        obj[columns_[i]] = nullptr;
    }
    rows.push_back(std::move(obj));
  }
  nlohmann::ordered_json doc;
  doc["metadata"] = std::move(meta);
  doc["rows"] = std::move(rows);
  os << doc.dump(2) << '\n';
}

OutputTable OutputTable::read_csv(std::istream& is) {
  std::string line;
  std::vector<std::pair<std::string, std::string>> meta;
  while (std::getline(is, line) && line.rfind("# ", 0) == 0) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("bad metadata line: " + line);
    meta.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
  }
  if (line.empty()) throw std::invalid_argument("missing header row");
  OutputTable t(split(line));
  t.metadata_ = std::move(meta);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& cell : split(line)) row.push_back(parse_real(cell));
    t.add_row(std::move(row));
  }
  return t;
}

}  // namespace telex::cli
