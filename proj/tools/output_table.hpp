#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace telex::cli {

/// Rectangular table of reals with optional key/value metadata.
///
/// CSV: metadata as leading "# key=value" lines, then a header row and one
/// row per record, every number printed with 17 significant digits.
/// JSON: {"metadata": {...}, "rows": [{column: value, ...}, ...]}.
class OutputTable {
 public:
  explicit OutputTable(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }
  const std::vector<std::pair<std::string, std::string>>& metadata() const noexcept {
    return metadata_;
  }

  /// Throws std::invalid_argument if the row width differs from the header.
  void add_row(std::vector<double> row);
  void set_meta(const std::string& key, const std::string& value);
  void set_meta(const std::string& key, double value);

  void write_csv(std::ostream& os) const;
  void write_json(std::ostream& os) const;

  /// Parses the CSV written by write_csv.
  static OutputTable read_csv(std::istream& is);

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
  std::vector<std::pair<std::string, std::string>> metadata_;
};

/// %.17g, with non-finite values spelled nan / inf / -inf.
std::string format_real(double v);

}  // namespace telex::cli
