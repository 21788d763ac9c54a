#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace nsk {

/// Number formatting used in every CSV: %.17g, with nan / inf spelled out.
std::string csv_number(double v);

/// Small in-memory CSV table. Cells are stored as text; numbers go through
/// csv_number so repeated runs give byte-identical files.
class CsvTable {
 public:
  CsvTable() = default;
  explicit CsvTable(std::vector<std::string> header);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  void add_row(std::vector<std::string> cells);
  void add_row(const std::vector<double>& values);

  /// Index of a column, or -1.
  int column(const std::string& name) const;
  /// Numeric column; non-numeric cells become nan.
  std::vector<double> numbers(const std::string& name) const;

  std::string to_string() const;
  void write(const std::filesystem::path& path) const;

  /// Comma-separated, no quoting. FormatError on ragged rows.
  static CsvTable parse(const std::string& text);
  static CsvTable read(const std::filesystem::path& path);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace nsk
