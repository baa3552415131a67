#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace latpilot {

/// Column-typed table backing the CLI outputs. CSV carries a mandatory
/// header row and prints reals with 17 significant digits so that parsing
/// the file reproduces the table exactly.
class Table {
 public:
  enum class ColType { Integer, Real, Text };
  using Cell = std::variant<long long, double, std::string>;

  struct Column {
    std::string name;
    ColType type;
  };

  Table() = default;
  explicit Table(std::vector<Column> columns) : columns_(std::move(columns)) {}

  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  size_t row_count() const { return rows_.size(); }

  void add_row(std::vector<Cell> cells);

  void write_csv(std::ostream& os) const;
  /// One JSON object per row, one row per line.
  void write_json_lines(std::ostream& os) const;

  /// Parses CSV produced by write_csv. Lines starting with '#' are skipped.
  static Table parse_csv(std::istream& is, const std::vector<Column>& schema);

  bool operator==(const Table& other) const;

 private:
  std::vector<Column> columns_;
  std::vector<std::vector<Cell>> rows_;
};

std::string format_real(double v); ///< %.17g

} // namespace latpilot
