#include "latpilot/table.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace latpilot {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void Table::add_row(std::vector<Cell> cells) {
  if (cells.size() != columns_.size())
    throw std::invalid_argument("table: row arity mismatch");
  for (size_t i = 0; i < cells.size(); ++i) {
    const bool ok =
        (columns_[i].type == ColType::Integer && std::holds_alternative<long long>(cells[i])) ||
        (columns_[i].type == ColType::Real && std::holds_alternative<double>(cells[i])) ||
        (columns_[i].type == ColType::Text && std::holds_alternative<std::string>(cells[i]));
    if (!ok)
      throw std::invalid_argument("table: cell type mismatch in column " +
                                  columns_[i].name);
  }
  rows_.push_back(std::move(cells));
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string cell_to_string(const Table::Cell& cell) {
  if (auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  if (auto* d = std::get_if<double>(&cell)) return format_real(*d);
  return csv_escape(std::get<std::string>(cell));
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

} // namespace

void Table::write_csv(std::ostream& os) const {
  for (size_t i = 0; i < columns_.size(); ++i)
    os << (i ? "," : "") << csv_escape(columns_[i].name);
  os << '\n';
  for (const auto& row : rows_) {
    for (size_t i = 0; i < row.size(); ++i)
      os << (i ? "," : "") << cell_to_string(row[i]);
    os << '\n';
  }
}

void Table::write_json_lines(std::ostream& os) const {
  for (const auto& row : rows_) {
    nlohmann::json obj = nlohmann::json::object();
    for (size_t i = 0; i < row.size(); ++i) {
      const auto& name = columns_[i].name;
      if (auto* v = std::get_if<long long>(&row[i]))
        obj[name] = *v;
      else if (auto* d = std::get_if<double>(&row[i]))
        obj[name] = *d;
      else
        obj[name] = std::get<std::string>(row[i]);
    }
    os << obj.dump() << '\n';
  }
}

Table Table::parse_csv(std::istream& is, const std::vector<Column>& schema) {
  Table out(schema);
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_csv_line(line);
    if (!header_seen) {
      if (fields.size() != schema.size())
        throw std::invalid_argument("table: csv header arity mismatch");
      for (size_t i = 0; i < schema.size(); ++i)
        if (fields[i] != schema[i].name)
          throw std::invalid_argument("table: csv header mismatch at " + fields[i]);
      header_seen = true;
      continue;
    }
    if (fields.size() != schema.size())
      throw std::invalid_argument("table: csv row arity mismatch");
    std::vector<Cell> row;
    row.reserve(fields.size());
    for (size_t i = 0; i < fields.size(); ++i) {
      switch (schema[i].type) {
        case ColType::Integer:
          row.emplace_back(static_cast<long long>(std::stoll(fields[i])));
          break;
        case ColType::Real:
          row.emplace_back(std::stod(fields[i]));
          break;
        case ColType::Text:
          row.emplace_back(fields[i]);
          break;
      }
    }
    out.rows_.push_back(std::move(row));
  }
  return out;
}

bool Table::operator==(const Table& other) const {
  if (columns_.size() != other.columns_.size() || rows_.size() != other.rows_.size())
    return false;
  for (size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i].name != other.columns_[i].name ||
        columns_[i].type != other.columns_[i].type)
      return false;
  return rows_ == other.rows_;
}

} // namespace latpilot
