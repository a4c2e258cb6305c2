#include "clmkit/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "clmkit/errors.hpp"

namespace clmkit {

namespace {

// Splits one physical line; assumes quotes never span lines (no embedded
// newlines in this format).
std::vector<std::string> split_row(const std::string& line, std::size_t row_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"' && cur.empty()) {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (quoted)
    throw ParseError("unterminated quote", row_no, fields.size());
  fields.push_back(std::move(cur));
  return fields;
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value))
    throw ParseError("cell '" + cell + "' is not a finite number", row, col);
  return value;
}

}  // namespace

std::vector<std::vector<std::string>> read_csv_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::size_t row_no = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.peek() == std::ifstream::traits_type::eof()) break;
    rows.push_back(split_row(line, row_no));
    ++row_no;
  }
  return rows;
}

Dataset load_csv(const std::string& path, LabelColumn label) {
  auto rows = read_csv_rows(path);
  if (rows.empty()) throw ParseError("'" + path + "' is empty");

  const auto& header = rows.front();
  const std::size_t n_cols = header.size();
  if (n_cols < 2)
    throw ParseError("need at least one feature column and a label column");

  std::size_t label_col = n_cols - 1;
  if (label.index) {
    if (*label.index >= n_cols)
      throw ParseError("label column index " + std::to_string(*label.index) +
                       " out of range");
    label_col = *label.index;
  } else if (label.name) {
    bool found = false;
    for (std::size_t c = 0; c < n_cols; ++c)
      if (header[c] == *label.name) {
        label_col = c;
        found = true;
        break;
      }
    if (!found) throw ParseError("no column named '" + *label.name + "'");
  }

  std::vector<std::string> feature_names;
  for (std::size_t c = 0; c < n_cols; ++c)
    if (c != label_col) feature_names.push_back(header[c]);

  const std::size_t n_rows = rows.size() - 1;
  if (n_rows < 2) throw InvalidDataset("fewer than 2 data rows");

  Matrix pts(n_rows, n_cols - 1);
  std::vector<std::string> labels(n_rows);
  for (std::size_t r = 0; r < n_rows; ++r) {
    const auto& fields = rows[r + 1];
    if (fields.size() != n_cols)
      throw ParseError("row has " + std::to_string(fields.size()) +
                           " fields, expected " + std::to_string(n_cols),
                       r + 1, 0);
    std::size_t out_c = 0;
    for (std::size_t c = 0; c < n_cols; ++c) {
      if (c == label_col) {
        labels[r] = fields[c];
      } else {
        pts(r, out_c++) = parse_cell(fields[c], r + 1, c);
      }
    }
  }

  Dataset ds = Dataset::from_labels(std::move(pts), labels,
                                    std::move(feature_names), header[label_col]);
  if (ds.n_classes() < 2)
    throw InvalidDataset("label column has fewer than 2 distinct values");
  return ds;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += "\"\"";
    else out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

void write_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  for (std::size_t c = 0; c < ds.dims(); ++c)
    out << csv_escape(ds.feature_names()[c]) << ',';
  out << csv_escape(ds.label_column_name()) << '\n';
  for (std::size_t r = 0; r < ds.size(); ++r) {
    auto row = ds.points().row(r);
    for (std::size_t c = 0; c < ds.dims(); ++c)
      out << format_double(row[c]) << ',';
    out << csv_escape(ds.label_names()[static_cast<std::size_t>(ds.labels()[r])])
        << '\n';
  }
  if (!out) throw ParseError("failed writing '" + path + "'");
}

}  // namespace clmkit
