#pragma once

#include <optional>
#include <string>
#include <vector>

#include "clmkit/dataset.hpp"

namespace clmkit {

/// Which column holds the labels. Unset = last column. A name is matched
/// against the header; an index is zero-based.
struct LabelColumn {
  std::optional<std::string> name;
  std::optional<std::size_t> index;

  static LabelColumn last() { return {}; }
  static LabelColumn by_name(std::string n) { return {std::move(n), {}}; }
  static LabelColumn by_index(std::size_t i) { return {{}, i}; }
};

/// Reads a comma-separated file (UTF-8, header row required, '.' decimal
/// separator, double-quote escaping). Every non-label cell must parse as a
/// finite real. Row order and label strings are preserved verbatim.
Dataset load_csv(const std::string& path, LabelColumn label = LabelColumn::last());

/// Writes the dataset back out: header (feature names + label column), then
/// one row per point. Doubles use shortest round-trip formatting, so
/// load_csv(write_csv(ds)) reproduces the numeric content exactly.
void write_csv(const Dataset& ds, const std::string& path);

/// Shortest round-trip decimal rendering of a double.
std::string format_double(double v);

/// Minimal CSV row reader/writer shared with the CLI (quotes handled).
std::vector<std::vector<std::string>> read_csv_rows(const std::string& path);
std::string csv_escape(const std::string& field);

}  // namespace clmkit
