#pragma once

#include <initializer_list>
#include <string>
#include <vector>

namespace plasmoheat {

// Fixed scientific formatting (%.12e): deterministic across runs.
std::string format_sci(double v);

struct CsvTable {
  std::vector<std::string> meta;     // emitted as "# <line>"
  std::vector<std::string> columns;  // header row
  std::vector<std::vector<double>> rows;

  void add_row(std::initializer_list<double> vals) { rows.emplace_back(vals); }
};

std::string to_string(const CsvTable& t);

// Creates parent directories; writes via temp file + rename.
void write_csv(const std::string& path, const CsvTable& t);
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace plasmoheat
