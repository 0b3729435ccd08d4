#include "plasmoheat/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace plasmoheat {

std::string format_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

std::string to_string(const CsvTable& t) {
  std::ostringstream os;
  for (const auto& m : t.meta) os << "# " << m << "\n";
  for (size_t c = 0; c < t.columns.size(); ++c) {
    os << (c ? "," : "") << t.columns[c];
  }
  os << "\n";
  for (const auto& row : t.rows) {
    if (row.size() != t.columns.size())
      throw std::logic_error("csv row width does not match columns");
    for (size_t c = 0; c < row.size(); ++c) {
      os << (c ? "," : "") << format_sci(row[c]);
    }
    os << "\n";
  }
  return os.str();
}

void write_text_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

void write_csv(const std::string& path, const CsvTable& t) {
  write_text_atomic(path, to_string(t));
}

}  // namespace plasmoheat
