#include "sobench/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace sobench {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

CsvWriter::CsvWriter(const std::string& path) : out_(path) {
  if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
}

void CsvWriter::comment(const std::string& line) { out_ << "# " << line << "\n"; }

void CsvWriter::header(const std::vector<std::string>& names) { row(names); }

void CsvWriter::begin_row() { first_in_row_ = true; }

void CsvWriter::sep() {
  if (!first_in_row_) out_ << ",";
  first_in_row_ = false;
}

void CsvWriter::field(double v) {
  sep();
  out_ << format_double(v);
}

void CsvWriter::field(std::int64_t v) {
  sep();
  out_ << v;
}

void CsvWriter::field(const std::string& s) {
  sep();
  out_ << s;
}

void CsvWriter::end_row() { out_ << "\n"; }

void CsvWriter::row(const std::vector<std::string>& fields) {
  begin_row();
  for (const auto& f : fields) field(f);
  end_row();
}

}  // namespace sobench
