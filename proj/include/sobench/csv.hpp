#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace sobench {

/// Doubles printed with %.17g so re-runs with identical inputs produce
/// byte-identical files.
std::string format_double(double v);

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);

  void comment(const std::string& line);  // "# ..." documentation line
  void header(const std::vector<std::string>& names);

  void begin_row();
  void field(double v);
  void field(std::int64_t v);
  void field(int v) { field(static_cast<std::int64_t>(v)); }
  void field(const std::string& s);
  void end_row();

  void row(const std::vector<std::string>& fields);

 private:
  std::ofstream out_;
  bool first_in_row_ = true;
  void sep();
};

}  // namespace sobench
