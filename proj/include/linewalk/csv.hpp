#pragma once

// Plain CSV output with round-trip number formatting.

#include <cstdio>
#include <cstdlib>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace linewalk {

/// Shortest "%.17g" rendering; reads back to the same double.
inline std::string format_number(double v) {
  char buf[40];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(&out) {}

  void header(std::initializer_list<std::string_view> names) {
    bool first = true;
    for (auto n : names) {
      if (!first) *out_ << ',';
      *out_ << n;
      first = false;
    }
    *out_ << '\n';
  }

  CsvWriter& field(double v) { return raw(format_number(v)); }
  CsvWriter& field(std::size_t v) { return raw(std::to_string(v)); }
  CsvWriter& field(long long v) { return raw(std::to_string(v)); }
  CsvWriter& field(int v) { return raw(std::to_string(v)); }
  CsvWriter& field(bool v) { return raw(v ? "1" : "0"); }
  CsvWriter& field(std::string_view v) { return raw(std::string(v)); }
  CsvWriter& field(const char* v) { return raw(v); }
  void end_row() {
    *out_ << '\n';
    first_ = true;
  }

 private:
  CsvWriter& raw(const std::string& s) {
    if (!first_) *out_ << ',';
    *out_ << s;
    first_ = false;
    return *this;
  }

  std::ostream* out_;
  bool first_ = true;
};

}  // namespace linewalk
