#pragma once

#include <charconv>
#include <complex>
#include <fstream>
#include <string>
#include <vector>

#include "cauchyfact/error.hpp"

namespace cauchyfact {

// Shortest round-trip decimal form; identical bits print identically.
inline std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

// Minimal CSV table with a fixed header. Rows are buffered so a failed run
// writes nothing.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  class Row {
   public:
    Row& operator<<(double v) { return add(format_real(v)); }
    Row& operator<<(int v) { return add(std::to_string(v)); }
    Row& operator<<(long v) { return add(std::to_string(v)); }
    Row& operator<<(long long v) { return add(std::to_string(v)); }
    Row& operator<<(std::size_t v) { return add(std::to_string(v)); }
    Row& operator<<(const std::string& v) { return add(v); }
    Row& operator<<(const char* v) { return add(v); }

   private:
    friend class CsvTable;
    explicit Row(std::string* line) : line_(line) {}
    Row& add(const std::string& cell) {
      if (!line_->empty()) line_->push_back(',');
      line_->append(cell);
      return *this;
    }
    std::string* line_;
  };

  Row row() {
    rows_.emplace_back();
    return Row(&rows_.back());
  }

  std::size_t size() const { return rows_.size(); }

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < header_.size(); ++i) {
      if (i) out.push_back(',');
      out += header_[i];
    }
    out.push_back('\n');
    for (const auto& r : rows_) {
      out += r;
      out.push_back('\n');
    }
    return out;
  }

  void write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << str();
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::string> rows_;
};

}  // namespace cauchyfact
