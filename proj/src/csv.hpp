#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "qzvalve/error.hpp"

namespace qzv::csv {

// 17 significant digits, locale independent.
inline std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, end);
}

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) fail(ErrorCode::Io, "cannot write " + path.string());
  }

  void header(const std::vector<std::string>& columns) { line(columns); }

  Writer& field(std::string_view s) {
    if (!first_) row_ += ',';
    row_ += s;
    first_ = false;
    return *this;
  }
  Writer& field(double v) { return field(number(v)); }
  Writer& field(long long v) { return field(std::string_view(std::to_string(v))); }
  Writer& fields(const std::vector<double>& vs) {
    for (double v : vs) field(v);
    return *this;
  }
  void end_row() {
    row_ += '\n';
    out_ << row_;
    row_.clear();
    first_ = true;
  }

  void close() {
    out_.close();
    if (!out_) fail(ErrorCode::Io, "failed writing " + path_.string());
  }

 private:
  void line(const std::vector<std::string>& cells) {
    for (const auto& c : cells) field(c);
    end_row();
  }

  std::filesystem::path path_;
  std::ofstream out_;
  std::string row_;
  bool first_ = true;
};

}  // namespace qzv::csv
