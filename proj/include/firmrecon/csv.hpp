#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace firmrecon::csv {

// Shortest round-trip decimal form.
std::string format(double x);
std::string format(std::uint64_t x);

double parse_double(std::string_view field, std::string_view what);
std::uint64_t parse_uint(std::string_view field, std::string_view what);
bool parse_bool(std::string_view field, std::string_view what);

// Plain comma-separated reader: no quoting, header must match exactly.
class Reader {
 public:
  Reader(const std::filesystem::path& path, const std::vector<std::string>& header);

  // False at end of file. Blank lines are skipped.
  bool next(std::vector<std::string_view>& fields);
  std::size_t line() const noexcept { return line_; }
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::string buffer_;
  std::size_t width_;
  std::size_t line_ = 1;
};

class Writer {
 public:
  Writer(const std::filesystem::path& path, const std::vector<std::string>& header);

  Writer& field(std::string_view s);
  Writer& field(double x) { return field(format(x)); }
  Writer& field(std::uint64_t x) { return field(format(x)); }
  Writer& field(std::uint32_t x) { return field(format(std::uint64_t{x})); }
  void end_row();
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  bool first_ = true;
};

}  // namespace firmrecon::csv
