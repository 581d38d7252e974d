#include "firmrecon/csv.hpp"

#include <charconv>
#include <cmath>

#include "firmrecon/error.hpp"

namespace firmrecon::csv {

std::string format(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format(std::uint64_t x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

double parse_double(std::string_view field, std::string_view what) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double x = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), x);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size() || !std::isfinite(x)) {
    fail(ErrorCode::ParseError, "bad number '" + std::string(field) + "' for " + std::string(what));
  }
  return x;
}

std::uint64_t parse_uint(std::string_view field, std::string_view what) {
  field = trim(field);
  std::uint64_t x = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), x);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    fail(ErrorCode::ParseError, "bad integer '" + std::string(field) + "' for " + std::string(what));
  }
  return x;
}

bool parse_bool(std::string_view field, std::string_view what) {
  field = trim(field);
  if (field == "1" || field == "true") return true;
  if (field == "0" || field == "false") return false;
  fail(ErrorCode::ParseError, "bad flag '" + std::string(field) + "' for " + std::string(what));
}

Reader::Reader(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), in_(path), width_(header.size()) {
  if (!in_) fail(ErrorCode::InputUnreadable, "cannot open " + path.string());
  std::vector<std::string_view> fields;
  if (!next(fields)) fail(ErrorCode::ParseError, path.string() + ": missing header");
  bool match = fields.size() == header.size();
  for (std::size_t k = 0; match && k < header.size(); ++k) {
    std::string_view f = fields[k];
    if (k == 0 && f.starts_with("\xEF\xBB\xBF")) f.remove_prefix(3);
    match = f == header[k];
  }
  if (!match) {
    std::string want;
    for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
    fail(ErrorCode::ParseError, path.string() + ": header must be '" + want + "'");
  }
}

bool Reader::next(std::vector<std::string_view>& fields) {
  while (std::getline(in_, buffer_)) {
    ++line_;
    std::string_view row = trim(buffer_);
    if (row.empty()) continue;
    fields.clear();
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = row.find(',', start);
      fields.push_back(trim(row.substr(start, comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (line_ > 2 && fields.size() != width_) {
      fail(ErrorCode::ParseError, path_.string() + ":" + std::to_string(line_ - 1) +
                                      ": expected " + std::to_string(width_) + " fields");
    }
    return true;
  }
  return false;
}

Writer::Writer(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary) {
  if (!out_) fail(ErrorCode::OutputUnwritable, "cannot write " + path.string());
  for (const auto& h : header) field(h);
  end_row();
}

Writer& Writer::field(std::string_view s) {
  if (!first_) out_.put(',');
  out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  first_ = false;
  return *this;
}

void Writer::end_row() {
  out_.put('\n');
  first_ = true;
}

void Writer::close() {
  out_.close();
  if (!out_) fail(ErrorCode::OutputUnwritable, "failed writing " + path_.string());
}

}  // namespace firmrecon::csv
