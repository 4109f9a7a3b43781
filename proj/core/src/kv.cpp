#include "updrift/kv.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace updrift {

namespace {

constexpr std::int64_t kSchemaVersion = 1;

bool parse_int(std::string_view text, std::int64_t& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

bool parse_double(std::string_view text, double& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

KvValue parse_scalar(std::string_view text) {
  if (text == "true") return true;
  if (text == "false") return false;
  std::int64_t i = 0;
  if (parse_int(text, i)) return i;
  double d = 0.0;
  if (parse_double(text, d)) return d;
  return std::string(text);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == std::floor(v) && std::fabs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.0f.0", v);
    return buf;
  }
  // Shortest representation that parses back to the same double.
  for (int precision = 1; precision <= 17; ++precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    double back = 0.0;
    std::string_view sv(buf);
    if (parse_double(sv, back) && back == v) {
      std::string out(sv);
      // Keep doubles distinguishable from ints in the document.
      if (out.find_first_of(".einf") == std::string::npos) out += ".0";
      return out;
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_value(const KvValue& v) {
  switch (v.index()) {
    case 0: return std::get<bool>(v) ? "true" : "false";
    case 1: return std::to_string(std::get<std::int64_t>(v));
    case 2: return format_double(std::get<double>(v));
    default: return std::get<std::string>(v);
  }
}

KvDoc::KvDoc() { entries_.emplace_back("schema_version", kSchemaVersion); }

void KvDoc::set(std::string key, KvValue value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(std::move(key), std::move(value));
}

bool KvDoc::has(std::string_view key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return true;
  return false;
}

const KvValue& KvDoc::get(std::string_view key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  throw std::out_of_range("KvDoc::get: no key " + std::string(key));
}

std::int64_t KvDoc::get_int(std::string_view key) const {
  return std::get<std::int64_t>(get(key));
}

double KvDoc::get_double(std::string_view key) const {
  const KvValue& v = get(key);
  if (std::holds_alternative<std::int64_t>(v))
    return static_cast<double>(std::get<std::int64_t>(v));
  return std::get<double>(v);
}

bool KvDoc::get_bool(std::string_view key) const { return std::get<bool>(get(key)); }

const std::string& KvDoc::get_string(std::string_view key) const {
  return std::get<std::string>(get(key));
}

std::string KvDoc::serialize() const {
  std::string out;
  for (const auto& [k, v] : entries_) {
    out += k;
    out += " = ";
    out += format_value(v);
    out += '\n';
  }
  return out;
}

KvDoc KvDoc::parse(std::string_view text) {
  KvDoc doc;
  doc.entries_.clear();
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                           : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    std::size_t sep = line.find('=');
    if (sep == std::string_view::npos)
      throw std::runtime_error("KvDoc::parse: missing '=' in line: " + std::string(line));
    std::string key(trim(line.substr(0, sep)));
    if (key.empty()) throw std::runtime_error("KvDoc::parse: empty key");
    doc.entries_.emplace_back(std::move(key), parse_scalar(trim(line.substr(sep + 1))));
  }
  return doc;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw std::invalid_argument("CsvTable: empty header");
}

void CsvTable::add_row(std::vector<KvValue> row) {
  if (row.size() != header_.size())
    throw std::invalid_argument("CsvTable::add_row: width mismatch");
  rows_.push_back(std::move(row));
}

std::string CsvTable::serialize() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i) out += ',';
    out += header_[i];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_value(row[i]);
    }
    out += '\n';
  }
  return out;
}

CsvTable CsvTable::parse(std::string_view text) {
  std::vector<std::vector<std::string>> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                           : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::size_t cell_start = 0;
    while (true) {
      std::size_t comma = line.find(',', cell_start);
      cells.emplace_back(trim(line.substr(
          cell_start, comma == std::string_view::npos ? line.size() - cell_start
                                                      : comma - cell_start)));
      if (comma == std::string_view::npos) break;
      cell_start = comma + 1;
    }
    lines.push_back(std::move(cells));
  }
  if (lines.empty()) throw std::runtime_error("CsvTable::parse: no header line");
  CsvTable table(lines.front());
  for (std::size_t r = 1; r < lines.size(); ++r) {
    std::vector<KvValue> row;
    row.reserve(lines[r].size());
    for (const auto& cell : lines[r]) row.push_back(parse_scalar(cell));
    table.add_row(std::move(row));
  }
  return table;
}

}  // namespace updrift
