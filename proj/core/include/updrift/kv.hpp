#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace updrift {

using KvValue = std::variant<bool, std::int64_t, double, std::string>;

/// Canonical number formatting: shortest text that round-trips the double
/// exactly, identical across runs.
std::string format_double(double v);
std::string format_value(const KvValue& v);

/// Ordered key = value document. Keys are snake_case, may be dotted for
/// nesting; every document carries schema_version = 1 up front.
class KvDoc {
 public:
  KvDoc();

  void set(std::string key, KvValue value);
  void set_int(std::string key, std::int64_t v) { set(std::move(key), v); }
  void set_double(std::string key, double v) { set(std::move(key), v); }
  void set_bool(std::string key, bool v) { set(std::move(key), v); }
  void set_string(std::string key, std::string v) { set(std::move(key), std::move(v)); }

  bool has(std::string_view key) const;
  const KvValue& get(std::string_view key) const;
  std::int64_t get_int(std::string_view key) const;
  double get_double(std::string_view key) const;  // accepts int-valued entries
  bool get_bool(std::string_view key) const;
  const std::string& get_string(std::string_view key) const;

  const std::vector<std::pair<std::string, KvValue>>& entries() const { return entries_; }

  std::string serialize() const;
  static KvDoc parse(std::string_view text);  // throws std::runtime_error on bad input

  bool operator==(const KvDoc&) const = default;

 private:
  std::vector<std::pair<std::string, KvValue>> entries_;
};

/// Comma-separated table for sweeps; first line is the header.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  const std::vector<std::string>& header() const { return header_; }
  void add_row(std::vector<KvValue> row);  // throws on width mismatch
  std::size_t rows() const { return rows_.size(); }
  const std::vector<KvValue>& row(std::size_t i) const { return rows_[i]; }

  std::string serialize() const;
  static CsvTable parse(std::string_view text);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<KvValue>> rows_;
};

}  // namespace updrift
