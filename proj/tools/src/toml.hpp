#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace blmcli {

/// Minimal TOML reader covering what run configs need: [table] and
/// [table.sub] headers, bare keys, strings, numbers, booleans and
/// one-dimensional arrays of numbers or strings. Comments start with '#'.
class TomlValue {
 public:
  using Array = std::vector<TomlValue>;
  using Storage = std::variant<bool, double, std::string, Array>;

  explicit TomlValue(Storage v, int line) : value_(std::move(v)), line_(line) {}

  int line() const { return line_; }
  bool is_string() const { return std::holds_alternative<std::string>(value_); }
  bool is_number() const { return std::holds_alternative<double>(value_); }
  bool is_bool() const { return std::holds_alternative<bool>(value_); }
  bool is_array() const { return std::holds_alternative<Array>(value_); }

  double as_number(const std::string& context) const;
  const std::string& as_string(const std::string& context) const;
  bool as_bool(const std::string& context) const;
  const Array& as_array(const std::string& context) const;

 private:
  Storage value_;
  int line_;
};

class TomlTable {
 public:
  TomlTable() = default;
  TomlTable(std::string file, std::map<std::string, TomlValue> values)
      : file_(std::move(file)), values_(std::move(values)) {}

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const TomlValue& at(const std::string& key) const;
  const TomlValue* find(const std::string& key) const;

  double number_or(const std::string& key, double fallback) const;
  bool bool_or(const std::string& key, bool fallback) const;
  std::string string_or(const std::string& key, const std::string& fallback) const;

  const std::string& file() const { return file_; }
  const std::map<std::string, TomlValue>& values() const { return values_; }

 private:
  std::string file_;
  std::map<std::string, TomlValue> values_;
};

/// Parsed document: dotted table names map to flat keys ("model.kernel").
class TomlDocument {
 public:
  TomlDocument(std::string file, std::map<std::string, TomlTable> tables)
      : file_(std::move(file)), tables_(std::move(tables)) {}

  bool has_table(const std::string& name) const { return tables_.count(name) > 0; }
  /// Missing tables come back empty, which keeps optional blocks optional.
  const TomlTable& table(const std::string& name) const;
  const std::string& file() const { return file_; }

 private:
  std::string file_;
  std::map<std::string, TomlTable> tables_;
  TomlTable empty_;
};

TomlDocument parse_toml_file(const std::string& path);
TomlDocument parse_toml_string(const std::string& text, const std::string& file_label);

}  // namespace blmcli
