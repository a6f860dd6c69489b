#include "toml.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "io_errors.hpp"

namespace blmcli {

double TomlValue::as_number(const std::string& context) const {
  if (!is_number()) {
    throw IOError(context + ": expected a number (line " + std::to_string(line_) + ")");
  }
  return std::get<double>(value_);
}

const std::string& TomlValue::as_string(const std::string& context) const {
  if (!is_string()) {
    throw IOError(context + ": expected a quoted string (line " + std::to_string(line_) + ")");
  }
  return std::get<std::string>(value_);
}

bool TomlValue::as_bool(const std::string& context) const {
  if (!is_bool()) {
    throw IOError(context + ": expected true or false (line " + std::to_string(line_) + ")");
  }
  return std::get<bool>(value_);
}

const TomlValue::Array& TomlValue::as_array(const std::string& context) const {
  if (!is_array()) {
    throw IOError(context + ": expected an array (line " + std::to_string(line_) + ")");
  }
  return std::get<Array>(value_);
}

const TomlValue& TomlTable::at(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    throw IOError(file_ + ": missing required key '" + key + "'");
  }
  return it->second;
}

const TomlValue* TomlTable::find(const std::string& key) const {
  const auto it = values_.find(key);
  return it == values_.end() ? nullptr : &it->second;
}

double TomlTable::number_or(const std::string& key, double fallback) const {
  const TomlValue* v = find(key);
  return v ? v->as_number(file_ + ": " + key) : fallback;
}

bool TomlTable::bool_or(const std::string& key, bool fallback) const {
  const TomlValue* v = find(key);
  return v ? v->as_bool(file_ + ": " + key) : fallback;
}

std::string TomlTable::string_or(const std::string& key, const std::string& fallback) const {
  const TomlValue* v = find(key);
  return v ? v->as_string(file_ + ": " + key) : fallback;
}

const TomlTable& TomlDocument::table(const std::string& name) const {
  const auto it = tables_.find(name);
  return it == tables_.end() ? empty_ : it->second;
}

namespace {

struct Cursor {
  const std::string& text;
  size_t pos = 0;
  int line = 1;
  const std::string& file;

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  void advance() {
    if (text[pos] == '\n') ++line;
    ++pos;
  }
  void skip_spaces() {
    while (!done() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) advance();
  }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(file, line, what); }
};

bool is_bare_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

std::string parse_bare_key(Cursor& cur) {
  std::string key;
  while (!cur.done() && is_bare_key_char(cur.peek())) {
    key.push_back(cur.peek());
    cur.advance();
  }
  if (key.empty()) cur.fail("expected a key");
  return key;
}

std::string parse_quoted(Cursor& cur) {
  cur.advance();  // opening quote
  std::string out;
  while (!cur.done() && cur.peek() != '"') {
    if (cur.peek() == '\n') cur.fail("unterminated string");
    if (cur.peek() == '\\') {
      cur.advance();
      if (cur.done()) cur.fail("unterminated escape");
      switch (cur.peek()) {
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        default: cur.fail("unsupported escape sequence");
      }
      cur.advance();
      continue;
    }
    out.push_back(cur.peek());
    cur.advance();
  }
  if (cur.done()) cur.fail("unterminated string");
  cur.advance();  // closing quote
  return out;
}

double parse_number(Cursor& cur) {
  const size_t start = cur.pos;
  while (!cur.done() && (std::isdigit(static_cast<unsigned char>(cur.peek())) ||
                         cur.peek() == '+' || cur.peek() == '-' || cur.peek() == '.' ||
                         cur.peek() == 'e' || cur.peek() == 'E' || cur.peek() == '_')) {
    cur.advance();
  }
  std::string token = cur.text.substr(start, cur.pos - start);
  std::erase(token, '_');
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    cur.fail("malformed number '" + token + "'");
  }
  return value;
}

TomlValue parse_value(Cursor& cur);

TomlValue::Array parse_array(Cursor& cur) {
  cur.advance();  // '['
  TomlValue::Array items;
  while (true) {
    cur.skip_spaces();
    while (!cur.done() && cur.peek() == '\n') {
      cur.advance();
      cur.skip_spaces();
    }
    if (cur.done()) cur.fail("unterminated array");
    if (cur.peek() == ']') {
      cur.advance();
      return items;
    }
    items.push_back(parse_value(cur));
    cur.skip_spaces();
    if (!cur.done() && cur.peek() == ',') {
      cur.advance();
      continue;
    }
  }
}

TomlValue parse_value(Cursor& cur) {
  const int line = cur.line;
  cur.skip_spaces();
  if (cur.done()) cur.fail("expected a value");
  const char c = cur.peek();
  if (c == '"') return TomlValue(parse_quoted(cur), line);
  if (c == '[') return TomlValue(parse_array(cur), line);
  if (std::isalpha(static_cast<unsigned char>(c))) {
    const std::string word = parse_bare_key(cur);
    if (word == "true") return TomlValue(true, line);
    if (word == "false") return TomlValue(false, line);
    cur.fail("unquoted value '" + word + "' (strings need quotes)");
  }
  return TomlValue(parse_number(cur), line);
}

}  // namespace

TomlDocument parse_toml_string(const std::string& text, const std::string& file_label) {
  Cursor cur{text, 0, 1, file_label};
  std::map<std::string, std::map<std::string, TomlValue>> tables;
  std::string current;

  while (!cur.done()) {
    cur.skip_spaces();
    if (cur.done()) break;
    const char c = cur.peek();
    if (c == '\n') {
      cur.advance();
      continue;
    }
    if (c == '#') {
      while (!cur.done() && cur.peek() != '\n') cur.advance();
      continue;
    }
    if (c == '[') {
      cur.advance();
      cur.skip_spaces();
      current = parse_bare_key(cur);
      cur.skip_spaces();
      if (cur.done() || cur.peek() != ']') cur.fail("expected ']' after table name");
      cur.advance();
      tables.try_emplace(current);
      continue;
    }
    const std::string key = parse_bare_key(cur);
    cur.skip_spaces();
    if (cur.done() || cur.peek() != '=') cur.fail("expected '=' after key '" + key + "'");
    cur.advance();
    cur.skip_spaces();
    TomlValue value = parse_value(cur);
    cur.skip_spaces();
    if (!cur.done() && cur.peek() == '#') {
      while (!cur.done() && cur.peek() != '\n') cur.advance();
    }
    if (!cur.done() && cur.peek() != '\n') cur.fail("unexpected trailing characters");
    if (!tables[current].try_emplace(key, std::move(value)).second) {
      cur.fail("duplicate key '" + key + "'");
    }
  }

  std::map<std::string, TomlTable> out;
  for (auto& [name, values] : tables) {
    out.try_emplace(name, TomlTable(file_label, std::move(values)));
  }
  return TomlDocument(file_label, std::move(out));
}

TomlDocument parse_toml_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IOError("cannot open config file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_toml_string(buffer.str(), path);
}

}  // namespace blmcli
