#pragma once

#include <stdexcept>
#include <string>

namespace blmcli {

/// Malformed input file; the message carries file and 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& file, int line, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
        file(file),
        line(line) {}
  std::string file;
  int line;
};

class IOError : public std::runtime_error {
 public:
  explicit IOError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace blmcli
