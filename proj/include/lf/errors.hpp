#pragma once

#include <stdexcept>
#include <string>

namespace lf {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int col, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int column() const { return col_; }

 private:
  int line_, col_;
};

class ConsistencyError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ResourceLimitError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace lf
