#pragma once

#include <istream>
#include <string>
#include <vector>

namespace lf {

// Token with its 1-based source column.
struct Token {
  std::string text;
  int col;
};

struct Line {
  int number;
  std::vector<Token> tokens;
};

// Splits on whitespace, drops blank lines and '#' comments. Characters in `punct`
// become standalone tokens.
std::vector<Line> tokenize_lines(std::istream& is, const std::string& punct = "");

long parse_long(const Token& t, int line);

}  // namespace lf
