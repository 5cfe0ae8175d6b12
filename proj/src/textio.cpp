#include "lf/textio.hpp"

#include <cctype>

#include "lf/errors.hpp"

namespace lf {

std::vector<Line> tokenize_lines(std::istream& is, const std::string& punct) {
  std::vector<Line> out;
  std::string s;
  int no = 0;
  while (std::getline(is, s)) {
    ++no;
    if (auto h = s.find('#'); h != std::string::npos) s.resize(h);
    Line ln{no, {}};
    size_t i = 0;
    while (i < s.size()) {
      unsigned char ch = s[i];
      if (std::isspace(ch)) {
        ++i;
        continue;
      }
      if (punct.find(char(ch)) != std::string::npos) {
        ln.tokens.push_back({std::string(1, char(ch)), int(i) + 1});
        ++i;
        continue;
      }
      size_t j = i;
      while (j < s.size() && !std::isspace((unsigned char)s[j]) && punct.find(s[j]) == std::string::npos) ++j;
      ln.tokens.push_back({s.substr(i, j - i), int(i) + 1});
      i = j;
    }
    if (!ln.tokens.empty()) out.push_back(std::move(ln));
  }
  return out;
}

long parse_long(const Token& t, int line) {
  try {
    size_t pos = 0;
    long v = std::stol(t.text, &pos);
    if (pos == t.text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError(line, t.col, "expected integer, got '" + t.text + "'");
}

}  // namespace lf
