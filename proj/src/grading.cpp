#include "lf/grading.hpp"

#include <stdexcept>

namespace lf {

namespace {
int64_t parse_int(const std::string& s) {
  size_t pos = 0;
  long long v = std::stoll(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad number: " + s);
  return v;
}
}  // namespace

Half Half::parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty grading");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    int64_t num = parse_int(s.substr(0, slash));
    int64_t den = parse_int(s.substr(slash + 1));
    if (den == 1) return from_twice(2 * num);
    if (den == 2) return from_twice(num);
    throw std::invalid_argument("denominator must divide 2: " + s);
  }
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string frac = s.substr(dot + 1);
    std::string whole = s.substr(0, dot);
    bool neg = !whole.empty() && whole[0] == '-';
    int64_t w = (whole.empty() || whole == "-") ? 0 : parse_int(whole);
    int64_t t = 2 * (w < 0 ? -w : w);
    if (frac == "5")
      t += 1;
    else if (frac.find_first_not_of('0') != std::string::npos)
      throw std::invalid_argument("denominator must divide 2: " + s);
    return from_twice(neg ? -t : t);
  }
  return from_twice(2 * parse_int(s));
}

int64_t Half::to_int() const {
  if (!is_integer()) throw std::logic_error("grading " + str() + " is not integral");
  return t_ / 2;
}

std::string Half::str() const {
  if (t_ % 2 == 0) return std::to_string(t_ / 2);
  return std::to_string(t_) + "/2";
}

}  // namespace lf
