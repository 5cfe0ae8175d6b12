#include "lf/calc_expr.hpp"

#include <cctype>
#include <sstream>

#include "lf/errors.hpp"

namespace lf::calc {

namespace {

const std::string kUnion = "⊔";

struct Tok {
  enum Kind { Name, Int, Op, End } kind;
  std::string text;
  int col;
};

std::vector<Tok> lex(const std::string& s) {
  std::vector<Tok> out;
  size_t i = 0;
  auto err = [&](size_t at, const std::string& m) { throw ParseError(1, int(at) + 1, m); };
  while (i < s.size()) {
    unsigned char c = s[i];
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    size_t start = i;
    if (s.compare(i, kUnion.size(), kUnion) == 0) {
      out.push_back({Tok::Op, kUnion, int(start) + 1});
      i += kUnion.size();
      continue;
    }
    if (c == '#' || c == '(' || c == ')' || c == '^' || c == '[' || c == ']' || c == ',') {
      out.push_back({Tok::Op, std::string(1, char(c)), int(start) + 1});
      ++i;
      continue;
    }
    if (std::isdigit(c) || (c == '-' && i + 1 < s.size() && std::isdigit((unsigned char)s[i + 1]))) {
      ++i;
      while (i < s.size() && std::isdigit((unsigned char)s[i])) ++i;
      out.push_back({Tok::Int, s.substr(start, i - start), int(start) + 1});
      continue;
    }
    if (std::isalpha(c)) {
      while (i < s.size() && (std::isalnum((unsigned char)s[i]) || s[i] == '_')) ++i;
      std::string id = s.substr(start, i - start);
      auto take_group = [&](char open, char close) {
        if (i < s.size() && s[i] == open) {
          size_t e = s.find(close, i);
          if (e == std::string::npos) err(i, std::string("missing '") + close + "'");
          i = e + 1;
        }
      };
      if (id == "L" || id == "NL") take_group('(', ')');
      if (!id.empty() && id.back() == '_') {
        if (i < s.size() && s[i] == '{')
          take_group('{', '}');
        else {
          if (i < s.size() && s[i] == '-') ++i;
          while (i < s.size() && std::isdigit((unsigned char)s[i])) ++i;
        }
      }
      if ((id == "H" || id == "stab") && i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
      if (id == "pair" && i < s.size() && s[i] == '@') ++i;
      out.push_back({Tok::Name, s.substr(start, i - start), int(start) + 1});
      continue;
    }
    err(i, std::string("unexpected character '") + s[i] + "'");
  }
  out.push_back({Tok::End, "", int(s.size()) + 1});
  return out;
}

struct Value {
  SumTree tree;
  bool transverse = false;
};

class Parser {
 public:
  explicit Parser(std::vector<Tok> t) : t_(std::move(t)) {}

  CalcResult run() {
    CalcResult r;
    if (peek().kind == Tok::Name && peek().text == "pair@") {
      int col = peek().col;
      ++p_;
      r.pair_edge = int_token();
      Value v = parse_union();
      expect_end();
      if (v.transverse) throw ParseError(1, col, "pair@ needs a Legendrian expression");
      r.pair = alexander_pair(v.tree, r.pair_edge);
      r.tree = std::move(v.tree);
      return r;
    }
    Value v = parse_union();
    expect_end();
    r.tree = std::move(v.tree);
    r.transverse = v.transverse;
    return r;
  }

 private:
  const Tok& peek() const { return t_[p_]; }
  [[noreturn]] void fail(const Tok& t, const std::string& m) const { throw ParseError(1, t.col, m); }

  bool accept_op(const std::string& op) {
    if (peek().kind == Tok::Op && peek().text == op) {
      ++p_;
      return true;
    }
    return false;
  }
  void expect_op(const std::string& op) {
    if (!accept_op(op)) fail(peek(), "expected '" + op + "'");
  }
  int int_token() {
    if (peek().kind != Tok::Int) fail(peek(), "expected an integer");
    return std::stoi(t_[p_++].text);
  }
  void expect_end() {
    if (peek().kind != Tok::End) fail(peek(), "unexpected '" + peek().text + "'");
  }

  Value parse_union() {
    Value v = parse_sum();
    while (true) {
      const Tok& t = peek();
      bool is_union = (t.kind == Tok::Op && t.text == kUnion) || (t.kind == Tok::Name && t.text == "u");
      if (!is_union) break;
      ++p_;
      Value w = parse_sum();
      if (v.transverse != w.transverse) fail(t, "cannot combine transverse and Legendrian values");
      v.tree = sum_leaf(disjoint_union(v.tree.value, w.tree.value));
    }
    return v;
  }

  Value parse_sum() {
    Value v = parse_postfix();
    while (peek().kind == Tok::Op && peek().text == "#") {
      const Tok& op = peek();
      ++p_;
      int ca = 0, cb = 0;
      if (accept_op("[")) {
        ca = int_token();
        expect_op(",");
        cb = int_token();
        expect_op("]");
      }
      Value w = parse_postfix();
      if (v.transverse != w.transverse) fail(op, "cannot combine transverse and Legendrian values");
      try {
        v.tree = sum_node(std::move(v.tree), std::move(w.tree), ca, cb);
      } catch (const std::invalid_argument& e) {
        fail(op, e.what());
      }
    }
    return v;
  }

  Value parse_postfix() {
    Value v = parse_primary();
    while (true) {
      const Tok& t = peek();
      if (t.kind == Tok::Op && t.text == "^") {
        ++p_;
        int k = int_token();
        if (k < 1) fail(t, "exponent must be positive");
        if (v.transverse) fail(t, "powers apply to Legendrian values");
        v.tree = sum_leaf(power(v.tree.value, k));
      } else if (t.kind == Tok::Name && (t.text == "stab+" || t.text == "stab-")) {
        ++p_;
        if (v.transverse) fail(t, "stabilization applies to Legendrian values");
        v.tree = sum_leaf(stabilize(v.tree.value, t.text.back() == '+' ? 1 : -1));
      } else if (t.kind == Tok::Name && t.text == "pushoff") {
        ++p_;
        if (v.transverse) fail(t, "value is already transverse");
        v.transverse = true;
      } else {
        break;
      }
    }
    return v;
  }

  Value parse_primary() {
    const Tok& t = peek();
    if (accept_op("(")) {
      Value v = parse_union();
      expect_op(")");
      return v;
    }
    if (t.kind != Tok::Name) fail(t, t.kind == Tok::End ? "unexpected end of expression" : "expected a name");
    ++p_;
    auto d = lookup(t.text);
    if (!d) fail(t, "undefined name '" + t.text + "'");
    return Value{sum_leaf(*d), false};
  }

  std::vector<Tok> t_;
  size_t p_ = 0;
};

}  // namespace

CalcResult evaluate(const std::string& expression) { return Parser(lex(expression)).run(); }

std::string report_text(const CalcResult& r) {
  std::ostringstream os;
  if (r.transverse) {
    os << to_text(r.transverse_value());
    return os.str();
  }
  const auto& d = r.legendrian();
  os << to_text(d);
  Bigrading g = gradings_from_classical(d);
  os << "classical_grading " << g.str() << "\n";
  auto rep = vanishing_and_torsion(d);
  os << "consistency " << (rep.ok() ? "pass" : "fail") << "\n";
  for (const auto& f : rep.failures) os << "  failure " << f << "\n";
  if (r.pair) os << "alexander_pair@" << r.pair_edge << " " << r.pair->str() << "\n";
  return os.str();
}

}  // namespace lf::calc
