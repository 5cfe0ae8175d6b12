#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace lf {

// Rational number with denominator dividing 2, stored as twice its value.
class Half {
 public:
  constexpr Half() = default;
  constexpr Half(int v) : t_(2 * int64_t(v)) {}
  static constexpr Half from_twice(int64_t t) {
    Half h;
    h.t_ = t;
    return h;
  }
  // accepts "3", "-1", "1/2", "-3/2", "0.5"
  static Half parse(const std::string& s);

  constexpr int64_t twice() const { return t_; }
  constexpr bool is_integer() const { return t_ % 2 == 0; }
  int64_t to_int() const;  // throws if not integral

  constexpr Half operator-() const { return from_twice(-t_); }
  friend constexpr Half operator+(Half a, Half b) { return from_twice(a.t_ + b.t_); }
  friend constexpr Half operator-(Half a, Half b) { return from_twice(a.t_ - b.t_); }
  friend constexpr Half operator*(int k, Half a) { return from_twice(k * a.t_); }
  Half& operator+=(Half o) {
    t_ += o.t_;
    return *this;
  }
  Half& operator-=(Half o) {
    t_ -= o.t_;
    return *this;
  }
  friend constexpr bool operator==(Half, Half) = default;
  friend constexpr auto operator<=>(Half, Half) = default;

  std::string str() const;

 private:
  int64_t t_ = 0;
};

struct Bigrading {
  Half maslov;
  Half alexander;

  friend bool operator==(const Bigrading&, const Bigrading&) = default;
  friend Bigrading operator+(Bigrading a, Bigrading b) { return {a.maslov + b.maslov, a.alexander + b.alexander}; }
  friend Bigrading operator-(Bigrading a, Bigrading b) { return {a.maslov - b.maslov, a.alexander - b.alexander}; }
  // grading of U^k times an element of this grading
  Bigrading u_shift(int64_t k) const {
    return {maslov - Half::from_twice(4 * k), alexander - Half::from_twice(2 * k)};
  }
  // single grading surviving U = 1
  Half collapsed() const { return maslov - 2 * alexander; }
  std::string str() const { return "(" + maslov.str() + "," + alexander.str() + ")"; }
};

// (alexander, maslov) lexicographic
inline bool grading_less(const Bigrading& a, const Bigrading& b) {
  if (a.alexander != b.alexander) return a.alexander < b.alexander;
  return a.maslov < b.maslov;
}

}  // namespace lf
