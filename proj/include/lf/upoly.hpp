#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace lf {

// Polynomial over F2 in one variable U, stored as its sorted set of exponents.
class UPoly {
 public:
  UPoly() = default;
  UPoly(std::initializer_list<uint32_t> exps);
  static UPoly one() { return monomial(0); }
  static UPoly monomial(uint32_t e);
  static UPoly from_exponents(std::vector<uint32_t> exps);

  bool is_zero() const { return e_.empty(); }
  bool is_one() const { return e_.size() == 1 && e_[0] == 0; }
  bool is_monomial() const { return e_.size() == 1; }
  // degree of the leading term; undefined on zero
  uint32_t degree() const { return e_.back(); }
  uint32_t low_degree() const { return e_.front(); }
  const std::vector<uint32_t>& exponents() const { return e_; }
  bool coeff(uint32_t e) const;

  UPoly& operator+=(const UPoly& o);
  UPoly shifted(uint32_t k) const;  // times U^k

  friend UPoly operator+(const UPoly& a, const UPoly& b) {
    UPoly r = a;
    r += b;
    return r;
  }
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  friend bool operator==(const UPoly& a, const UPoly& b) = default;
  friend auto operator<=>(const UPoly& a, const UPoly& b) = default;

  std::string str() const;

 private:
  std::vector<uint32_t> e_;
};

// quotient and remainder, throws std::domain_error on division by zero
std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b);
bool divides(const UPoly& d, const UPoly& a);

}  // namespace lf
