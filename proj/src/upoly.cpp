#include "lf/upoly.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>

namespace lf {

UPoly::UPoly(std::initializer_list<uint32_t> exps) : UPoly(from_exponents(std::vector<uint32_t>(exps))) {}

UPoly UPoly::monomial(uint32_t e) {
  UPoly p;
  p.e_.push_back(e);
  return p;
}

UPoly UPoly::from_exponents(std::vector<uint32_t> exps) {
  std::sort(exps.begin(), exps.end());
  UPoly p;
  // repeated exponents cancel in pairs
  for (size_t i = 0; i < exps.size();) {
    size_t j = i;
    while (j < exps.size() && exps[j] == exps[i]) ++j;
    if ((j - i) % 2) p.e_.push_back(exps[i]);
    i = j;
  }
  return p;
}

bool UPoly::coeff(uint32_t e) const { return std::binary_search(e_.begin(), e_.end(), e); }

UPoly& UPoly::operator+=(const UPoly& o) {
  if (o.e_.empty()) return *this;
  std::vector<uint32_t> r;
  r.reserve(e_.size() + o.e_.size());
  std::set_symmetric_difference(e_.begin(), e_.end(), o.e_.begin(), o.e_.end(), std::back_inserter(r));
  e_.swap(r);
  return *this;
}

UPoly UPoly::shifted(uint32_t k) const {
  UPoly r = *this;
  for (auto& x : r.e_) x += k;
  return r;
}

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.is_monomial()) return b.shifted(a.e_[0]);
  if (b.is_monomial()) return a.shifted(b.e_[0]);
  std::vector<uint32_t> all;
  all.reserve(a.e_.size() * b.e_.size());
  for (auto x : a.e_)
    for (auto y : b.e_) all.push_back(x + y);
  return UPoly::from_exponents(std::move(all));
}

std::string UPoly::str() const {
  if (e_.empty()) return "0";
  std::string s;
  for (auto it = e_.rbegin(); it != e_.rend(); ++it) {
    if (!s.empty()) s += "+";
    if (*it == 0)
      s += "1";
    else if (*it == 1)
      s += "U";
    else
      s += "U^" + std::to_string(*it);
  }
  return s;
}

std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
  if (b.is_zero()) throw std::domain_error("UPoly division by zero");
  UPoly q, r = a;
  const uint32_t db = b.degree();
  while (!r.is_zero() && r.degree() >= db) {
    uint32_t s = r.degree() - db;
    q += UPoly::monomial(s);
    r += b.shifted(s);
  }
  return {q, r};
}

bool divides(const UPoly& d, const UPoly& a) {
  if (d.is_zero()) return a.is_zero();
  return divmod(a, d).second.is_zero();
}

}  // namespace lf
