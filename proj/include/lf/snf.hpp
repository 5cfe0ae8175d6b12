#pragma once

#include <vector>

#include "lf/upoly.hpp"

namespace lf {

class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(size_t r, size_t c) : r_(r), c_(c), a_(r * c) {}
  static PolyMatrix identity(size_t n);

  size_t rows() const { return r_; }
  size_t cols() const { return c_; }
  UPoly& at(size_t i, size_t j) { return a_[i * c_ + j]; }
  const UPoly& at(size_t i, size_t j) const { return a_[i * c_ + j]; }

  void swap_rows(size_t i, size_t j);
  void swap_cols(size_t i, size_t j);
  void add_row_multiple(size_t dst, size_t src, const UPoly& q);  // row dst += q * row src
  void add_col_multiple(size_t dst, size_t src, const UPoly& q);  // col dst += q * col src

  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);
  friend bool operator==(const PolyMatrix&, const PolyMatrix&) = default;

 private:
  size_t r_ = 0, c_ = 0;
  std::vector<UPoly> a_;
};

// P * M * Q = D with P, Q invertible (inverses kept as certificates) and
// D diagonal with d1 | d2 | ... | dr, nonzero entries first.
struct SmithForm {
  PolyMatrix D, P, Q, P_inv, Q_inv;
  std::vector<UPoly> diagonal;  // the nonzero invariant factors

  size_t rank() const { return diagonal.size(); }
  // re-multiplies and checks every certificate and the divisibility chain
  bool verify(const PolyMatrix& m) const;
};

SmithForm smith_normal_form(const PolyMatrix& m);

}  // namespace lf
