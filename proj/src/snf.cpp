#include "lf/snf.hpp"

#include <stdexcept>

namespace lf {

PolyMatrix PolyMatrix::identity(size_t n) {
  PolyMatrix m(n, n);
  for (size_t i = 0; i < n; ++i) m.at(i, i) = UPoly::one();
  return m;
}

void PolyMatrix::swap_rows(size_t i, size_t j) {
  if (i == j) return;
  for (size_t k = 0; k < c_; ++k) std::swap(at(i, k), at(j, k));
}

void PolyMatrix::swap_cols(size_t i, size_t j) {
  if (i == j) return;
  for (size_t k = 0; k < r_; ++k) std::swap(at(k, i), at(k, j));
}

void PolyMatrix::add_row_multiple(size_t dst, size_t src, const UPoly& q) {
  if (q.is_zero()) return;
  for (size_t k = 0; k < c_; ++k)
    if (!at(src, k).is_zero()) at(dst, k) += q * at(src, k);
}

void PolyMatrix::add_col_multiple(size_t dst, size_t src, const UPoly& q) {
  if (q.is_zero()) return;
  for (size_t k = 0; k < r_; ++k)
    if (!at(k, src).is_zero()) at(k, dst) += q * at(k, src);
}

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix shape mismatch");
  PolyMatrix r(a.rows(), b.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t k = 0; k < a.cols(); ++k) {
      const UPoly& x = a.at(i, k);
      if (x.is_zero()) continue;
      for (size_t j = 0; j < b.cols(); ++j)
        if (!b.at(k, j).is_zero()) r.at(i, j) += x * b.at(k, j);
    }
  return r;
}

namespace {

struct Work {
  PolyMatrix A, P, Pi, Q, Qi;

  // every row operation on A is mirrored in P, its inverse in Pi
  void row_add(size_t dst, size_t src, const UPoly& q) {
    A.add_row_multiple(dst, src, q);
    P.add_row_multiple(dst, src, q);
    Pi.add_col_multiple(src, dst, q);
  }
  void row_swap(size_t i, size_t j) {
    A.swap_rows(i, j);
    P.swap_rows(i, j);
    Pi.swap_cols(i, j);
  }
  void col_add(size_t dst, size_t src, const UPoly& q) {
    A.add_col_multiple(dst, src, q);
    Q.add_col_multiple(dst, src, q);
    Qi.add_row_multiple(src, dst, q);
  }
  void col_swap(size_t i, size_t j) {
    A.swap_cols(i, j);
    Q.swap_cols(i, j);
    Qi.swap_rows(i, j);
  }
};

}  // namespace

SmithForm smith_normal_form(const PolyMatrix& m) {
  const size_t R = m.rows(), C = m.cols();
  Work w{m, PolyMatrix::identity(R), PolyMatrix::identity(R), PolyMatrix::identity(C), PolyMatrix::identity(C)};
  auto& A = w.A;
  size_t t = 0;
  for (; t < std::min(R, C); ++t) {
    // lowest-degree pivot in the trailing block; ties broken by position
    long bi = -1, bj = -1;
    for (size_t i = t; i < R; ++i)
      for (size_t j = t; j < C; ++j) {
        const UPoly& x = A.at(i, j);
        if (x.is_zero()) continue;
        if (bi < 0 || x.degree() < A.at(bi, bj).degree()) bi = long(i), bj = long(j);
      }
    if (bi < 0) break;
    w.row_swap(t, size_t(bi));
    w.col_swap(t, size_t(bj));
    for (;;) {
      bool again = false;
      for (size_t i = t + 1; i < R; ++i) {
        if (A.at(i, t).is_zero()) continue;
        auto [q, r] = divmod(A.at(i, t), A.at(t, t));
        w.row_add(i, t, q);
        if (!r.is_zero()) {
          w.row_swap(i, t);
          again = true;
        }
      }
      for (size_t j = t + 1; j < C; ++j) {
        if (A.at(t, j).is_zero()) continue;
        auto [q, r] = divmod(A.at(t, j), A.at(t, t));
        w.col_add(j, t, q);
        if (!r.is_zero()) {
          w.col_swap(j, t);
          again = true;
        }
      }
      if (again) continue;
      // row and column t are clear; enforce divisibility of the remaining block
      bool fixed = false;
      for (size_t i = t + 1; i < R && !fixed; ++i)
        for (size_t j = t + 1; j < C; ++j)
          if (!divides(A.at(t, t), A.at(i, j))) {
            w.row_add(t, i, UPoly::one());
            fixed = true;
            break;
          }
      if (!fixed) break;
    }
  }
  SmithForm s;
  for (size_t i = 0; i < std::min(R, C); ++i)
    if (!A.at(i, i).is_zero()) s.diagonal.push_back(A.at(i, i));
  s.D = std::move(w.A);
  s.P = std::move(w.P);
  s.P_inv = std::move(w.Pi);
  s.Q = std::move(w.Q);
  s.Q_inv = std::move(w.Qi);
  return s;
}

bool SmithForm::verify(const PolyMatrix& m) const {
  const size_t R = m.rows(), C = m.cols();
  if (!(P * m * Q == D)) return false;
  if (!(P * P_inv == PolyMatrix::identity(R)) || !(P_inv * P == PolyMatrix::identity(R))) return false;
  if (!(Q * Q_inv == PolyMatrix::identity(C)) || !(Q_inv * Q == PolyMatrix::identity(C))) return false;
  for (size_t i = 0; i < R; ++i)
    for (size_t j = 0; j < C; ++j)
      if (i != j && !D.at(i, j).is_zero()) return false;
  size_t k = diagonal.size();
  for (size_t i = 0; i < std::min(R, C); ++i) {
    bool nz = !D.at(i, i).is_zero();
    if (nz != (i < k)) return false;
  }
  for (size_t i = 0; i + 1 < k; ++i)
    if (!divides(diagonal[i], diagonal[i + 1])) return false;
  return true;
}

}  // namespace lf
