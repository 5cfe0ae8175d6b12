#include "oracles.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace oracle {

using lf::Bigrading;
using lf::Half;

namespace {

using Key = std::pair<int64_t, int64_t>;
Key key(const Bigrading& g) { return {g.maslov.twice(), g.alexander.twice()}; }

// rank over F2 of rows given as bit vectors
long f2_rank(std::vector<std::vector<uint64_t>> rows, size_t width) {
  long rank = 0;
  size_t words = (width + 63) / 64;
  for (size_t col = 0; col < width && size_t(rank) < rows.size(); ++col) {
    size_t w = col / 64;
    uint64_t bit = uint64_t(1) << (col % 64);
    size_t piv = rank;
    while (piv < rows.size() && !(rows[piv][w] & bit)) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    for (size_t r = 0; r < rows.size(); ++r)
      if (r != size_t(rank) && (rows[r][w] & bit))
        for (size_t k = 0; k < words; ++k) rows[r][k] ^= rows[rank][k];
    ++rank;
  }
  return rank;
}

}  // namespace

Dims truncated_dims(const lf::FreeBigradedComplex& c, unsigned K) {
  // index of (generator, power) inside its stratum
  std::map<Key, std::vector<std::pair<uint32_t, unsigned>>> strata;
  std::map<std::pair<uint32_t, unsigned>, size_t> slot;
  for (uint32_t g = 0; g < c.size(); ++g)
    for (unsigned i = 0; i < K; ++i) {
      auto& s = strata[key(c.generator(g).grading.u_shift(i))];
      slot[{g, i}] = s.size();
      s.push_back({g, i});
    }
  std::map<Key, long> out_rank;
  for (auto& [k, elems] : strata) {
    Key tk{k.first - 2, k.second};
    auto it = strata.find(tk);
    size_t width = it == strata.end() ? 0 : it->second.size();
    std::vector<std::vector<uint64_t>> rows;
    for (auto [g, i] : elems) {
      std::vector<uint64_t> row((width + 63) / 64, 0);
      bool any = false;
      for (const auto& [t, coeff] : c.boundary(g))
        for (uint32_t e : coeff.exponents()) {
          if (i + e >= K) continue;
          if (key(c.generator(t).grading.u_shift(i + e)) != tk) throw std::logic_error("non-homogeneous entry");
          size_t s = slot.at({t, i + e});
          row[s / 64] ^= uint64_t(1) << (s % 64);
          any = true;
        }
      if (any) rows.push_back(std::move(row));
    }
    out_rank[k] = width ? f2_rank(std::move(rows), width) : 0;
  }
  Dims d;
  for (auto& [k, elems] : strata) {
    long in = 0;
    auto it = out_rank.find({k.first + 2, k.second});
    if (it != out_rank.end()) in = it->second;
    long dim = long(elems.size()) - out_rank[k] - in;
    if (dim) d[k] = dim;
  }
  return d;
}

Dims predicted_dims(const lf::ModuleDecomposition& m, unsigned K) {
  Dims d;
  for (const auto& g : m.free_part)
    for (unsigned i = 0; i < K; ++i) ++d[key(g.u_shift(i))];
  for (const auto& t : m.torsion_part) {
    if (t.order >= K) throw std::invalid_argument("truncation too small");
    for (unsigned i = 0; i < t.order; ++i) {
      ++d[key(t.grading.u_shift(i))];
      ++d[key(t.grading.u_shift(K + i) + Bigrading{Half(1), Half(0)})];
    }
  }
  return d;
}

bool decomposition_matches(const lf::FreeBigradedComplex& c, const lf::ModuleDecomposition& m, std::string* why) {
  unsigned K = 2;
  for (const auto& t : m.torsion_part) K = std::max(K, t.order + 2);
  auto a = truncated_dims(c, K), b = predicted_dims(m, K);
  if (a == b) return true;
  if (why) {
    std::ostringstream os;
    for (auto& [k, v] : a)
      if (b[k] != v) os << "(" << k.first << "/2," << k.second << "/2): dense " << v << " predicted " << b[k] << "; ";
    for (auto& [k, v] : b)
      if (!a.count(k) && v) os << "(" << k.first << "/2," << k.second << "/2): dense 0 predicted " << v << "; ";
    *why = os.str();
  }
  return false;
}

// ----- grid gradings -----

namespace {

// M(cur) - M(next) where next swaps rows r1 < r2 of cur
long step(const std::vector<int>& cur, int r1, int r2, const std::vector<int>& marks) {
  int a = cur[r1], b = cur[r2];
  int lo = std::min(a, b), hi = std::max(a, b);
  long inside = 0, m = 0;
  for (int r = r1 + 1; r < r2; ++r)
    if (cur[r] > lo && cur[r] < hi) ++inside;
  for (int q = r1; q < r2; ++q)
    if (marks[q] >= lo && marks[q] < hi) ++m;
  long d = 1 - 2 * m + 2 * inside;
  return a < b ? d : -d;
}

// Maslov grading with respect to one set of markings
long maslov(const std::vector<int>& marks, const std::vector<int>& x) {
  int N = int(marks.size());
  std::vector<int> cur = marks;
  long M = 1 - N;
  for (int r = 0; r < N; ++r) {
    if (cur[r] == x[r]) continue;
    int s = r + 1;
    while (cur[s] != x[r]) ++s;
    M -= step(cur, r, s, marks);
    std::swap(cur[r], cur[s]);
  }
  return M;
}

}  // namespace

Bigrading grid_grading(const lf::grid::GridDiagram& g, const lf::grid::GridGenerator& x) {
  int N = g.N;
  // components: cycles of row r -> row whose O sits in the column of X[r]
  std::vector<int> row_of_o(N);
  for (int r = 0; r < N; ++r) row_of_o[g.O[r]] = r;
  std::vector<char> seen(N, 0);
  int n = 0;
  for (int r = 0; r < N; ++r) {
    if (seen[r]) continue;
    ++n;
    for (int q = r; !seen[q]; q = row_of_o[g.X[q]]) seen[q] = 1;
  }
  long mo = maslov(g.O, x), mx = maslov(g.X, x);
  return {Half(int(mo)), Half::from_twice(mo - mx - (N - n))};
}

// ----- polynomial matrices -----

Bits bits_of(const lf::UPoly& p) {
  Bits b = 0;
  for (uint32_t e : p.exponents()) {
    if (e >= 64) throw std::out_of_range("degree too large");
    b |= Bits(1) << e;
  }
  return b;
}

Bits bits_mul(Bits a, Bits b) {
  Bits r = 0;
  for (int i = 0; i < 64; ++i)
    if (b >> i & 1) r ^= a << i;
  return r;
}

namespace {

int deg(Bits a) { return a ? 63 - __builtin_clzll(a) : -1; }

Bits bits_mod(Bits a, Bits b) {
  while (deg(a) >= deg(b)) a ^= b << (deg(a) - deg(b));
  return a;
}

Bits bits_div(Bits a, Bits b) {
  Bits q = 0;
  while (a && deg(a) >= deg(b)) {
    int s = deg(a) - deg(b);
    q |= Bits(1) << s;
    a ^= b << s;
  }
  if (a) throw std::logic_error("inexact division");
  return q;
}

Bits det_bits(const std::vector<std::vector<Bits>>& m) {
  size_t k = m.size();
  std::vector<size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  Bits d = 0;  // signs vanish in characteristic two
  do {
    Bits t = 1;
    for (size_t i = 0; i < k && t; ++i) t = bits_mul(t, m[i][perm[i]]);
    d ^= t;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return d;
}

void subsets(size_t n, size_t k, std::vector<std::vector<size_t>>& out) {
  std::vector<size_t> s(k);
  std::iota(s.begin(), s.end(), 0);
  if (k > n) return;
  for (;;) {
    out.push_back(s);
    long i = long(k) - 1;
    while (i >= 0 && s[i] == n - k + size_t(i)) --i;
    if (i < 0) return;
    ++s[i];
    for (size_t j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
  }
}

}  // namespace

Bits bits_gcd(Bits a, Bits b) {
  while (b) {
    Bits r = bits_mod(a, b);
    a = b;
    b = r;
  }
  return a;
}

std::vector<Bits> invariant_factors(const lf::PolyMatrix& m) {
  size_t R = m.rows(), C = m.cols();
  std::vector<std::vector<Bits>> a(R, std::vector<Bits>(C));
  for (size_t i = 0; i < R; ++i)
    for (size_t j = 0; j < C; ++j) a[i][j] = bits_of(m.at(i, j));
  std::vector<Bits> out;
  Bits prev = 1;
  for (size_t k = 1; k <= std::min(R, C); ++k) {
    std::vector<std::vector<size_t>> rs, cs;
    subsets(R, k, rs);
    subsets(C, k, cs);
    Bits g = 0;
    for (auto& r : rs)
      for (auto& c : cs) {
        std::vector<std::vector<Bits>> sub(k, std::vector<Bits>(k));
        for (size_t i = 0; i < k; ++i)
          for (size_t j = 0; j < k; ++j) sub[i][j] = a[r[i]][c[j]];
        g = bits_gcd(g, det_bits(sub));
      }
    if (!g) break;
    out.push_back(bits_div(g, prev));
    prev = g;
  }
  return out;
}

lf::PolyMatrix multiply(const lf::PolyMatrix& a, const lf::PolyMatrix& b) {
  lf::PolyMatrix r(a.rows(), b.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < b.cols(); ++j) {
      Bits s = 0;
      for (size_t k = 0; k < a.cols(); ++k) s ^= bits_mul(bits_of(a.at(i, k)), bits_of(b.at(k, j)));
      std::vector<uint32_t> e;
      for (uint32_t t = 0; t < 64; ++t)
        if (s >> t & 1) e.push_back(t);
      r.at(i, j) = lf::UPoly::from_exponents(e);
    }
  return r;
}

long determinant(std::vector<std::vector<long>> m) {
  size_t n = m.size();
  if (n == 0) return 1;
  long sign = 1, prev = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      size_t p = k + 1;
      while (p < n && m[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(m[p], m[k]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

std::vector<std::vector<long>> intersection_matrix(const lf::hd::HeegaardDiagram& d) {
  std::vector<std::vector<long>> m(d.basis, std::vector<long>(d.basis, 0));
  for (const auto& p : d.points)
    if (p.alpha < d.basis && p.beta < d.basis) m[p.alpha][p.beta] += p.sign;
  return m;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

std::string data(const std::string& name) { return read_file(std::string(LF_TEST_DATA) + "/" + name); }

}  // namespace oracle
