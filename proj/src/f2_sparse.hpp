#pragma once

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <vector>

namespace lf::detail {

// a ^= b on sorted index vectors
inline void xor_into(std::vector<uint32_t>& a, const std::vector<uint32_t>& b, std::vector<uint32_t>& scratch) {
  scratch.clear();
  scratch.reserve(a.size() + b.size());
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(scratch));
  a.swap(scratch);
}

inline void sort_mod2(std::vector<uint32_t>& v) {
  std::sort(v.begin(), v.end());
  std::vector<uint32_t> out;
  out.reserve(v.size());
  for (size_t i = 0; i < v.size();) {
    size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    if ((j - i) % 2) out.push_back(v[i]);
    i = j;
  }
  v.swap(out);
}

// Incremental F2 column echelon keyed on the largest row index.
class F2Echelon {
 public:
  explicit F2Echelon(size_t rows) : pivot_(rows, -1) {}

  // reduces v in place; returns true if v became zero
  bool reduce(std::vector<uint32_t>& v) const {
    while (!v.empty()) {
      long p = pivot_[v.back()];
      if (p < 0) return false;
      xor_into(v, cols_[p], scratch_);
    }
    return true;
  }
  // inserts v (after reduction); returns false if dependent
  bool insert(std::vector<uint32_t> v) {
    if (reduce(v)) return false;
    pivot_[v.back()] = long(cols_.size());
    cols_.push_back(std::move(v));
    return true;
  }
  size_t rank() const { return cols_.size(); }

 private:
  std::vector<long> pivot_;
  std::vector<std::vector<uint32_t>> cols_;
  mutable std::vector<uint32_t> scratch_;
};

}  // namespace lf::detail
