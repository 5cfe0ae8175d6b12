#include "lf/filtered.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "f2_sparse.hpp"
#include "lf/errors.hpp"

namespace lf {

FilteredInput filtered_input(const FreeBigradedComplex& c) {
  FilteredInput in;
  in.grading.reserve(c.size());
  in.offsets.push_back(0);
  for (uint32_t s = 0; s < c.size(); ++s) {
    in.grading.push_back(c.generator(s).grading);
    for (const auto& [t, coef] : c.boundary(s))
      if (coef.exponents().size() % 2) in.targets.push_back(t);
    in.offsets.push_back(in.targets.size());
  }
  return in;
}

FilteredReduction::FilteredReduction(const FilteredInput& in) {
  const size_t n = in.grading.size();
  std::vector<uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  // higher Alexander grading first; within a level, lower collapsed grading first
  std::stable_sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    const auto& ga = in.grading[a];
    const auto& gb = in.grading[b];
    if (ga.alexander != gb.alexander) return ga.alexander > gb.alexander;
    return ga.collapsed() < gb.collapsed();
  });
  pos_.assign(n, 0);
  grade_.resize(n);
  for (uint32_t p = 0; p < n; ++p) {
    pos_[order[p]] = p;
    grade_[p] = in.grading[order[p]];
  }

  // columns grouped by collapsed grading, processed from the top down so that
  // pairing in degree g+1 clears the matching columns of degree g
  std::vector<uint32_t> by_degree(n);
  std::iota(by_degree.begin(), by_degree.end(), 0u);
  std::stable_sort(by_degree.begin(), by_degree.end(), [&](uint32_t a, uint32_t b) {
    Half da = grade_[a].collapsed(), db = grade_[b].collapsed();
    if (da != db) return da > db;
    return a < b;
  });

  pivot_.assign(n, -1);
  reduced_.assign(n, {});
  negative_.assign(n, 0);
  std::vector<char> cleared(n, 0);
  std::vector<uint32_t> col, scratch;
  for (uint32_t p : by_degree) {
    if (cleared[p]) continue;
    uint32_t src = order[p];
    col.clear();
    const Half dp = grade_[p].collapsed();
    for (uint64_t k = in.offsets[src]; k < in.offsets[src + 1]; ++k) {
      uint32_t q = pos_[in.targets[k]];
      if (grade_[q].collapsed() != dp - Half(1) || grade_[q].alexander < grade_[p].alexander)
        throw ConsistencyError("differential is not homogeneous");
      col.push_back(q);
    }
    std::sort(col.begin(), col.end());
    while (!col.empty()) {
      long q = pivot_[col.back()];
      if (q < 0) break;
      detail::xor_into(col, reduced_[q], scratch);
    }
    if (col.empty()) continue;
    pivot_[col.back()] = p;
    cleared[col.back()] = 1;
    negative_[p] = 1;
    reduced_[p] = col;
  }
}

size_t FilteredReduction::stored_entries() const {
  size_t s = 0;
  for (const auto& c : reduced_) s += c.size();
  return s;
}

ModuleDecomposition FilteredReduction::decomposition() const {
  ModuleDecomposition d;
  for (size_t i = 0; i < grade_.size(); ++i) {
    if (negative_[i]) continue;
    if (pivot_[i] < 0) {
      d.free_part.push_back(grade_[i]);
      continue;
    }
    Half k = grade_[i].alexander - grade_[pivot_[i]].alexander;
    if (k != Half(0)) d.torsion_part.push_back({grade_[i], unsigned(k.to_int())});
  }
  d.canonicalize();
  return d;
}

ClassPosition FilteredReduction::locate(const std::vector<uint32_t>& gens, Half level) const {
  std::vector<uint32_t> v;
  v.reserve(gens.size());
  for (auto g : gens) v.push_back(pos_.at(g));
  detail::sort_mod2(v);
  ClassPosition cp;
  cp.height = TowerHeight::finite(0);
  if (v.empty()) return cp;
  bool first = true;
  for (auto p : v) {
    Half e = grade_[p].alexander - level;
    if (e < Half(0) || !e.is_integer()) throw std::invalid_argument("chain level inconsistent with gradings");
    Bigrading g = grade_[p].u_shift(e.to_int());
    if (first)
      cp.grading = g, first = false;
    else if (!(g == cp.grading))
      throw std::invalid_argument("chain is not homogeneous");
  }
  std::vector<uint32_t> scratch;
  // boundaries available at this level: columns whose Alexander grading is >= level
  while (!v.empty()) {
    long q = pivot_[v.back()];
    if (q < 0 || grade_[q].alexander < level) break;
    detail::xor_into(v, reduced_[q], scratch);
  }
  if (v.empty()) return cp;
  cp.is_zero = false;
  unsigned depth_h = unsigned((grade_[v.back()].alexander - level).to_int());
  bool used = false;
  Half lowest = level;
  while (!v.empty()) {
    long q = pivot_[v.back()];
    if (q < 0) break;
    used = true;
    lowest = std::min(lowest, grade_[q].alexander);
    detail::xor_into(v, reduced_[q], scratch);
  }
  if (v.empty()) {
    if (!used) throw std::logic_error("torsion class without killing column");
    unsigned ann = unsigned((level - lowest).to_int());
    cp.depth = depth_h;
    cp.height = TowerHeight::finite(depth_h + ann);
  } else {
    cp.depth = unsigned((grade_[v.back()].alexander - level).to_int());
    cp.height = TowerHeight::infinite();
  }
  return cp;
}

}  // namespace lf
