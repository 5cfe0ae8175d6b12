#pragma once

#include <cstdint>
#include <vector>

#include "lf/complex.hpp"
#include "lf/homology.hpp"

namespace lf {

// The U = 1 complex filtered by Alexander grading. The F[U]-module structure of the
// homology is read off from the persistence pairs of this filtration.
struct FilteredInput {
  std::vector<Bigrading> grading;      // of each free generator
  std::vector<uint64_t> offsets;       // CSR over sources, size n+1
  std::vector<uint32_t> targets;       // generator indices, any order, no repeats per source
};

FilteredInput filtered_input(const FreeBigradedComplex& c);

class FilteredReduction {
 public:
  explicit FilteredReduction(const FilteredInput& in);

  ModuleDecomposition decomposition() const;
  // class of sum_x U^(A(x)-level) x over the given generators
  ClassPosition locate(const std::vector<uint32_t>& gens, Half level) const;
  size_t size() const { return grade_.size(); }
  size_t stored_entries() const;

 private:
  std::vector<Bigrading> grade_;      // by filtration position
  std::vector<uint32_t> pos_;         // generator -> position
  std::vector<long> pivot_;           // row position -> column position with that low
  std::vector<std::vector<uint32_t>> reduced_;  // by column position, empty unless pivot column
  std::vector<char> negative_;
};

}  // namespace lf
