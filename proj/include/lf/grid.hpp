#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "lf/complex.hpp"
#include "lf/filtered.hpp"
#include "lf/homology.hpp"

namespace lf::grid {

// N x N toroidal grid. O[r] and X[r] are the columns of the markings in row r (row 0 at the bottom).
struct GridDiagram {
  int N = 0;
  std::vector<int> O, X;
  friend bool operator==(const GridDiagram&, const GridDiagram&) = default;
};

struct GridReport {
  bool ok = false;
  std::vector<std::string> errors;
  int components = 0;
  // component index of the markings in each row (O and X of a row lie on the same component)
  std::vector<int> row_component;
};

GridReport validate_grid(const GridDiagram& g);
int component_count(const GridDiagram& g);  // throws ConsistencyError on invalid grids

// file format: `N <int>`, `O: c0 ... c(N-1)`, `X: ...`
GridDiagram read_grid(std::istream& is);
GridDiagram parse_grid(const std::string& text);
void write_grid(std::ostream& os, const GridDiagram& g);

// generator: gen[r] is the column of the lattice point on the horizontal circle r
using GridGenerator = std::vector<int>;

Bigrading gradings(const GridDiagram& g, const GridGenerator& x);

// Collapsed complex: every O carries the same U. Its homology is the link's cHFL-
// tensored with N - n copies of a two-dimensional space (see link_homology).
FreeBigradedComplex differential_minus(const GridDiagram& g);

enum class Corner { Plus, Minus };
// Plus takes the upper-right corner of every X square, Minus the lower-left.
GridGenerator invariant_generator(const GridDiagram& g, Corner c);

struct ClassicalInvariants {
  std::vector<int> tb_component;            // tb(L_i) of the component alone
  std::vector<int> rot_component;
  std::vector<std::vector<int>> linking;    // symmetric, zero diagonal
  int n = 0;
  int tb_i(int i) const;                    // tb(L_i) + lk(L_i, L - L_i)
  int tb() const;
  int rot() const;
};

ClassicalInvariants classical_invariants(const GridDiagram& g);

// ----- moves -----
GridDiagram commute_columns(const GridDiagram& g, int c);  // swaps columns c, c+1; throws if interleaving
GridDiagram commute_rows(const GridDiagram& g, int r);
GridDiagram cyclic_shift(const GridDiagram& g, int dcol, int drow);

enum class Mark { O, X };
enum class Quadrant { NW, NE, SW, SE };
// Replaces the `kind` marking of row r by a 2x2 block whose empty cell is `empty`.
GridDiagram stabilize(const GridDiagram& g, Mark kind, int row, Quadrant empty);
// Legendrian stabilization of the component through row r: sign +1 gives (tb-1, rot+1).
GridDiagram legendrian_stabilize(const GridDiagram& g, int sign, int row = 0);
GridDiagram disjoint_union(const GridDiagram& a, const GridDiagram& b);
// Legendrian connected sum along component ca of a and cb of b.
GridDiagram connected_sum(const GridDiagram& a, const GridDiagram& b, int ca = 0, int cb = 0);
GridDiagram mirror_lr(const GridDiagram& g);

// ----- homology -----
struct EngineOptions {
  unsigned threads = 1;
  uint64_t memory_limit = uint64_t(4) << 30;  // bytes
};

uint64_t estimated_bytes(int N);

// Sparse U=1 boundary data plus gradings, built without materialising string ids.
FilteredInput filtered_grid_complex(const GridDiagram& g, unsigned threads);
uint64_t generator_index(const GridGenerator& x);
GridGenerator generator_at(int N, uint64_t index);

struct GridHomology {
  int n = 0;
  ModuleDecomposition collapsed;  // homology of differential_minus
  ModuleDecomposition link;       // cHFL- of the grid's link (the mirror of its Legendrian front)
  ClassPosition invariant;        // class of the Plus generator
  ClassPosition companion;        // class of the Minus generator
  size_t generators = 0;
};

GridHomology grid_homology(const GridDiagram& g, const EngineOptions& opt = {});

}  // namespace lf::grid
