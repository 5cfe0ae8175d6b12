#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lf/complex.hpp"
#include "lf/grid.hpp"
#include "lf/heegaard.hpp"
#include "lf/homology.hpp"
#include "lf/snf.hpp"

namespace oracle {

// (2*maslov, 2*alexander) -> dimension
using Dims = std::map<std::pair<int64_t, int64_t>, long>;

// Homology of C / U^K over F2, by dense elimination in each bigrading.
Dims truncated_dims(const lf::FreeBigradedComplex& c, unsigned K);
// What a decomposition predicts for the same truncation (needs K above every torsion order).
Dims predicted_dims(const lf::ModuleDecomposition& d, unsigned K);
// Runs both with K = max torsion order + 2 and compares.
bool decomposition_matches(const lf::FreeBigradedComplex& c, const lf::ModuleDecomposition& d, std::string* why = nullptr);

// Grid gradings by walking transpositions from the generators at the lower-left corners of the O's and X's,
// using the rectangle formula for the change in Maslov grading.
lf::Bigrading grid_grading(const lf::grid::GridDiagram& g, const lf::grid::GridGenerator& x);

// Polynomials over F2 of degree < 64 as bit masks.
using Bits = uint64_t;
Bits bits_of(const lf::UPoly& p);
Bits bits_mul(Bits a, Bits b);
Bits bits_gcd(Bits a, Bits b);
// Invariant factors d_1 | d_2 | ... from gcds of k x k minors (determinantal divisors).
std::vector<Bits> invariant_factors(const lf::PolyMatrix& m);

// Plain product, independent of PolyMatrix::operator*.
lf::PolyMatrix multiply(const lf::PolyMatrix& a, const lf::PolyMatrix& b);

// Integer determinant by fraction-free elimination.
long determinant(std::vector<std::vector<long>> m);
// Signed intersection matrix of the leading alpha and beta curves.
std::vector<std::vector<long>> intersection_matrix(const lf::hd::HeegaardDiagram& d);

std::string read_file(const std::string& path);
std::string data(const std::string& name);  // contents of tests/data/<name>

}  // namespace oracle
