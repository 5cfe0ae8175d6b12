#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "lf/grading.hpp"
#include "lf/upoly.hpp"

namespace lf {

struct GradedGenerator {
  std::string id;
  Bigrading grading;
  std::string spinc;
};

struct DiffEntry {
  uint32_t target;
  uint32_t source;
  UPoly coeff;
};

// Free bigraded chain complex over F2[U]; differential stored sparsely per source.
class FreeBigradedComplex {
 public:
  uint32_t add_generator(GradedGenerator g);
  // accumulates onto any existing (target, source) entry
  void add_entry(uint32_t target, uint32_t source, const UPoly& c);

  size_t size() const { return gens_.size(); }
  const GradedGenerator& generator(uint32_t i) const { return gens_[i]; }
  const std::vector<GradedGenerator>& generators() const { return gens_; }
  // (target, coeff) pairs sorted by target, zeros dropped
  const std::vector<std::pair<uint32_t, UPoly>>& boundary(uint32_t src) const { return diff_[src]; }
  std::vector<DiffEntry> entries() const;
  size_t entry_count() const;
  long find(const std::string& id) const;
  std::vector<std::string> spinc_tags() const;

 private:
  std::vector<GradedGenerator> gens_;
  std::vector<std::vector<std::pair<uint32_t, UPoly>>> diff_;
  std::unordered_map<std::string, uint32_t> index_;
};

// formal F2[U]-combination of generators
using Chain = std::map<uint32_t, UPoly>;

Chain apply_differential(const FreeBigradedComplex& c, const Chain& x);
// grading of a homogeneous nonzero chain; throws std::invalid_argument otherwise
Bigrading chain_grading(const FreeBigradedComplex& c, const Chain& x);

struct ComplexReport {
  bool d_squared_zero = true;
  bool homogeneous = true;
  std::vector<std::string> violations;
  bool ok() const { return d_squared_zero && homogeneous; }
};

ComplexReport validate_complex(const FreeBigradedComplex& c);

FreeBigradedComplex tensor_product(const FreeBigradedComplex& a, const FreeBigradedComplex& b);

// Complex over F2 after U=0 (bigrading kept) or U=1 (single grading M-2A kept in `maslov`).
enum class UMode { Zero, One };
struct FieldComplex {
  UMode mode = UMode::Zero;
  std::vector<std::string> ids;
  std::vector<Bigrading> grading;
  std::vector<std::vector<uint32_t>> boundary;  // sorted targets
};

FieldComplex specialize_U(const FreeBigradedComplex& c, UMode mode);

struct FieldHomology {
  // keyed by (maslov, alexander); for UMode::One alexander is always 0
  std::map<std::pair<Half, Half>, long> dims;
  long total() const;
};

FieldHomology field_homology(const FieldComplex& f);
// whether a sum of generators is a boundary in f
bool field_is_boundary(const FieldComplex& f, std::vector<uint32_t> cells);

// line format: `generators N`, N lines `id maslov alexander spinc`, then `entry target source exponent`
void write_complex(std::ostream& os, const FreeBigradedComplex& c);
FreeBigradedComplex read_complex(std::istream& is);

}  // namespace lf
