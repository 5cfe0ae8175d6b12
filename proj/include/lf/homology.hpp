#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lf/complex.hpp"

namespace lf {

// Height of an F[U]-summand: finite k >= 1 for F[U]/U^k, or infinite for a free tower.
class TowerHeight {
 public:
  static TowerHeight infinite() { return TowerHeight(); }
  static TowerHeight finite(unsigned k) { return TowerHeight(k); }
  bool is_infinite() const { return !k_.has_value(); }
  unsigned value() const;  // throws on infinite
  bool exceeds(unsigned d) const { return is_infinite() || *k_ > d; }
  std::string str() const { return is_infinite() ? "inf" : std::to_string(*k_); }
  friend bool operator==(const TowerHeight&, const TowerHeight&) = default;
  static TowerHeight min(const TowerHeight& a, const TowerHeight& b);

 private:
  TowerHeight() = default;
  explicit TowerHeight(unsigned k) : k_(k) {}
  std::optional<unsigned> k_;
};

struct TorsionSummand {
  Bigrading grading;
  unsigned order;  // F[U]/U^order
  friend bool operator==(const TorsionSummand&, const TorsionSummand&) = default;
};

struct ModuleDecomposition {
  std::vector<Bigrading> free_part;
  std::vector<TorsionSummand> torsion_part;

  // sorts both lists by (alexander, maslov, k)
  void canonicalize();
  ModuleDecomposition canonical() const {
    auto c = *this;
    c.canonicalize();
    return c;
  }
  size_t rank() const { return free_part.size(); }
  // dimension after setting U = 0
  size_t hat_dimension() const { return free_part.size() + 2 * torsion_part.size(); }
  std::string str() const;
  friend bool operator==(const ModuleDecomposition& a, const ModuleDecomposition& b);
};

// Homology of the tensor product of two complexes with the given homologies (Kunneth over the PID).
ModuleDecomposition kunneth(const ModuleDecomposition& a, const ModuleDecomposition& b);

// Removes m tensor factors of the two-dimensional space with gradings (0,0) and (-1,-1);
// nullopt if the decomposition is not of that form.
std::optional<ModuleDecomposition> divide_by_w(const ModuleDecomposition& d, unsigned m);
ModuleDecomposition multiply_by_w(const ModuleDecomposition& d, unsigned m);

// Invariant-factor decomposition through Smith normal forms.
ModuleDecomposition homology(const FreeBigradedComplex& c);
std::map<std::string, ModuleDecomposition> homology_by_spinc(const FreeBigradedComplex& c);

// Position of a homology class: U^depth times a generator of a summand of height `height`.
struct ClassPosition {
  TowerHeight height = TowerHeight::infinite();
  unsigned depth = 0;
  Bigrading grading;
  bool is_zero = true;

  // smallest k with U^k [c] = 0, infinite for non-torsion classes
  TowerHeight annihilator() const;
  std::string str() const;
  friend bool operator==(const ClassPosition&, const ClassPosition&) = default;
};

ClassPosition class_position(const FreeBigradedComplex& c, const Chain& cycle);

}  // namespace lf
