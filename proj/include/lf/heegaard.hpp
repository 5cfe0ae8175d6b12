#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lf/complex.hpp"
#include "lf/grading.hpp"
#include "lf/grid.hpp"
#include "lf/homology.hpp"
#include "lf/openbook.hpp"

namespace lf::hd {

// The four half-edges at an intersection point. With sign +1 their ccw order is
// AlphaOut, BetaOut, AlphaIn, BetaIn; with sign -1 it is AlphaOut, BetaIn, AlphaIn, BetaOut.
enum HalfEdge { AlphaOut = 0, BetaOut = 1, AlphaIn = 2, BetaIn = 3 };
std::string half_edge_name(HalfEdge h);

struct Point {
  std::string id;
  int alpha = 0;
  int beta = 0;
  int sign = 1;
};

// a basepoint sits in the corner of `point` swept ccw from half-edge `h`
struct Basepoint {
  int point = 0;
  HalfEdge h = AlphaOut;
};

struct Dart {
  int point = 0;
  HalfEdge h = AlphaOut;
  friend auto operator<=>(const Dart&, const Dart&) = default;
};

struct Region {
  std::vector<Dart> boundary;     // darts with the region on their left, one boundary cycle after another
  std::vector<size_t> cycles{0};  // offset of each boundary cycle in `boundary`
  int euler = 1;
  int corners() const { return int(boundary.size()); }
  bool is_disk() const { return euler == 1 && cycles.size() == 1; }
};

struct HeegaardDiagram {
  int genus = 0;       // genus of the Heegaard surface
  int components = 0;  // link components n
  int basis = 0;       // leading curves whose intersection matrix presents H1
  std::vector<Point> points;
  std::vector<std::vector<int>> alpha, beta;  // cyclic point orders along each curve
  std::vector<Basepoint> z, w;
  std::vector<int> distinguished;  // point on each alpha curve, empty if none
  std::optional<Bigrading> pin;    // absolute grading of the distinguished generator
  // boundary cycles through the two darts bound the same region (regions that are not disks)
  std::vector<std::pair<Dart, Dart>> joins;
  // Euler characteristic of the region through the dart, when it is not 2 - #cycles
  std::map<Dart, int> region_euler;

  // filled by index_regions
  std::vector<Region> regions;
  std::vector<int> dart_region;  // 4 * point + half-edge
  std::vector<int> alpha_pos, beta_pos;
  std::vector<int> z_region, w_region;
  bool euler_ok = false;  // the regions add up to the Euler characteristic of the surface

  int curves() const { return int(alpha.size()); }
  Dart reverse(Dart d) const;
  Dart ccw_next(Dart d) const;
  Dart cw_next(Dart d) const;
  int region_of(Dart d) const { return dart_region[4 * d.point + d.h]; }
};

// Computes the region structure; throws ConsistencyError on malformed data. A mismatch of the Euler
// characteristic (missing joins) only clears euler_ok.
void index_regions(HeegaardDiagram& d);

HeegaardDiagram build_diagram(const ob::AbstractOpenBook& b);
HeegaardDiagram from_grid(const grid::GridDiagram& g);

// A generator picks one point on each alpha curve, using every beta curve once.
using Generator = std::vector<int>;

void for_each_generator(const HeegaardDiagram& d, const std::function<void(const Generator&)>& fn);
std::vector<Generator> enumerate_generators(const HeegaardDiagram& d);
Generator distinguished_generator(const HeegaardDiagram& d);
std::string generator_id(const HeegaardDiagram& d, const Generator& x);

// Combinatorial index of a domain (multiplicity per region) from x to y.
int maslov_index(const HeegaardDiagram& d, const std::vector<long>& domain, const Generator& x, const Generator& y);

struct AdmissibilityReport {
  bool admissible = false;
  long h1_order = 0;  // |det| of the intersection matrix of the leading curves
  std::vector<std::vector<long>> periodic_domains;  // basis with n_w = 0
  std::string message;
};
AdmissibilityReport admissibility_check(const HeegaardDiagram& d);

struct NicenessReport {
  bool nice = true;
  std::vector<int> bad_regions;
};
NicenessReport niceness_check(const HeegaardDiagram& d);

struct GradingData {
  std::vector<Generator> generators;
  std::vector<Bigrading> grading;
  std::vector<std::string> spinc;  // class label per generator
  std::string pinned_class;        // class of the distinguished generator
  bool absolute = false;           // gradings of the pinned class are absolute
};
// Relative gradings from connecting domains; throws ConsistencyError if a periodic domain obstructs them.
GradingData compute_gradings(const HeegaardDiagram& d);

// Empty embedded bigons and rectangles avoiding z, weighted by U^{n_w}. Throws ConsistencyError for
// non-nice or inadmissible diagrams.
FreeBigradedComplex differential_nice(const HeegaardDiagram& d, const std::optional<std::string>& spinc = {});

struct DiagramHomology {
  ModuleDecomposition homology;  // of the class holding the distinguished generator
  ClassPosition invariant;
  size_t generators = 0;
  int spinc_classes = 0;
  bool absolute = false;
};
DiagramHomology diagram_homology(const HeegaardDiagram& d);

struct StabilizationMap {
  std::vector<std::pair<Generator, Generator>> pairs;  // x -> x plus the new point
  bool chain_map = false;
  bool invariant_maps = false;
};
// D_plus must come from a positive stabilization of D's book whose new arc is at index `new_arc`.
StabilizationMap stabilization_map(const HeegaardDiagram& d, const HeegaardDiagram& d_plus, int new_arc);

// ----- text format -----
HeegaardDiagram read_diagram(std::istream& is);
HeegaardDiagram parse_diagram(const std::string& text);
void write_diagram(std::ostream& os, const HeegaardDiagram& d);
std::string to_string(const HeegaardDiagram& d);

}  // namespace lf::hd
