#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "lf/grading.hpp"

namespace lf::ob {

// Side of an arc as seen from a polygon. sign +1: the polygon lies to the left of the arc and its ccw
// boundary runs along the arc from endpoint 0 to endpoint 1; sign -1 runs from 1 to 0.
struct Side {
  int arc = 0;
  int sign = 1;
  friend bool operator==(const Side&, const Side&) = default;
  friend auto operator<=>(const Side&, const Side&) = default;
};

// A crossing of a curve with an arc. sign +1 crosses from the -1 side into the +1 side.
struct Crossing {
  int arc = 0;
  int sign = 1;
  Crossing inverse() const { return {arc, -sign}; }
  friend bool operator==(const Crossing&, const Crossing&) = default;
};
using CurveWord = std::vector<Crossing>;

// One cell of the page cut along all arcs: ccw cyclic word side_0 seg_0 side_1 seg_1 ...
// Corner k is the boundary segment following side k.
struct Polygon {
  std::string id;
  std::vector<Side> sides;
  std::vector<std::string> segments;
};

struct Page {
  std::vector<std::string> arc_names;
  std::vector<Polygon> polygons;

  struct Loc {
    int poly = -1;
    int idx = -1;
  };
  // throws ConsistencyError on malformed pages (see check_page)
  Loc side_loc(int arc, int sign) const;
  int arc_index(const std::string& name) const;  // -1 if absent
  int polygon_index(const std::string& id) const;
  int euler_characteristic() const { return int(polygons.size()) - int(arc_names.size()); }
  // boundary circles as lists of (polygon, corner)
  std::vector<std::vector<std::pair<int, int>>> boundary_cycles() const;
  int boundary_components() const { return int(boundary_cycles().size()); }
  int genus() const;
};

// Every arc has one +1 and one -1 side, words alternate, connected, orientable, not a disk.
void check_page(const Page& p);

enum class ArcTag { Distinguished, Dead, Separating };
std::string tag_name(ArcTag t);

// Tags in arc order; the first n arcs are A1, the next 2g+l-1-n are A2, the rest A3.
struct ArcSystem {
  std::vector<ArcTag> tags;
  int n() const;
};

struct LinkComponent {
  std::string id;
  CurveWord word;  // cyclic
};

struct StripPoint {
  int arc = 0;
  int half = -1;  // -1: half of the strip next to endpoint 0, +1: next to endpoint 1
  friend bool operator==(const StripPoint&, const StripPoint&) = default;
};

struct LinkOnPage {
  std::vector<LinkComponent> components;
  std::vector<int> z;         // polygon per component
  std::vector<StripPoint> w;  // strip per component
};

struct Classical {
  int tb = 0;
  int rot = 0;
  Half d3;
  friend bool operator==(const Classical&, const Classical&) = default;
};

struct AbstractOpenBook {
  Page page;
  ArcSystem arcs;
  // image of b_i under the monodromy as a crossing word from the corner after side (i,-1)
  // to the corner after side (i,+1); empty optional when the book carries no monodromy
  std::vector<std::optional<CurveWord>> bimage;
  LinkOnPage link;
  std::optional<Classical> classical;

  bool has_monodromy() const;
};

// ----- text format -----
AbstractOpenBook read_openbook(std::istream& is);
AbstractOpenBook parse_openbook(const std::string& text);
void write_openbook(std::ostream& os, const AbstractOpenBook& b);
std::string to_string(const AbstractOpenBook& b);
std::string word_str(const Page& p, const CurveWord& w);

// Normal form: each polygon word starts at its lexicographically least rotation, polygons are sorted and
// renamed P1.., segments renamed s1.. in order of appearance. Basepoint references follow.
AbstractOpenBook canonical(const AbstractOpenBook& b);

// ----- checks -----
struct AdaptedReport {
  std::vector<int> failed;  // condition numbers 1..4
  std::vector<std::string> messages;
  std::vector<ArcTag> computed_tags;
  bool ok() const { return failed.empty(); }
};

// Condition 3 is read as: cutting the page along every arc leaves n cells, each holding one link component.
AdaptedReport validate_adapted(const Page& p, const ArcSystem& a, const LinkOnPage& l);

// Tags from the cell structure: both sides in one cell = dead, otherwise separating.
std::vector<ArcTag> classify(const Page& p, int n);

// F2 rank of the arc/cycle incidence matrix for the first k arcs against a cycle basis of the dual graph.
int basis_rank(const Page& p, const std::vector<int>& arcs);

// ----- link encoding -----
struct LinkReport {
  LinkOnPage link;
  int components = 0;
  bool independent = false;
  std::vector<std::string> errors;
  bool ok() const { return errors.empty() && independent; }
};

// z in the cell carrying each component, w in the strip of its distinguished arc on the side the rule
// (z to w across b, w to z across a) selects.
LinkOnPage place_basepoints(const Page& p, const ArcSystem& a, const std::vector<LinkComponent>& comps);
// Rebuilds the components from z and w alone; throws ConsistencyError if a traversal does not close.
LinkReport link_from_basepoints(const Page& p, const ArcSystem& a, const LinkOnPage& l);
// F2 rank of the classes of closed curves in H1(page).
int curve_rank(const Page& p, const std::vector<CurveWord>& curves);

// ----- moves -----
// Adds the n-1 separating arcs to a page whose arcs are A1 then A2. Returns page and arc system.
std::pair<Page, ArcSystem> complete_to_adapted_system(const Page& p, const ArcSystem& basis,
                                                      const std::vector<LinkComponent>& link);

// Slides arc i over arc j across a boundary segment joining their endpoints (first such segment in
// canonical order when `segment` is empty). Monodromy images are not transported and are dropped.
AbstractOpenBook admissible_arc_slide(const AbstractOpenBook& b, int i, int j,
                                      const std::string& segment = "");
// Candidate (i, j, segment) triples for admissible slides.
std::vector<std::tuple<int, int, std::string>> admissible_slides(const AbstractOpenBook& b);

struct StabilizationSpec {
  std::string segment1, segment2;  // attaching segments; equal means two points on one segment
  std::string arc_name;            // cocore name; default a<k+1>
  std::vector<std::string> gamma;  // crossing tokens on the stabilized page, cyclic
  bool l_elementary = true;
};

// Attaches a 1-handle, adds its cocore as a new A2 arc and composes the monodromy with the right-handed
// Dehn twist along gamma (applied after the old monodromy).
AbstractOpenBook positive_stabilization(const AbstractOpenBook& b, const StabilizationSpec& s);

// Right-handed (sign +1) or left-handed Dehn twist of an arc word along a closed curve on the page.
CurveWord dehn_twist(const Page& p, int arc, const CurveWord& image, const CurveWord& gamma, int sign = 1);
// Geometric intersection count of two closed curves realised as reduced words.
int intersection_count(const Page& p, const CurveWord& c1, const CurveWord& c2);

// Removes backtracking; closed words are reduced cyclically.
CurveWord reduce(const CurveWord& w, bool closed);

// Annulus book for the standard Legendrian unknot with a positive twist (negative twist if sign < 0).
AbstractOpenBook annulus_unknot(int twist = 1);

// ----- layout of curves on the cells (shared with the Heegaard builder) -----
struct Strand {
  CurveWord word;
  bool closed = false;
  int arc = -1;        // for arc strands: b_arc image, ends at the corners next to that arc
  bool pushed = false;  // crossings with this strand are resolved by moving it along its direction
};

struct BoundaryPos {
  int slot = 0;  // 2*side or 2*corner+1 inside the polygon
  int rank = 0;
  friend auto operator<=>(const BoundaryPos&, const BoundaryPos&) = default;
};

struct Chord {
  int strand = 0;
  int index = 0;  // chord k lies between tokens k-1 and k
  int poly = 0;
  BoundaryPos entry, exit;
};

class CurveLayout {
 public:
  // throws ConsistencyError if a word does not follow the cells
  CurveLayout(const Page& p, std::vector<Strand> strands);

  const std::vector<Chord>& chords() const { return chords_; }
  // events (strand, token) on an arc ordered from endpoint 0 to endpoint 1
  const std::vector<std::pair<int, int>>& events(int arc) const { return events_[arc]; }
  bool cross(const Chord& a, const Chord& b) const;
  // pairs of crossing chords between strands s and t (s may equal t)
  std::vector<std::pair<int, int>> crossings(int s, int t) const;
  const Strand& strand(int s) const { return strands_[s]; }
  const std::vector<int>& chords_of(int s) const { return by_strand_[s]; }
  int polygon_size(int poly) const;

 private:
  struct Walk;
  int compare(std::pair<int, int> e1, std::pair<int, int> e2) const;

  const Page* page_;
  std::vector<Strand> strands_;
  std::vector<Chord> chords_;
  std::vector<std::vector<int>> by_strand_;
  std::vector<std::vector<std::pair<int, int>>> events_;
};

}  // namespace lf::ob
