#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lf/grading.hpp"
#include "lf/homology.hpp"

namespace lf::calc {

// d3 is normalized so that d3(S^3, xi_st) = 0 and d3(S^3, xi_i) = i.
inline constexpr const char* kD3Convention = "d3(xi_st)=0";

struct ContactLabel {
  std::string manifold = "S3";
  Half d3;
  std::string spinc_tag = "t0";
  bool overtwisted = false;
  bool c_hat_nonzero = true;
  std::string convention = kD3Convention;

  static ContactLabel standard();
  // overtwisted structure on S^3 with d3 = i
  static ContactLabel xi(int i);
  friend bool operator==(const ContactLabel&, const ContactLabel&) = default;
};

ContactLabel contact_sum(const ContactLabel& a, const ContactLabel& b);

// U^depth times a generator of a summand of the given height.
struct InvariantStatus {
  bool zero = false;
  TowerHeight height = TowerHeight::infinite();
  unsigned depth = 0;
  Bigrading grading;

  static InvariantStatus vanishing();
  static InvariantStatus at(TowerHeight k, unsigned d, Bigrading g);
  bool hat_nonzero() const { return !zero && depth == 0; }
  bool torsion() const { return !zero && !height.is_infinite(); }
  std::string str() const;
  friend bool operator==(const InvariantStatus&, const InvariantStatus&) = default;
};

InvariantStatus tensor(const InvariantStatus& a, const InvariantStatus& b);
InvariantStatus from_position(const ClassPosition& p);

struct LegendrianDescriptor {
  std::string name;
  std::vector<int> tb_components;   // tb(L_i)
  std::vector<int> rot_components;  // rot(L_i)
  std::vector<std::vector<int>> linking;
  ContactLabel contact;
  InvariantStatus status;
  bool loose = false;
  bool split = false;
  // classical invariants obtained from the operation rules rather than tabulated
  bool derived_classical = false;

  int n() const { return int(tb_components.size()); }
  int tb() const;
  int rot() const;
  friend bool operator==(const LegendrianDescriptor&, const LegendrianDescriptor&) = default;
};

struct TransverseDescriptor {
  std::string name;
  int n = 1;
  int sl = 0;
  ContactLabel contact;
  InvariantStatus status;
  friend bool operator==(const TransverseDescriptor&, const TransverseDescriptor&) = default;
};

// Builds a knot descriptor and fills its status grading from the classical invariants.
LegendrianDescriptor knot(std::string name, int tb, int rot, ContactLabel c, TowerHeight k, unsigned depth);

// (M, A); throws ConsistencyError if tb - rot + n is odd
Bigrading gradings_from_classical(const LegendrianDescriptor& d);

LegendrianDescriptor connected_sum(const LegendrianDescriptor& a, const LegendrianDescriptor& b, int ca = 0,
                                   int cb = 0);
LegendrianDescriptor disjoint_union(const LegendrianDescriptor& a, const LegendrianDescriptor& b);
LegendrianDescriptor stabilize(const LegendrianDescriptor& d, int sign, int component = 0);
TransverseDescriptor transverse_pushoff(const LegendrianDescriptor& d);

struct ConsistencyReport {
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

// All checks on classical data, contact label and status; nothing is repaired.
ConsistencyReport vanishing_and_torsion(const LegendrianDescriptor& d);

// Catalog entries. Names: O, O2, H+, H-, L(j), L_{k,l}, K_i, NL(n,d).
LegendrianDescriptor unknot();
LegendrianDescriptor unlink2();
LegendrianDescriptor hopf_positive();
LegendrianDescriptor hopf_negative();
LegendrianDescriptor L_family(int j);
LegendrianDescriptor L_kl(int k, int l);
LegendrianDescriptor K(int i);
// K_{d+1} # H+^{n-1} # L(1) in the overtwisted S^3 with d3 = d
LegendrianDescriptor nonloose_family(int n, int d);
LegendrianDescriptor power(const LegendrianDescriptor& d, int times);

std::vector<std::string> catalog_names();
std::optional<LegendrianDescriptor> lookup(const std::string& name);

// Connected-sum tree; leaves are descriptors, inner nodes are binary '#' with component choices.
struct SumTree {
  LegendrianDescriptor value;
  std::vector<SumTree> children;  // empty or two
  int ca = 0, cb = 0;
};

SumTree sum_leaf(LegendrianDescriptor d);
SumTree sum_node(SumTree a, SumTree b, int ca = 0, int cb = 0);
int edge_count(const SumTree& t);

struct AlexanderPair {
  Half s1, s2;
  friend bool operator==(const AlexanderPair&, const AlexanderPair&) = default;
  std::string str() const { return "(" + s1.str() + "," + s2.str() + ")"; }
};

// Edges are the '#' nodes numbered from 1 in in-order, i.e. by textual position of the '#'. The pair holds the
// Alexander gradings of the two summands joined at that edge. Throws if the total hat class vanishes.
AlexanderPair alexander_pair(const SumTree& t, int edge);
bool distinguished(const AlexanderPair& a, const AlexanderPair& b);

std::string to_text(const LegendrianDescriptor& d);
std::string to_text(const TransverseDescriptor& d);

}  // namespace lf::calc
