#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lf/calc_expr.hpp"
#include "lf/calculus.hpp"
#include "lf/errors.hpp"
#include "lf/grid.hpp"
#include "oracles.hpp"

using namespace lf;
using namespace lf::calc;

namespace {

Bigrading bg(int m, int a) { return {Half(m), Half(a)}; }

Half A(const LegendrianDescriptor& d) { return gradings_from_classical(d).alexander; }

}  // namespace

TEST_CASE("catalog bigradings") {
  auto o = unknot();
  CHECK(o.tb() == -1);
  CHECK(o.rot() == 0);
  CHECK(gradings_from_classical(o) == bg(0, 0));
  CHECK(o.contact.d3 == Half(0));

  for (int j = 1; j <= 5; ++j) {
    auto l = L_family(j);
    CHECK(l.tb() == 6 + 4 * (j - 1));
    CHECK(l.rot() == 7 + 6 * (j - 1));
    CHECK(l.contact.d3 == Half(1 - 2 * j));
    CHECK(gradings_from_classical(l) == bg(1, 1 - j));
  }
  for (auto [k, l] : std::vector<std::pair<int, int>>{{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 1}, {1, 2}}) {
    auto d = L_kl(k, l);
    CHECK(d.contact.d3 == Half(2 * l + 2));
    CHECK(gradings_from_classical(d) == bg(-2 * k, 1 - k + l));
  }
  CHECK_THROWS(L_kl(2, 0));
}

TEST_CASE("every catalog entry satisfies the grading identities") {
  for (const auto& name : catalog_names()) {
    auto d = lookup(name);
    REQUIRE_MESSAGE(d.has_value(), name);
    auto rep = vanishing_and_torsion(*d);
    CHECK_MESSAGE(rep.ok(), name << ": " << (rep.failures.empty() ? "" : rep.failures[0]));
    if (d->status.zero) continue;
    auto g = d->status.grading;
    CHECK_MESSAGE(g.maslov == -d->contact.d3 + Half(d->tb() - d->rot() + 1), name);
    CHECK_MESSAGE(g.alexander.twice() == d->tb() - d->rot() + d->n(), name);
  }
  CHECK_FALSE(lookup("nope").has_value());
  CHECK_FALSE(lookup("L(0)").has_value());
}

TEST_CASE("K_i") {
  for (int i = -6; i <= 6; ++i) {
    auto k = K(i);
    CHECK(k.contact.d3 == Half(i));
    CHECK_FALSE(k.status.zero);
    CHECK(k.derived_classical);
    CHECK(vanishing_and_torsion(k).ok());
    if (k.contact.overtwisted) CHECK(k.status.torsion());
  }
  auto k0 = K(0);
  auto direct = connected_sum(connected_sum(L_kl(0, 0), L_family(1)), L_family(1));
  CHECK(k0.contact.d3 == Half(0));
  CHECK(k0.status == direct.status);
  auto km2 = K(-2);
  CHECK(km2.tb() == connected_sum(L_family(1), L_family(1)).tb());
  CHECK(km2.contact.d3 == Half(-2));
}

TEST_CASE("connected sums") {
  auto oo = connected_sum(unknot(), unknot());
  CHECK(oo.tb() == -1);
  CHECK(oo.rot() == 0);
  CHECK(oo.status == InvariantStatus::at(TowerHeight::infinite(), 0, bg(0, 0)));

  auto h2 = power(hopf_positive(), 2);
  CHECK(h2.n() == 3);
  CHECK(h2.tb() == 1);
  CHECK(A(h2) == Half(2));

  // the status does not depend on the choice of components
  auto h = hopf_positive(), hm = hopf_negative();
  for (int ca = 0; ca < 2; ++ca)
    for (int cb = 0; cb < 2; ++cb) {
      CHECK(connected_sum(h, hm, ca, cb).status == connected_sum(h, hm).status);
      CHECK(connected_sum(h, hm, ca, cb).tb() == connected_sum(h, hm).tb());
      CHECK(connected_sum(hm, h, cb, ca).status == connected_sum(h, hm).status);
    }
  auto l1 = L_family(1), l2 = L_family(2), l01 = L_kl(0, 1);
  CHECK(connected_sum(connected_sum(l1, l2), l01).status == connected_sum(l1, connected_sum(l2, l01)).status);
  CHECK(connected_sum(connected_sum(l1, l2), l01).contact == connected_sum(l1, connected_sum(l2, l01)).contact);
}

TEST_CASE("class arithmetic") {
  auto top = InvariantStatus::at(TowerHeight::infinite(), 0, bg(1, 1));
  auto tor = InvariantStatus::at(TowerHeight::finite(1), 0, bg(1, 0));
  auto deep = InvariantStatus::at(TowerHeight::infinite(), 1, bg(-3, -1));
  CHECK_FALSE(tensor(top, tor).zero);
  CHECK(tensor(deep, tor).zero);
  CHECK(tensor(InvariantStatus::vanishing(), top).zero);
  CHECK(tensor(top, top).grading == bg(2, 2));
}

TEST_CASE("disjoint unions") {
  auto u = disjoint_union(unknot(), unknot());
  CHECK(u.status.grading == bg(-1, 0));
  CHECK(u.status.height.is_infinite());
  CHECK(u.status == unlink2().status);
  CHECK(u.tb() == -2);
  auto z = unknot();
  z.status = InvariantStatus::vanishing();
  CHECK(disjoint_union(z, unknot()).status.zero);
  auto l = disjoint_union(L_family(1), unknot());
  CHECK(l.status.grading.alexander == L_family(1).status.grading.alexander + unknot().status.grading.alexander);
}

TEST_CASE("stabilizations") {
  auto o = unknot();
  auto m = stabilize(o, -1);
  CHECK(m.tb() == -2);
  CHECK(m.rot() == -1);
  CHECK(m.status.height == o.status.height);
  CHECK(m.status.depth == o.status.depth);
  CHECK(m.status.grading == o.status.grading);
  auto p = stabilize(o, +1);
  CHECK_FALSE(p.status.zero);
  CHECK(p.status.depth == 1);
  CHECK(p.status.grading == o.status.grading.u_shift(1));
  CHECK(stabilize(L_family(1), +1).status.zero);
  auto pm = stabilize(stabilize(o, +1), -1), mp = stabilize(stabilize(o, -1), +1);
  pm.name = mp.name;
  CHECK(pm == mp);
  CHECK(pm.tb() == o.tb() - 2);
  CHECK(pm.rot() == o.rot());
}

TEST_CASE("transverse push-offs") {
  auto t = transverse_pushoff(unknot());
  CHECK(t.sl == -1);
  CHECK(t.status.grading.alexander == Half(0));
  CHECK(transverse_pushoff(stabilize(L_family(2), -1)).sl == transverse_pushoff(L_family(2)).sl);
  CHECK(transverse_pushoff(stabilize(L_family(2), -1)).status == transverse_pushoff(L_family(2)).status);
  auto a = L_family(1), b = L_kl(0, 2);
  CHECK(transverse_pushoff(connected_sum(a, b)).sl == transverse_pushoff(a).sl + transverse_pushoff(b).sl + 1);
}

TEST_CASE("consistency checks") {
  auto loose = L_family(1);
  loose.loose = true;
  CHECK_FALSE(vanishing_and_torsion(loose).ok());
  loose.status = InvariantStatus::vanishing();
  CHECK(vanishing_and_torsion(loose).ok());

  auto fill = unknot();
  fill.status = InvariantStatus::at(TowerHeight::finite(2), 0, bg(0, 0));
  CHECK_FALSE(vanishing_and_torsion(fill).ok());

  auto off = unknot();
  off.status.grading = bg(2, 0);
  CHECK_FALSE(vanishing_and_torsion(off).ok());

  auto nl = nonloose_family(2, 0);
  CHECK_FALSE(nl.status.zero);
  CHECK_FALSE(nl.split);
  CHECK(vanishing_and_torsion(nl).ok());
}

TEST_CASE("Alexander pairs") {
  auto p = evaluate("pair@1 L_{0,2} # L_{1,2} # H+ # L(1)");
  auto q = evaluate("pair@1 L_{1,1} # L_{0,3} # H+ # L(1)");
  REQUIRE(p.pair.has_value());
  REQUIRE(q.pair.has_value());
  CHECK(*p.pair == AlexanderPair{Half(3), Half(2)});
  CHECK(*q.pair == AlexanderPair{Half(1), Half(4)});
  CHECK(distinguished(*p.pair, *q.pair));
  // same totals
  CHECK(p.legendrian().tb() == q.legendrian().tb());
  CHECK(p.legendrian().rot() == q.legendrian().rot());
  CHECK(p.legendrian().contact.d3 == q.legendrian().contact.d3);

  auto x = evaluate("pair@1 L(2) # L(2)");
  CHECK(x.pair->s1 == x.pair->s2);
  auto tree = sum_node(sum_leaf(L_kl(0, 2)), sum_leaf(L_kl(1, 2)));
  auto pr = alexander_pair(tree, 1);
  CHECK(pr.s1 + pr.s2 == A(tree.value));
  CHECK(edge_count(tree) == 1);
  CHECK_THROWS(alexander_pair(tree, 2));
}

TEST_CASE("expressions") {
  auto r = evaluate("L(1) # L(1)");
  CHECK(r.legendrian().contact.d3 == Half(-2));
  CHECK(r.legendrian().status.hat_nonzero());
  CHECK(evaluate("O u O").legendrian().status == unlink2().status);
  CHECK(evaluate("O ⊔ O").legendrian().status == unlink2().status);
  CHECK(evaluate("H+^2").legendrian().n() == 3);
  CHECK(evaluate("O stab+ stab-").legendrian().tb() == -3);
  CHECK(evaluate("L(2) pushoff").transverse);
  CHECK(evaluate("(O # O)").legendrian().tb() == -1);
  CHECK(evaluate("H+ #[1,0] H+").legendrian().n() == 3);
  CHECK_THROWS_AS(evaluate("L(1) #"), ParseError);
  CHECK_THROWS_AS(evaluate("Q7"), ParseError);
  CHECK_THROWS_AS(evaluate("(O"), ParseError);
  CHECK_FALSE(report_text(r).empty());
}

TEST_CASE("symbolic status agrees with grid computations") {
  std::vector<std::pair<std::string, LegendrianDescriptor>> cases{
      {"unknot2.grid", unknot()},
      {"unlink2.grid", unlink2()},
      {"hopf_plus.grid", hopf_positive()},
      {"hopf_minus.grid", hopf_negative()}};
  for (auto& [file, desc] : cases) {
    auto g = grid::parse_grid(oracle::data(file));
    auto h = grid::grid_homology(g);
    CHECK_MESSAGE(from_position(h.invariant) == desc.status, file);
    auto ci = grid::classical_invariants(g);
    CHECK(ci.tb() == desc.tb());
    CHECK(ci.rot() == desc.rot());
  }
  auto u = grid::parse_grid(oracle::data("unknot2.grid"));
  auto sum = grid::grid_homology(grid::connected_sum(u, u));
  CHECK(from_position(sum.invariant) == connected_sum(unknot(), unknot()).status);
  auto st = grid::grid_homology(grid::legendrian_stabilize(u, +1));
  CHECK(from_position(st.invariant) == stabilize(unknot(), +1).status);
}
