// One line per acceptance criterion; exit status 1 if any criterion fails.
#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "lf/calc_expr.hpp"
#include "lf/calculus.hpp"
#include "lf/errors.hpp"
#include "lf/grid.hpp"
#include "lf/heegaard.hpp"
#include "lf/openbook.hpp"
#include "lf/snf.hpp"
#include "oracles.hpp"

using namespace lf;

namespace {

// time limits in seconds and the memory ceiling in bytes
constexpr double kA1 = 1, kA2 = 1, kA3 = 1, kA4 = 10, kA5 = 30, kA7 = 5, kA8 = 1, kA10 = 60;
constexpr long kA10Bytes = 4L << 30;

Bigrading bg(int m, int a) { return {Half(m), Half(a)}; }

grid::GridDiagram G(const std::string& f) { return grid::parse_grid(oracle::data(f)); }

struct Outcome {
  bool ok = true;
  std::string note;
  void require(bool c, const std::string& what) {
    if (!c) {
      ok = false;
      if (note.empty()) note = what;
    }
  }
};

int failures = 0;

void criterion(const char* id, double limit, const std::function<void(Outcome&)>& body) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.ok = false;
    o.note = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit > 0 && secs > limit) o.require(false, "took longer than " + std::to_string(limit) + " s");
  if (!o.ok) ++failures;
  std::printf("%s %s (%.2f s)%s%s\n", id, o.ok ? "PASS" : "FAIL", secs, o.note.empty() ? "" : ": ",
              o.note.c_str());
  std::fflush(stdout);
}

bool top_of_tower(const ClassPosition& p, Bigrading g) {
  return !p.is_zero && p.height.is_infinite() && p.depth == 0 && p.grading == g;
}

long peak_rss_bytes() {
  rusage u{};
  getrusage(RUSAGE_SELF, &u);
  return long(u.ru_maxrss) * 1024;
}

grid::GridDiagram random_grid(std::mt19937& rng, int N) {
  grid::GridDiagram g{N, std::vector<int>(N), std::vector<int>(N)};
  std::iota(g.O.begin(), g.O.end(), 0);
  std::iota(g.X.begin(), g.X.end(), 0);
  for (;;) {
    std::shuffle(g.O.begin(), g.O.end(), rng);
    std::shuffle(g.X.begin(), g.X.end(), rng);
    bool clash = false;
    for (int r = 0; r < N; ++r) clash |= g.O[r] == g.X[r];
    if (!clash) return g;
  }
}

ob::AbstractOpenBook completed_page(const std::string& name) {
  auto b = ob::parse_openbook(oracle::data(name));
  auto [pg, sys] = ob::complete_to_adapted_system(b.page, b.arcs, b.link.components);
  ob::AbstractOpenBook u;
  u.page = pg;
  u.arcs = sys;
  u.bimage.assign(pg.arc_names.size(), std::nullopt);
  u.link = ob::place_basepoints(pg, sys, b.link.components);
  return ob::canonical(u);
}

}  // namespace

int main() {
  ModuleDecomposition unknot;
  unknot.free_part = {bg(0, 0)};

  criterion("A1", kA1, [&](Outcome& o) {
    for (const char* f : {"unknot2.grid", "unknot3.grid"}) {
      auto h = grid::grid_homology(G(f));
      o.require(h.link == unknot, std::string(f) + " homology " + h.link.str());
      o.require(top_of_tower(h.invariant, bg(0, 0)), std::string(f) + " invariant " + h.invariant.str());
    }
  });

  criterion("A2", kA2, [&](Outcome& o) {
    auto u = G("unknot2.grid");
    auto h = grid::grid_homology(grid::disjoint_union(u, u));
    ModuleDecomposition want;
    want.free_part = {bg(-1, 0), bg(0, 0)};
    o.require(h.link == want.canonical(), "homology " + h.link.str());
    o.require(top_of_tower(h.invariant, bg(-1, 0)), "invariant " + h.invariant.str());
  });

  criterion("A3", kA3, [&](Outcome& o) {
    auto h = grid::grid_homology(G("hopf_plus.grid"));
    ModuleDecomposition want;
    want.free_part = {bg(0, 0), bg(1, 1)};
    want.torsion_part = {{bg(0, 0), 1}};
    o.require(h.link == want.canonical(), "homology " + h.link.str());
    o.require(top_of_tower(h.invariant, bg(1, 1)), "invariant " + h.invariant.str());
    auto m = grid::grid_homology(G("hopf_minus.grid"));
    o.require(!m.invariant.is_zero && m.invariant.depth > 0, "negative Hopf invariant " + m.invariant.str());
  });

  criterion("A4", kA4, [&](Outcome& o) {
    for (const char* f : {"unknot2.grid", "hopf_plus.grid", "trefoil.grid"}) {
      auto g = G(f);
      auto p = grid::grid_homology(g).invariant;
      auto minus = grid::grid_homology(grid::legendrian_stabilize(g, -1)).invariant;
      o.require(minus == p, std::string(f) + " negative stabilization " + minus.str());
      auto plus = grid::grid_homology(grid::legendrian_stabilize(g, +1)).invariant;
      o.require(plus.height == p.height && plus.depth == p.depth + 1 && plus.grading == p.grading.u_shift(1),
                std::string(f) + " positive stabilization " + plus.str());
    }
  });

  criterion("A5", kA5, [&](Outcome& o) {
    auto u = G("unknot2.grid"), t = G("trefoil.grid");
    for (auto [a, b] : std::vector<std::pair<grid::GridDiagram, grid::GridDiagram>>{{u, u}, {t, u}}) {
      auto ha = grid::grid_homology(a), hb = grid::grid_homology(b);
      auto hs = grid::grid_homology(grid::connected_sum(a, b));
      o.require(hs.link == kunneth(ha.link, hb.link), "sum homology " + hs.link.str());
      auto want = calc::tensor(calc::from_position(ha.invariant), calc::from_position(hb.invariant));
      o.require(calc::from_position(hs.invariant) == want, "sum invariant " + hs.invariant.str());
    }
  });

  criterion("A6", 0, [&](Outcome& o) {
    for (const char* f : {"unknot2.grid", "unknot3.grid", "unlink2.grid", "hopf_plus.grid", "hopf_minus.grid",
                          "trefoil.grid", "trefoil_mirror.grid", "t25.grid"}) {
      auto g = G(f);
      auto ci = grid::classical_invariants(g);
      auto p = grid::grid_homology(g).invariant;
      int n = ci.n, tb = ci.tb(), rot = ci.rot();
      o.require(!p.is_zero, std::string(f) + " invariant vanishes");
      o.require(p.grading.alexander.twice() == tb - rot + n, std::string(f) + " A = " + p.grading.alexander.str());
      o.require(p.grading.maslov == Half(tb - rot + 1), std::string(f) + " M = " + p.grading.maslov.str());
      o.require(p.grading.maslov == 2 * p.grading.alexander + Half(1 - n), std::string(f) + " M != 2A+1-n");
    }
  });

  criterion("A7", kA7, [&](Outcome& o) {
    auto a = ob::parse_openbook(oracle::data("unknot_annulus.ob"));
    auto d = hd::build_diagram(a);
    o.require(d.genus == 1, "not a torus diagram");
    o.require(hd::niceness_check(d).nice, "not nice");
    o.require(hd::admissibility_check(d).admissible, "not admissible");
    auto h = hd::diagram_homology(d);
    o.require(h.homology == unknot, "homology " + h.homology.str());
    o.require(top_of_tower(h.invariant, bg(0, 0)), "invariant " + h.invariant.str());
    ob::StabilizationSpec spec{"s1", "s2", "", {"a2+"}, true};
    auto dp = hd::build_diagram(ob::positive_stabilization(a, spec));
    auto m = hd::stabilization_map(d, dp, 1);
    o.require(m.chain_map && m.invariant_maps, "stabilization map");
    auto x = hd::distinguished_generator(d), xp = hd::distinguished_generator(dp);
    o.require(xp.size() == x.size() + 1 && std::equal(x.begin(), x.end(), xp.begin()), "x' != x + {a.b}");
    auto hp = hd::diagram_homology(dp);
    o.require(hp.homology == h.homology, "stabilized homology " + hp.homology.str());
    o.require(hp.invariant == h.invariant, "stabilized invariant " + hp.invariant.str());
  });

  criterion("A8", kA8, [&](Outcome& o) {
    for (int j = 1; j <= 5; ++j)
      o.require(calc::L_family(j).status.grading == bg(1, 1 - j), "L(" + std::to_string(j) + ")");
    for (auto [k, l] : std::vector<std::pair<int, int>>{{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 1}, {1, 2}})
      o.require(calc::L_kl(k, l).status.grading == bg(-2 * k, 1 - k + l),
                "L_{" + std::to_string(k) + "," + std::to_string(l) + "}");
    for (int i = -6; i <= 6; ++i) {
      auto ki = calc::K(i);
      o.require(!ki.status.zero && calc::vanishing_and_torsion(ki).ok(), "K_" + std::to_string(i));
    }
    auto p = calc::evaluate("pair@1 L_{0,2} # L_{1,2} # H+ # L(1)");
    auto q = calc::evaluate("pair@1 L_{1,1} # L_{0,3} # H+ # L(1)");
    o.require(p.pair && q.pair && *p.pair == calc::AlexanderPair{Half(3), Half(2)} &&
                  *q.pair == calc::AlexanderPair{Half(1), Half(4)},
              "Alexander pairs");
    o.require(p.pair && q.pair && calc::distinguished(*p.pair, *q.pair), "pairs not distinguished");
  });

  criterion("A9", 0, [&](Outcome& o) {
    for (const char* f : {"unknot2.grid", "unknot3.grid", "unlink2.grid", "hopf_plus.grid", "hopf_minus.grid",
                          "trefoil.grid", "trefoil_mirror.grid"}) {
      auto g = G(f);
      auto h = grid::grid_homology(g);
      o.require(h.link.rank() == (size_t(1) << (h.n - 1)), std::string(f) + " rank " + std::to_string(h.link.rank()));
      auto fc = specialize_U(grid::differential_minus(g), UMode::One);
      o.require(field_homology(fc).total() == (1L << (g.N - 1)), std::string(f) + " U=1 dimension");
      auto idx = uint32_t(grid::generator_index(grid::invariant_generator(g, grid::Corner::Plus)));
      bool image_nonzero = !field_is_boundary(fc, {idx});
      o.require(image_nonzero == (!h.invariant.is_zero && h.invariant.height.is_infinite()),
                std::string(f) + " image of the invariant");
    }
  });

  criterion("A10", kA10, [&](Outcome& o) {
    auto t0 = std::chrono::steady_clock::now();
    auto h = grid::grid_homology(G("t27.grid"));
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(h.generators == 362880, "generator count");
    o.require(secs <= kA10, "T(2,7) took " + std::to_string(secs) + " s");
    long rss = peak_rss_bytes();
    o.require(rss <= kA10Bytes, "peak memory " + std::to_string(rss >> 20) + " MiB");
    auto t25 = G("t25.grid");
    auto c = grid::differential_minus(t25);
    std::string why;
    o.require(oracle::decomposition_matches(c, grid::grid_homology(t25).collapsed, &why), "T(2,5) oracle: " + why);
    o.note = "T(2,7) " + h.link.str() + " in " + std::to_string(secs).substr(0, 5) + " s, peak " +
             std::to_string(rss >> 20) + " MiB" + (o.note.empty() ? "" : "; " + o.note);
  });

  criterion("A11", 0, [&](Outcome& o) {
    std::mt19937 rng(11);
    int bad = 0;
    for (int it = 0; it < 1000; ++it)
      if (!validate_complex(grid::differential_minus(random_grid(rng, 2 + int(rng() % 5)))).ok()) ++bad;
    o.require(bad == 0, std::to_string(bad) + " grid complexes fail d^2 = 0 or homogeneity");

    bad = 0;
    for (int it = 0; it < 1000; ++it) {
      size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
      PolyMatrix m(r, c);
      for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < c; ++j)
          if (rng() % 3) m.at(i, j) = UPoly::monomial(rng() % 4);
      auto s = smith_normal_form(m);
      bool ok = s.verify(m) && oracle::multiply(oracle::multiply(s.P, m), s.Q) == s.D;
      auto inv = oracle::invariant_factors(m);
      ok = ok && inv.size() == s.diagonal.size();
      for (size_t k = 0; ok && k < inv.size(); ++k) ok = inv[k] == oracle::bits_of(s.diagonal[k]);
      if (!ok) ++bad;
    }
    o.require(bad == 0, std::to_string(bad) + " Smith forms fail");

    std::vector<ob::AbstractOpenBook> books{completed_page("unlink_page.ob"), completed_page("unlink3_page.ob")};
    bad = 0;
    for (int it = 0; it < 500; ++it) {
      auto b = books[it % books.size()];
      auto tags = b.arcs.tags;
      int len = 1 + int(rng() % 4);
      for (int k = 0; k < len; ++k) {
        auto slides = ob::admissible_slides(b);
        if (slides.empty()) break;
        auto [i, j, s] = slides[rng() % slides.size()];
        b = ob::admissible_arc_slide(b, i, j, s);
        if (!ob::validate_adapted(b.page, b.arcs, b.link).ok() || ob::classify(b.page, b.arcs.n()) != tags) {
          ++bad;
          break;
        }
      }
    }
    o.require(bad == 0, std::to_string(bad) + " slide sequences change the classification");
  });

  std::printf("%d of 11 criteria failed\n", failures);
  return failures ? 1 : 0;
}
