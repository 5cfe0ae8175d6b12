#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <sstream>

#include "lf/complex.hpp"
#include "lf/grid.hpp"
#include "lf/homology.hpp"
#include "lf/snf.hpp"
#include "oracles.hpp"

using namespace lf;

namespace {

Bigrading bg(int m, int a) { return {Half(m), Half(a)}; }

UPoly U(uint32_t e) { return UPoly::monomial(e); }

// zero differential on the given gradings
FreeBigradedComplex free_complex(const std::vector<Bigrading>& gs) {
  FreeBigradedComplex c;
  int i = 0;
  for (const auto& g : gs) c.add_generator({"g" + std::to_string(i++), g, "t0"});
  return c;
}

// y -> U^k x with x at g
FreeBigradedComplex torsion_piece(Bigrading g, unsigned k) {
  FreeBigradedComplex c;
  auto x = c.add_generator({"x", g, "t0"});
  auto y = c.add_generator({"y", g.u_shift(k) + bg(1, 0), "t0"});
  c.add_entry(x, y, U(k));
  return c;
}

// A random complex with known homology: a direct sum of free generators, torsion pieces and
// acyclic pairs, conjugated by random homogeneous elementary changes of basis.
struct Planted {
  FreeBigradedComplex c;
  ModuleDecomposition expected;
};

Planted planted(std::mt19937& rng) {
  std::vector<Bigrading> gr;
  std::vector<std::tuple<size_t, size_t, uint32_t>> arrows;  // target, source, exponent
  ModuleDecomposition exp;
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  int pieces = pick(1, 5);
  for (int p = 0; p < pieces; ++p) {
    int a = pick(-2, 2);
    Bigrading x = bg(2 * a + pick(-1, 1), a);
    int kind = pick(0, 2);
    gr.push_back(x);
    if (kind == 0) {
      exp.free_part.push_back(x);
      continue;
    }
    unsigned k = kind == 1 ? unsigned(pick(1, 3)) : 0;
    gr.push_back(x.u_shift(k) + bg(1, 0));
    arrows.push_back({gr.size() - 2, gr.size() - 1, k});
    if (k) exp.torsion_part.push_back({x, k});
  }
  size_t n = gr.size();
  // dense differential, D[t][s]
  std::vector<std::vector<UPoly>> D(n, std::vector<UPoly>(n));
  for (auto [t, s, k] : arrows) D[t][s] = U(k);
  for (int step = 0; step < 12; ++step) {
    size_t i = pick(0, int(n) - 1), j = pick(0, int(n) - 1);
    if (i == j) continue;
    uint32_t m = pick(0, 2);
    if (!(gr[i].u_shift(m) == gr[j])) continue;
    // B = I + U^m E_ij is its own inverse; D <- B D B
    UPoly c = U(m);
    for (size_t s = 0; s < n; ++s) D[i][s] += c * D[j][s];
    for (size_t t = 0; t < n; ++t) D[t][j] += D[t][i] * c;
  }
  Planted out;
  for (size_t i = 0; i < n; ++i) out.c.add_generator({"g" + std::to_string(i), gr[i], "t0"});
  for (size_t t = 0; t < n; ++t)
    for (size_t s = 0; s < n; ++s)
      if (!D[t][s].is_zero()) out.c.add_entry(uint32_t(t), uint32_t(s), D[t][s]);
  out.expected = exp.canonical();
  return out;
}

}  // namespace

TEST_CASE("upoly arithmetic") {
  UPoly one_plus_u{0, 1};
  CHECK((one_plus_u + one_plus_u).is_zero());
  CHECK(one_plus_u * one_plus_u == UPoly({0, 2}));
  auto [q, r] = divmod(UPoly({3, 1}), U(1));
  CHECK(q == UPoly({2, 0}));
  CHECK(r.is_zero());
  CHECK_THROWS_AS(divmod(one_plus_u, UPoly()), std::domain_error);
  CHECK(UPoly() == UPoly::from_exponents({}));
  CHECK(UPoly::from_exponents({2, 2, 1}) == U(1));

  std::mt19937 rng(7);
  for (int it = 0; it < 500; ++it) {
    auto rnd = [&](int maxdeg) {
      std::vector<uint32_t> e;
      for (int d = 0; d <= maxdeg; ++d)
        if (rng() & 1) e.push_back(d);
      return UPoly::from_exponents(e);
    };
    UPoly a = rnd(9), b = rnd(5);
    if (b.is_zero()) continue;
    auto [qq, rr] = divmod(a, b);
    CHECK(qq * b + rr == a);
    CHECK((rr.is_zero() || rr.degree() < b.degree()));
    CHECK(oracle::bits_of(a * b) == oracle::bits_mul(oracle::bits_of(a), oracle::bits_of(b)));
  }
}

TEST_CASE("half integers") {
  CHECK(Half::parse("-3/2").twice() == -3);
  CHECK(Half::parse("0.5") == Half::from_twice(1));
  CHECK(Half::parse("4") == Half(4));
  CHECK(Half::from_twice(-1).str() == "-1/2");
  CHECK_THROWS(Half::from_twice(3).to_int());
  CHECK(bg(1, 1).collapsed() == Half(-1));
}

TEST_CASE("validate_complex") {
  CHECK(validate_complex(free_complex({bg(0, 0), bg(3, 1)})).ok());

  FreeBigradedComplex c;
  auto x = c.add_generator({"x", bg(1, 0), "t0"});
  auto y = c.add_generator({"y", bg(0, 0), "t0"});
  c.add_entry(y, x, UPoly::one());
  CHECK(validate_complex(c).ok());

  FreeBigradedComplex bad;
  x = bad.add_generator({"x", bg(1, 1), "t0"});
  y = bad.add_generator({"y", bg(0, 0), "t0"});
  bad.add_entry(y, x, UPoly::one());
  auto rep = validate_complex(bad);
  CHECK_FALSE(rep.homogeneous);
  REQUIRE(!rep.violations.empty());
  CHECK(rep.violations[0].find("x") != std::string::npos);
  CHECK(rep.violations[0].find("y") != std::string::npos);

  // a -> b -> c with both entries 1 has d^2 != 0
  FreeBigradedComplex sq;
  auto a = sq.add_generator({"a", bg(2, 0), "t0"});
  auto b = sq.add_generator({"b", bg(1, 0), "t0"});
  auto cc = sq.add_generator({"c", bg(0, 0), "t0"});
  sq.add_entry(b, a, UPoly::one());
  sq.add_entry(cc, b, UPoly::one());
  CHECK_FALSE(validate_complex(sq).d_squared_zero);
  CHECK_THROWS(homology(sq));
}

TEST_CASE("smith normal form examples") {
  auto I = PolyMatrix::identity(3);
  auto s = smith_normal_form(I);
  CHECK(s.D == I);
  CHECK(s.verify(I));

  PolyMatrix m(2, 2);
  m.at(0, 0) = U(2);
  m.at(1, 1) = U(1);
  s = smith_normal_form(m);
  REQUIRE(s.diagonal.size() == 2);
  CHECK(s.diagonal[0] == U(1));
  CHECK(s.diagonal[1] == U(2));

  // not all invariant factors are monomials
  PolyMatrix h(2, 2);
  h.at(0, 0) = UPoly::one();
  h.at(0, 1) = U(1);
  h.at(1, 0) = U(1);
  h.at(1, 1) = UPoly::one();
  s = smith_normal_form(h);
  REQUIRE(s.diagonal.size() == 2);
  CHECK(s.diagonal[1] == UPoly({0, 2}));
}

TEST_CASE("smith normal form certificates on random monomial matrices") {
  std::mt19937 rng(2024);
  int failures = 0;
  for (int it = 0; it < 1000; ++it) {
    size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
    PolyMatrix m(r, c);
    for (size_t i = 0; i < r; ++i)
      for (size_t j = 0; j < c; ++j)
        if (rng() % 3) m.at(i, j) = U(rng() % 4);
    auto s = smith_normal_form(m);
    bool ok = s.verify(m);
    ok = ok && oracle::multiply(oracle::multiply(s.P, m), s.Q) == s.D;
    ok = ok && oracle::multiply(s.P, s.P_inv) == PolyMatrix::identity(r);
    ok = ok && oracle::multiply(s.Q_inv, s.Q) == PolyMatrix::identity(c);
    auto inv = oracle::invariant_factors(m);
    ok = ok && inv.size() == s.diagonal.size();
    for (size_t k = 0; ok && k < inv.size(); ++k) ok = inv[k] == oracle::bits_of(s.diagonal[k]);
    for (size_t k = 0; ok && k + 1 < s.diagonal.size(); ++k) ok = divides(s.diagonal[k], s.diagonal[k + 1]);
    if (!ok) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("homology of planted complexes") {
  std::mt19937 rng(99);
  for (int it = 0; it < 300; ++it) {
    auto p = planted(rng);
    REQUIRE(validate_complex(p.c).ok());
    auto h = homology(p.c);
    CHECK(h == p.expected);
    std::string why;
    CHECK_MESSAGE(oracle::decomposition_matches(p.c, h, &why), why);
    CHECK(field_homology(specialize_U(p.c, UMode::Zero)).total() == long(h.hat_dimension()));
  }
}

TEST_CASE("homology examples") {
  auto t = torsion_piece(bg(0, 0), 2);
  auto h = homology(t);
  CHECK(h.free_part.empty());
  REQUIRE(h.torsion_part.size() == 1);
  CHECK(h.torsion_part[0] == TorsionSummand{bg(0, 0), 2});

  // trefoil grid complex against the dense per-slice oracle
  grid::GridDiagram tref{5, {0, 1, 2, 3, 4}, {2, 3, 4, 0, 1}};
  auto c = grid::differential_minus(tref);
  auto ht = homology(c);
  std::string why;
  CHECK_MESSAGE(oracle::decomposition_matches(c, ht, &why), why);
  CHECK(ht == grid::grid_homology(tref).collapsed);
}

TEST_CASE("class_position") {
  FreeBigradedComplex c;
  auto x = c.add_generator({"x", bg(1, 0), "t0"});
  auto y = c.add_generator({"y", bg(0, 0), "t0"});
  auto z = c.add_generator({"z", bg(-3, -1), "t0"});
  auto w = c.add_generator({"w", bg(-2, -1), "t0"});
  auto f = c.add_generator({"f", bg(2, 1), "t0"});
  c.add_entry(y, x, UPoly::one());
  c.add_entry(z, w, UPoly::one());
  REQUIRE(validate_complex(c).ok());

  CHECK(class_position(c, Chain{{y, UPoly::one()}}).is_zero);

  auto p = class_position(c, Chain{{z, UPoly::one()}});
  CHECK(p.is_zero);

  auto t = torsion_piece(bg(0, 0), 1);
  p = class_position(t, Chain{{0, UPoly::one()}});
  CHECK_FALSE(p.is_zero);
  CHECK(p.height == TowerHeight::finite(1));
  CHECK(p.depth == 0);
  CHECK(p.grading == bg(0, 0));

  p = class_position(c, Chain{{f, UPoly::one()}});
  CHECK_FALSE(p.is_zero);
  CHECK(p.height.is_infinite());
  CHECK(p.depth == 0);
  auto q = class_position(c, Chain{{f, U(1)}});
  CHECK(q.depth == 1);
  CHECK(q.grading == bg(0, 0));

  // depth and annihilation along a torsion tower of height 3
  auto t3 = torsion_piece(bg(0, 0), 3);
  auto base = class_position(t3, Chain{{0, UPoly::one()}});
  CHECK(base.height == TowerHeight::finite(3));
  for (unsigned k = 0; k < 5; ++k) {
    auto pk = class_position(t3, Chain{{0, U(k)}});
    CHECK(pk.is_zero == (k >= 3));
    if (!pk.is_zero) CHECK(pk.depth == k);
  }

  CHECK_THROWS(class_position(c, Chain{{x, UPoly::one()}}));
}

TEST_CASE("tensor products") {
  auto unit = free_complex({bg(0, 0)});
  auto t = torsion_piece(bg(2, 1), 2);
  auto tu = tensor_product(t, unit);
  CHECK(homology(tu) == homology(t));

  auto unlink = free_complex({bg(-1, 0), bg(0, 0)});
  auto h = homology(tensor_product(unlink, unlink));
  ModuleDecomposition want;
  want.free_part = {bg(-2, 0), bg(-1, 0), bg(-1, 0), bg(0, 0)};
  CHECK(h == want.canonical());
  CHECK(kunneth(homology(unlink), homology(unlink)) == want.canonical());

  // unknot # unknot from two 2x2 grid complexes against the 3x3 unknot grid
  grid::GridDiagram u2{2, {0, 1}, {1, 0}}, u3{3, {0, 1, 2}, {1, 2, 0}};
  auto c2 = grid::differential_minus(u2);
  auto hh = homology(tensor_product(c2, c2));
  auto reduced = divide_by_w(hh, 2);
  REQUIRE(reduced.has_value());
  CHECK(*reduced == grid::grid_homology(u3).link);
}

TEST_CASE("kunneth agrees with tensor products of planted complexes") {
  std::mt19937 rng(5);
  for (int it = 0; it < 150; ++it) {
    auto a = planted(rng), b = planted(rng);
    auto c = tensor_product(a.c, b.c);
    REQUIRE(validate_complex(c).ok());
    CHECK(homology(c) == kunneth(a.expected, b.expected));
  }
}

TEST_CASE("specialize_U") {
  auto one = free_complex({bg(0, 0)});
  CHECK(field_homology(specialize_U(one, UMode::Zero)).total() == 1);

  auto unlink = free_complex({bg(-1, 0), bg(0, 0)});
  auto fh = field_homology(specialize_U(unlink, UMode::One));
  CHECK(fh.total() == 2);
  CHECK(fh.dims.at({Half(-1), Half(0)}) == 1);
  CHECK(fh.dims.at({Half(0), Half(0)}) == 1);

  auto tor = torsion_piece(bg(0, 0), 2);
  CHECK(field_homology(specialize_U(tor, UMode::One)).total() == 0);
  CHECK(field_homology(specialize_U(tor, UMode::Zero)).total() == 2);
}

TEST_CASE("w factors") {
  ModuleDecomposition d;
  d.free_part = {bg(0, 0)};
  d.torsion_part = {{bg(1, 1), 2}};
  auto m = multiply_by_w(d.canonical(), 3);
  CHECK(m.free_part.size() == 8);
  auto back = divide_by_w(m, 3);
  REQUIRE(back.has_value());
  CHECK(*back == d.canonical());
  ModuleDecomposition odd;
  odd.free_part = {bg(0, 0)};
  CHECK_FALSE(divide_by_w(odd, 1).has_value());
}

TEST_CASE("complex text round trip") {
  std::mt19937 rng(11);
  auto p = planted(rng);
  std::ostringstream os;
  write_complex(os, p.c);
  std::istringstream is(os.str());
  auto c = read_complex(is);
  std::ostringstream os2;
  write_complex(os2, c);
  CHECK(os.str() == os2.str());
  std::istringstream junk("generators 1\nx 0 0\n");
  CHECK_THROWS(read_complex(junk));
}
