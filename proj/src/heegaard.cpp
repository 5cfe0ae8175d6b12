#include "lf/heegaard.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "lf/errors.hpp"
#include "lf/textio.hpp"

namespace lf::hd {

namespace {

constexpr HalfEdge kPlusOrder[4] = {AlphaOut, BetaOut, AlphaIn, BetaIn};
constexpr HalfEdge kMinusOrder[4] = {AlphaOut, BetaIn, AlphaIn, BetaOut};

int rot_index(const HalfEdge* order, HalfEdge h) {
  for (int k = 0; k < 4; ++k)
    if (order[k] == h) return k;
  return 0;
}

}  // namespace

std::string half_edge_name(HalfEdge h) {
  static const char* names[4] = {"ao", "bo", "ai", "bi"};
  return names[h];
}

Dart HeegaardDiagram::reverse(Dart d) const {
  const Point& p = points[d.point];
  switch (d.h) {
    case AlphaOut: {
      const auto& c = alpha[p.alpha];
      return {c[(alpha_pos[d.point] + 1) % c.size()], AlphaIn};
    }
    case AlphaIn: {
      const auto& c = alpha[p.alpha];
      return {c[(alpha_pos[d.point] + c.size() - 1) % c.size()], AlphaOut};
    }
    case BetaOut: {
      const auto& c = beta[p.beta];
      return {c[(beta_pos[d.point] + 1) % c.size()], BetaIn};
    }
    default: {
      const auto& c = beta[p.beta];
      return {c[(beta_pos[d.point] + c.size() - 1) % c.size()], BetaOut};
    }
  }
}

Dart HeegaardDiagram::ccw_next(Dart d) const {
  const HalfEdge* o = points[d.point].sign > 0 ? kPlusOrder : kMinusOrder;
  return {d.point, o[(rot_index(o, d.h) + 1) % 4]};
}

Dart HeegaardDiagram::cw_next(Dart d) const {
  const HalfEdge* o = points[d.point].sign > 0 ? kPlusOrder : kMinusOrder;
  return {d.point, o[(rot_index(o, d.h) + 3) % 4]};
}

void index_regions(HeegaardDiagram& d) {
  int V = int(d.points.size());
  if (d.alpha.size() != d.beta.size()) throw ConsistencyError("alpha and beta curve counts differ");
  d.alpha_pos.assign(V, -1);
  d.beta_pos.assign(V, -1);
  for (size_t i = 0; i < d.alpha.size(); ++i) {
    if (d.alpha[i].empty()) throw ConsistencyError("alpha curve " + std::to_string(i + 1) + " meets no beta curve");
    for (size_t k = 0; k < d.alpha[i].size(); ++k) {
      int p = d.alpha[i][k];
      if (p < 0 || p >= V || d.points[p].alpha != int(i) || d.alpha_pos[p] >= 0)
        throw ConsistencyError("alpha curve " + std::to_string(i + 1) + " lists a point inconsistently");
      d.alpha_pos[p] = int(k);
    }
  }
  for (size_t j = 0; j < d.beta.size(); ++j) {
    if (d.beta[j].empty()) throw ConsistencyError("beta curve " + std::to_string(j + 1) + " meets no alpha curve");
    for (size_t k = 0; k < d.beta[j].size(); ++k) {
      int p = d.beta[j][k];
      if (p < 0 || p >= V || d.points[p].beta != int(j) || d.beta_pos[p] >= 0)
        throw ConsistencyError("beta curve " + std::to_string(j + 1) + " lists a point inconsistently");
      d.beta_pos[p] = int(k);
    }
  }
  for (int p = 0; p < V; ++p) {
    if (d.alpha_pos[p] < 0 || d.beta_pos[p] < 0) throw ConsistencyError("point " + d.points[p].id + " is unused");
    if (d.points[p].sign != 1 && d.points[p].sign != -1) throw ConsistencyError("bad sign at " + d.points[p].id);
  }
  std::vector<std::vector<Dart>> cycles;
  std::vector<int> dart_cycle(4 * V, -1);
  for (int p = 0; p < V; ++p)
    for (int h = 0; h < 4; ++h) {
      if (dart_cycle[4 * p + h] >= 0) continue;
      std::vector<Dart> cyc;
      Dart start{p, HalfEdge(h)}, cur = start;
      do {
        dart_cycle[4 * cur.point + cur.h] = int(cycles.size());
        cyc.push_back(cur);
        cur = d.cw_next(d.reverse(cur));
      } while (!(cur == start));
      cycles.push_back(std::move(cyc));
    }
  auto cycle_of = [&](Dart e) {
    if (e.point < 0 || e.point >= V) throw ConsistencyError("region data refers to an unknown point");
    return dart_cycle[4 * e.point + e.h];
  };
  std::vector<int> parent(cycles.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
  for (const auto& [a, b] : d.joins) parent[find(cycle_of(a))] = find(cycle_of(b));
  d.regions.clear();
  d.dart_region.assign(4 * V, -1);
  std::map<int, int> root_region;
  for (int c = 0; c < int(cycles.size()); ++c) {
    auto [it, fresh] = root_region.try_emplace(find(c), int(d.regions.size()));
    if (fresh) {
      d.regions.emplace_back();
      d.regions.back().cycles.clear();
    }
    Region& r = d.regions[it->second];
    r.cycles.push_back(r.boundary.size());
    for (const Dart& e : cycles[c]) {
      d.dart_region[4 * e.point + e.h] = it->second;
      r.boundary.push_back(e);
    }
  }
  for (auto& r : d.regions) r.euler = 2 - int(r.cycles.size());
  for (const auto& [e, chi] : d.region_euler) d.regions[root_region.at(find(cycle_of(e)))].euler = chi;
  long chi_sum = 0;
  for (const auto& r : d.regions) chi_sum += r.euler;
  d.euler_ok = chi_sum - V == 2 - 2 * d.genus;
  if (d.z.size() != d.w.size()) throw ConsistencyError("z and w counts differ");
  d.z_region.clear();
  d.w_region.clear();
  for (const auto& b : d.z) {
    if (b.point < 0 || b.point >= V) throw ConsistencyError("basepoint at an unknown point");
    d.z_region.push_back(d.region_of({b.point, b.h}));
  }
  for (const auto& b : d.w) {
    if (b.point < 0 || b.point >= V) throw ConsistencyError("basepoint at an unknown point");
    d.w_region.push_back(d.region_of({b.point, b.h}));
  }
  if (!d.distinguished.empty()) {
    if (d.distinguished.size() != d.alpha.size()) throw ConsistencyError("distinguished tuple has the wrong size");
    std::vector<bool> used(d.beta.size(), false);
    for (size_t i = 0; i < d.distinguished.size(); ++i) {
      int p = d.distinguished[i];
      if (p < 0 || p >= V || d.points[p].alpha != int(i) || used[d.points[p].beta])
        throw ConsistencyError("distinguished tuple is not a generator");
      used[d.points[p].beta] = true;
    }
  }
}

// ---------------------------------------------------------------- builders

namespace {

// Cuts every curve of a diagram built from a page at the binding and adds the binding intervals as edges.
// Each face of that graph is a disk on one of the two pages; faces glued along binding intervals form one
// region, which fills in the joins and Euler characteristics of the coarse diagram.
void bind_regions(HeegaardDiagram& d, const ob::Page& pg) {
  int V = int(d.points.size()), E = int(pg.arc_names.size());
  auto vA = [&](int k, int s) { return V + 2 * k + (s > 0); };          // end of side (k, s)
  auto vB = [&](int k, int s) { return V + 2 * E + 2 * k + (s > 0); };  // b_k endpoint after side (k, s)
  int NV = V + 4 * E;
  struct HalfEdgeRec {
    int from, to, coarse;  // coarse: 4 * point + half-edge of the dart it subdivides, -1 on the binding
  };
  std::vector<HalfEdgeRec> he;
  // binding vertices use the ccw slots forward, toward page 1, backward, toward page -1
  std::vector<std::array<int, 4>> rot(NV, {-1, -1, -1, -1});
  std::vector<int> slot;
  auto place = [&](int v, int k, int h) {
    if (rot[v][k] >= 0) throw ConsistencyError("doubled page: a binding vertex is used twice");
    rot[v][k] = h;
    if (int(slot.size()) <= h) slot.resize(h + 1, -1);
    slot[h] = k;
  };
  auto edge = [&](int u, int v, int cu, int cv) {
    int a = int(he.size());
    he.push_back({u, v, cu});
    he.push_back({v, u, cv});
    return a;
  };
  auto lay_curve = [&](const std::vector<std::vector<int>>& curves, HalfEdge out, HalfEdge in,
                       const std::function<int(int, int)>& bind) {
    for (int i = 0; i < int(curves.size()); ++i) {
      const auto& L = curves[i];
      int m = int(L.size());
      for (int k = 0; k < m; ++k) {
        int p = L[k], q = L[(k + 1) % m];
        std::vector<std::pair<int, bool>> cuts;  // vertex, crossing from page 1 to page -1
        if (k == 0) cuts.push_back({bind(i, 1), true});
        if (k == m - 1) cuts.push_back({bind(i, -1), false});
        int prev = p, prev_slot = -1;
        const HalfEdge* po = d.points[p].sign > 0 ? kPlusOrder : kMinusOrder;
        const HalfEdge* qo = d.points[q].sign > 0 ? kPlusOrder : kMinusOrder;
        for (size_t c = 0; c <= cuts.size(); ++c) {
          int v = c < cuts.size() ? cuts[c].first : q;
          int h = edge(prev, v, 4 * p + out, 4 * q + in);
          place(prev, prev == p && c == 0 ? rot_index(po, out) : prev_slot, h);
          if (c < cuts.size()) {
            place(v, cuts[c].second ? 1 : 3, h + 1);
            prev_slot = cuts[c].second ? 3 : 1;
          } else {
            place(v, rot_index(qo, in), h + 1);
          }
          prev = v;
        }
      }
    }
  };
  lay_curve(d.alpha, AlphaOut, AlphaIn, vB);
  lay_curve(d.beta, BetaOut, BetaIn, vA);
  for (const auto& poly : pg.polygons) {
    int K = int(poly.sides.size());
    for (int c = 0; c < K; ++c) {
      auto [k, s] = poly.sides[c];
      auto [k2, s2] = poly.sides[(c + 1) % K];
      int h = edge(vA(k, s), vB(k, s), -1, -1);
      place(vA(k, s), 0, h);
      place(vB(k, s), 2, h + 1);
      h = edge(vB(k, s), vA(k2, -s2), -1, -1);
      place(vB(k, s), 0, h);
      place(vA(k2, -s2), 2, h + 1);
    }
  }
  for (const auto& r : rot)
    for (int h : r)
      if (h < 0) throw ConsistencyError("doubled page: a binding vertex is incomplete");
  int H = int(he.size());
  std::vector<int> face(H, -1);
  int F = 0;
  for (int h0 = 0; h0 < H; ++h0) {
    if (face[h0] >= 0) continue;
    for (int h = h0; face[h] < 0;) {
      face[h] = F;
      int t = h ^ 1;
      h = rot[he[h].to][(slot[t] + 3) % 4];
    }
    ++F;
  }
  if (NV - H / 2 + F != 2 - 2 * d.genus)
    throw ConsistencyError("doubled page: pieces do not close up to a surface of genus " + std::to_string(d.genus));
  int C = int(d.regions.size());
  std::vector<int> parent(F + C);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
  for (int h = 0; h < H; ++h)
    parent[find(face[h])] = find(he[h].coarse >= 0 ? F + d.dart_region[he[h].coarse] : face[h ^ 1]);
  std::map<int, int> pieces, cuts;
  std::map<int, std::vector<int>> members;
  for (int f = 0; f < F; ++f) ++pieces[find(f)];
  for (int h = 0; h < H; h += 2)
    if (he[h].coarse < 0) ++cuts[find(face[h])];
  for (int c = 0; c < C; ++c) members[find(F + c)].push_back(c);
  d.joins.clear();
  d.region_euler.clear();
  for (const auto& [root, cs] : members) {
    Dart first = d.regions[cs[0]].boundary.front();
    for (size_t k = 1; k < cs.size(); ++k) d.joins.push_back({d.regions[cs[k]].boundary.front(), first});
    int chi = pieces[root] - cuts[root];
    if (chi != 2 - int(cs.size())) d.region_euler[first] = chi;
  }
}

}  // namespace

HeegaardDiagram build_diagram(const ob::AbstractOpenBook& b) {
  if (!b.has_monodromy()) throw ConsistencyError("open book carries no monodromy images");
  const ob::Page& p = b.page;
  ob::check_page(p);
  int E = int(p.arc_names.size());
  int n = b.arcs.n();
  if (b.link.z.size() != size_t(n) || b.link.w.size() != size_t(n))
    throw ConsistencyError("open book needs one z and one w per link component");
  std::vector<ob::Strand> strands;
  for (int i = 0; i < E; ++i) strands.push_back(ob::Strand{ob::reduce(*b.bimage[i], false), false, i, false});
  ob::CurveLayout layout(p, strands);
  for (int s = 0; s < E; ++s)
    for (int t = s; t < E; ++t)
      if (!layout.crossings(s, t).empty()) throw ConsistencyError("monodromy images not properly embedded");

  HeegaardDiagram d;
  d.genus = 2 * p.genus() + p.boundary_components() - 1;
  d.basis = d.genus;
  d.components = n;
  d.alpha.assign(E, {});
  d.beta.assign(E, {});
  for (int i = 0; i < E; ++i) {
    d.points.push_back({"x" + std::to_string(i + 1), i, i, -1});
    d.alpha[i].push_back(i);
    d.beta[i].push_back(i);
  }
  std::map<std::pair<int, int>, int> event_point;
  for (int j = 0; j < E; ++j)
    for (const auto& ev : layout.events(j)) {
      int id = int(d.points.size());
      int tau = strands[ev.first].word[ev.second].sign;
      d.points.push_back({"y" + std::to_string(id - E + 1), ev.first, j, tau});
      event_point[ev] = id;
    }
  for (int i = 0; i < E; ++i)
    for (int t = int(strands[i].word.size()) - 1; t >= 0; --t) d.alpha[i].push_back(event_point[{i, t}]);
  for (int j = 0; j < E; ++j) {
    const auto& ev = layout.events(j);
    for (auto it = ev.rbegin(); it != ev.rend(); ++it) d.beta[j].push_back(event_point[*it]);
  }
  for (int c = 0; c < n; ++c) {
    int k = b.link.w[c].arc;
    int side_sign = 1;
    if (p.side_loc(k, 1).poly != b.link.z[c]) {
      if (p.side_loc(k, -1).poly != b.link.z[c]) throw ConsistencyError("z is not next to its distinguished strip");
      side_sign = -1;
    }
    d.z.push_back({k, side_sign > 0 ? AlphaOut : AlphaIn});
    d.w.push_back({k, b.link.w[c].half > 0 ? BetaOut : BetaIn});
  }
  for (int i = 0; i < E; ++i) d.distinguished.push_back(i);
  if (b.classical) {
    const auto& cl = *b.classical;
    Half a = Half::from_twice(cl.tb - cl.rot + n);
    d.pin = Bigrading{-cl.d3 + Half(cl.tb - cl.rot + 1), a};
  }
  index_regions(d);
  bind_regions(d, p);
  index_regions(d);
  if (!d.euler_ok) throw ConsistencyError("doubled page: regions do not match the surface");
  return d;
}

HeegaardDiagram from_grid(const grid::GridDiagram& g) {
  auto rep = grid::validate_grid(g);
  if (!rep.ok) throw ConsistencyError("invalid grid: " + rep.errors.front());
  int N = g.N;
  HeegaardDiagram d;
  d.genus = 1;
  d.basis = 1;
  d.components = rep.components;
  d.alpha.assign(N, {});
  d.beta.assign(N, {});
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) d.points.push_back({"p" + std::to_string(c) + "_" + std::to_string(r), r, c, 1});
  auto pid = [&](int c, int r) { return r * N + c; };
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) d.alpha[r].push_back(pid(c, r));
  for (int c = 0; c < N; ++c)
    for (int r = 0; r < N; ++r) d.beta[c].push_back(pid(c, r));
  for (int r = 0; r < N; ++r) {
    d.z.push_back({pid(g.X[r], r), AlphaOut});
    d.w.push_back({pid(g.O[r], r), AlphaOut});
  }
  auto plus = grid::invariant_generator(g, grid::Corner::Plus);
  for (int r = 0; r < N; ++r) d.distinguished.push_back(pid(plus[r], r));
  d.pin = grid::gradings(g, plus);
  index_regions(d);
  return d;
}

// ---------------------------------------------------------------- generators

void for_each_generator(const HeegaardDiagram& d, const std::function<void(const Generator&)>& fn) {
  int m = d.curves();
  Generator x(m, -1);
  std::vector<bool> used(m, false);
  std::function<void(int)> rec = [&](int i) {
    if (i == m) {
      fn(x);
      return;
    }
    for (int p : d.alpha[i]) {
      int bj = d.points[p].beta;
      if (used[bj]) continue;
      used[bj] = true;
      x[i] = p;
      rec(i + 1);
      used[bj] = false;
    }
  };
  rec(0);
}

std::vector<Generator> enumerate_generators(const HeegaardDiagram& d) {
  std::vector<Generator> out;
  for_each_generator(d, [&](const Generator& x) { out.push_back(x); });
  return out;
}

Generator distinguished_generator(const HeegaardDiagram& d) {
  if (d.distinguished.empty()) throw ConsistencyError("diagram has no distinguished generator");
  return d.distinguished;
}

std::string generator_id(const HeegaardDiagram& d, const Generator& x) {
  std::string s;
  for (size_t i = 0; i < x.size(); ++i) {
    if (i) s += '.';
    s += d.points[x[i]].id;
  }
  return s;
}

// ---------------------------------------------------------------- integer linear algebra

namespace {

long checked(__int128 v) {
  if (v > INT64_MAX / 4 || v < -(INT64_MAX / 4)) throw ResourceLimitError("integer overflow in domain computation");
  return long(v);
}

using IMat = std::vector<std::vector<long>>;

// P * A * Q = diag(s_0, .., s_{r-1}, 0, ..) with unimodular P, Q.
struct IntDiagonal {
  IMat P, Q;
  std::vector<long> s;
  size_t rows = 0, cols = 0;
  size_t rank() const { return s.size(); }
};

IntDiagonal diagonalize(IMat A, size_t cols) {
  size_t m = A.size();
  IntDiagonal r;
  r.rows = m;
  r.cols = cols;
  r.P.assign(m, std::vector<long>(m, 0));
  r.Q.assign(cols, std::vector<long>(cols, 0));
  for (size_t i = 0; i < m; ++i) r.P[i][i] = 1;
  for (size_t j = 0; j < cols; ++j) r.Q[j][j] = 1;
  auto row_add = [&](size_t dst, size_t src, long q) {  // row dst -= q * row src
    for (size_t j = 0; j < cols; ++j) A[dst][j] = checked(__int128(A[dst][j]) - __int128(q) * A[src][j]);
    for (size_t j = 0; j < m; ++j) r.P[dst][j] = checked(__int128(r.P[dst][j]) - __int128(q) * r.P[src][j]);
  };
  auto col_add = [&](size_t dst, size_t src, long q) {  // col dst -= q * col src
    for (size_t i = 0; i < m; ++i) A[i][dst] = checked(__int128(A[i][dst]) - __int128(q) * A[i][src]);
    for (size_t i = 0; i < cols; ++i) r.Q[i][dst] = checked(__int128(r.Q[i][dst]) - __int128(q) * r.Q[i][src]);
  };
  auto row_swap = [&](size_t a, size_t b) {
    std::swap(A[a], A[b]);
    std::swap(r.P[a], r.P[b]);
  };
  auto col_swap = [&](size_t a, size_t b) {
    for (auto& row : A) std::swap(row[a], row[b]);
    for (auto& row : r.Q) std::swap(row[a], row[b]);
  };
  for (size_t t = 0; t < std::min(m, cols); ++t) {
    while (true) {
      long best = 0;
      size_t bi = 0, bj = 0;
      for (size_t i = t; i < m; ++i)
        for (size_t j = t; j < cols; ++j)
          if (A[i][j] != 0 && (best == 0 || std::labs(A[i][j]) < best)) {
            best = std::labs(A[i][j]);
            bi = i;
            bj = j;
          }
      if (best == 0) return r;
      row_swap(t, bi);
      col_swap(t, bj);
      bool clean = true;
      for (size_t i = t + 1; i < m; ++i)
        if (A[i][t]) {
          row_add(i, t, A[i][t] / A[t][t]);
          if (A[i][t]) clean = false;
        }
      for (size_t j = t + 1; j < cols; ++j)
        if (A[t][j]) {
          col_add(j, t, A[t][j] / A[t][t]);
          if (A[t][j]) clean = false;
        }
      if (clean) break;
    }
    if (A[t][t] < 0) {
      for (auto& v : A[t]) v = -v;
      for (auto& v : r.P[t]) v = -v;
    }
    r.s.push_back(A[t][t]);
  }
  return r;
}

std::vector<long> mat_vec(const IMat& M, const std::vector<long>& v) {
  std::vector<long> out(M.size(), 0);
  for (size_t i = 0; i < M.size(); ++i) {
    __int128 acc = 0;
    for (size_t j = 0; j < v.size(); ++j) acc += __int128(M[i][j]) * v[j];
    out[i] = checked(acc);
  }
  return out;
}

long bareiss_det(IMat a) {
  size_t n = a.size();
  if (n == 0) return 1;
  long sign = 1, prev = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      size_t piv = k + 1;
      while (piv < n && a[piv][k] == 0) ++piv;
      if (piv == n) return 0;
      std::swap(a[k], a[piv]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j)
        a[i][j] = checked((__int128(a[i][j]) * a[k][k] - __int128(a[i][k]) * a[k][j]) / prev);
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

// Edge equations m_left - m_right - k_curve: one row per edge, columns are regions then curve constants.
struct EdgeSystem {
  IMat A;
  std::vector<std::pair<int, int>> edge;  // (curve kind 0 alpha / 1 beta, curve index) per row
  std::vector<int> pos;                   // position of the edge's start point along its curve
};

EdgeSystem edge_system(const HeegaardDiagram& d) {
  EdgeSystem es;
  int F = int(d.regions.size()), m = d.curves();
  size_t cols = F + 2 * m;
  for (int kind = 0; kind < 2; ++kind)
    for (int c = 0; c < m; ++c) {
      const auto& curve = kind == 0 ? d.alpha[c] : d.beta[c];
      HalfEdge out = kind == 0 ? AlphaOut : BetaOut;
      for (size_t t = 0; t < curve.size(); ++t) {
        Dart fwd{curve[t], out};
        std::vector<long> row(cols, 0);
        row[d.region_of(fwd)] += 1;
        row[d.region_of(d.reverse(fwd))] -= 1;
        row[F + kind * m + c] -= 1;
        es.A.push_back(std::move(row));
        es.edge.push_back({kind, c});
        es.pos.push_back(int(t));
      }
    }
  return es;
}

// boundary data of a generator: alpha edges before its point count 1, beta edges -1
std::vector<long> boundary_vector(const HeegaardDiagram& d, const EdgeSystem& es, const Generator& x) {
  std::vector<int> on_beta(d.curves());
  for (int p : x) on_beta[d.points[p].beta] = p;
  std::vector<long> v(es.A.size(), 0);
  for (size_t r = 0; r < es.A.size(); ++r) {
    auto [kind, c] = es.edge[r];
    if (kind == 0)
      v[r] = es.pos[r] < d.alpha_pos[x[c]] ? 1 : 0;
    else
      v[r] = es.pos[r] < d.beta_pos[on_beta[c]] ? -1 : 0;
  }
  return v;
}

long count_in(const std::vector<int>& regions, const std::vector<long>& dom) {
  long s = 0;
  for (int r : regions) s += dom[r];
  return s;
}

}  // namespace

namespace {

void require_regions(const HeegaardDiagram& d) {
  if (!d.euler_ok)
    throw ConsistencyError("regions of the diagram do not match the Euler characteristic of the surface");
}

}  // namespace

int maslov_index(const HeegaardDiagram& d, const std::vector<long>& domain, const Generator& x, const Generator& y) {
  if (domain.size() != d.regions.size()) throw ConsistencyError("domain has the wrong number of regions");
  __int128 four = 0;
  for (size_t f = 0; f < domain.size(); ++f) four += __int128(domain[f]) * (4 * d.regions[f].euler - d.regions[f].corners());
  for (const Generator* g : {&x, &y})
    for (int p : *g)
      for (int h = 0; h < 4; ++h) four += domain[d.region_of({p, HalfEdge(h)})];
  if (four % 4 != 0) throw ConsistencyError("domain has a fractional index");
  return int(four / 4);
}

NicenessReport niceness_check(const HeegaardDiagram& d) {
  NicenessReport r;
  std::set<int> marked(d.z_region.begin(), d.z_region.end());
  marked.insert(d.w_region.begin(), d.w_region.end());
  for (int f = 0; f < int(d.regions.size()); ++f)
    if (!marked.count(f) && (!d.regions[f].is_disk() || (d.regions[f].corners() != 2 && d.regions[f].corners() != 4))) {
      r.nice = false;
      r.bad_regions.push_back(f);
    }
  return r;
}

namespace {

long intersection_det(const HeegaardDiagram& d) {
  IMat inter(d.basis, std::vector<long>(d.basis, 0));
  for (const auto& p : d.points)
    if (p.alpha < d.basis && p.beta < d.basis) inter[p.alpha][p.beta] += p.sign;
  return std::labs(bareiss_det(inter));
}

}  // namespace

GradingData compute_gradings(const HeegaardDiagram& d) {
  require_regions(d);
  if (intersection_det(d) == 0) throw ConsistencyError("intersection matrix is singular: not a rational homology sphere");
  GradingData gd;
  gd.generators = enumerate_generators(d);
  if (gd.generators.empty()) throw ConsistencyError("diagram has no generators");
  EdgeSystem es = edge_system(d);
  int F = int(d.regions.size());
  size_t cols = F + 2 * d.curves();
  IntDiagonal D = diagonalize(es.A, cols);
  size_t rk = D.rank();
  std::vector<std::vector<long>> key(gd.generators.size());
  std::map<std::vector<long>, int> classes;
  std::vector<int> cls(gd.generators.size());
  std::vector<std::vector<long>> transformed(gd.generators.size());
  for (size_t g = 0; g < gd.generators.size(); ++g) {
    auto v = mat_vec(D.P, boundary_vector(d, es, gd.generators[g]));
    std::vector<long> k(v.size());
    for (size_t i = 0; i < v.size(); ++i) k[i] = i < rk ? ((v[i] % D.s[i]) + D.s[i]) % D.s[i] : v[i];
    auto it = classes.emplace(k, int(classes.size())).first;
    cls[g] = it->second;
    transformed[g] = std::move(v);
  }
  // periodic domains must not shift the gradings
  for (size_t j = rk; j < cols; ++j) {
    std::vector<long> per(F);
    for (int f = 0; f < F; ++f) per[f] = D.Q[f][j];
    long nz = count_in(d.z_region, per), nw = count_in(d.w_region, per);
    long mu = maslov_index(d, per, gd.generators[0], gd.generators[0]);
    if (nz != nw || mu != 2 * nw) throw ConsistencyError("relative gradings are obstructed by a periodic domain");
  }
  long pinned_gen = -1;
  if (!d.distinguished.empty())
    for (size_t g = 0; g < gd.generators.size(); ++g)
      if (gd.generators[g] == d.distinguished) pinned_gen = long(g);
  std::vector<long> base(classes.size(), -1);
  if (pinned_gen >= 0) base[cls[pinned_gen]] = pinned_gen;
  for (size_t g = 0; g < gd.generators.size(); ++g)
    if (base[cls[g]] < 0) base[cls[g]] = long(g);
  // class labels in order of first appearance, the pinned class first
  std::vector<int> order(classes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    bool pa = pinned_gen >= 0 && a == cls[pinned_gen], pb = pinned_gen >= 0 && b == cls[pinned_gen];
    if (pa != pb) return pa;
    return base[a] < base[b];
  });
  std::vector<std::string> label(classes.size());
  for (size_t i = 0; i < order.size(); ++i) label[order[i]] = "s" + std::to_string(i);
  gd.grading.resize(gd.generators.size());
  gd.spinc.resize(gd.generators.size());
  for (size_t g = 0; g < gd.generators.size(); ++g) {
    long b0 = base[cls[g]];
    std::vector<long> u(cols, 0);
    for (size_t i = 0; i < rk; ++i) {
      long diff = transformed[g][i] - transformed[b0][i];
      u[i] = diff / D.s[i];
    }
    auto full = mat_vec(D.Q, u);
    std::vector<long> dom(full.begin(), full.begin() + F);
    long nz = count_in(d.z_region, dom), nw = count_in(d.w_region, dom);
    long mu = maslov_index(d, dom, gd.generators[b0], gd.generators[g]);
    Bigrading ref{};
    if (b0 == pinned_gen && d.pin) ref = *d.pin;
    gd.grading[g] = Bigrading{ref.maslov - Half(int(mu)) + Half(int(2 * nw)), ref.alexander - Half(int(nz - nw))};
    gd.spinc[g] = label[cls[g]];
  }
  gd.pinned_class = pinned_gen >= 0 ? gd.spinc[pinned_gen] : "s0";
  gd.absolute = pinned_gen >= 0 && d.pin.has_value();
  return gd;
}

// ---------------------------------------------------------------- admissibility

namespace {

// Phase one of the simplex method: is {x >= 0 : A x = b} nonempty? b must be nonnegative.
bool feasible(const std::vector<std::vector<double>>& A, const std::vector<double>& b) {
  size_t m = A.size(), n = m ? A[0].size() : 0;
  size_t W = n + m + 1;
  std::vector<std::vector<double>> T(m + 1, std::vector<double>(W, 0.0));
  std::vector<size_t> basis(m);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < n; ++j) T[i][j] = A[i][j];
    T[i][n + i] = 1;
    T[i][W - 1] = b[i];
    basis[i] = n + i;
  }
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < W; ++j)
      if (j < n || j == W - 1) T[m][j] -= T[i][j];
  const double eps = 1e-9;
  for (int iter = 0; iter < 100000; ++iter) {
    size_t enter = W;
    for (size_t j = 0; j + 1 < W; ++j)
      if (T[m][j] < -eps) {
        enter = j;
        break;
      }
    if (enter == W) break;
    size_t leave = m;
    double best = 0;
    for (size_t i = 0; i < m; ++i)
      if (T[i][enter] > eps) {
        double ratio = T[i][W - 1] / T[i][enter];
        if (leave == m || ratio < best - eps || (std::fabs(ratio - best) <= eps && basis[i] < basis[leave])) {
          best = ratio;
          leave = i;
        }
      }
    if (leave == m) break;
    double piv = T[leave][enter];
    for (auto& v : T[leave]) v /= piv;
    for (size_t i = 0; i <= m; ++i)
      if (i != leave && std::fabs(T[i][enter]) > 0) {
        double f = T[i][enter];
        for (size_t j = 0; j < W; ++j) T[i][j] -= f * T[leave][j];
      }
    basis[leave] = enter;
  }
  return -T[m][W - 1] < 1e-7;
}

}  // namespace

AdmissibilityReport admissibility_check(const HeegaardDiagram& d) {
  AdmissibilityReport r;
  r.h1_order = intersection_det(d);
  if (!d.euler_ok) {
    r.message = r.h1_order == 0 ? "intersection matrix is singular: not a rational homology sphere"
                                : "regions of the diagram do not match the Euler characteristic of the surface";
    return r;
  }

  EdgeSystem es = edge_system(d);
  int F = int(d.regions.size()), m = d.curves();
  size_t cols = F + 2 * m;
  IMat A = es.A;
  std::set<int> wset(d.w_region.begin(), d.w_region.end());
  for (int f : wset) {
    std::vector<long> row(cols, 0);
    row[f] = 1;
    A.push_back(row);
  }
  IntDiagonal D = diagonalize(A, cols);
  for (size_t j = D.rank(); j < cols; ++j) {
    std::vector<long> per(F);
    bool nonzero = false;
    for (int f = 0; f < F; ++f) {
      per[f] = D.Q[f][j];
      nonzero |= per[f] != 0;
    }
    if (nonzero) r.periodic_domains.push_back(per);
  }
  // a nonzero nonnegative periodic domain with n_w = 0 breaks admissibility
  std::vector<std::vector<double>> lp;
  std::vector<double> rhs;
  size_t vars = F + 4 * m;
  for (const auto& row : A) {
    std::vector<double> l(vars, 0.0);
    for (int f = 0; f < F; ++f) l[f] = double(row[f]);
    for (int c = 0; c < 2 * m; ++c) {
      l[F + c] = double(row[F + c]);
      l[F + 2 * m + c] = -double(row[F + c]);
    }
    lp.push_back(std::move(l));
    rhs.push_back(0.0);
  }
  std::vector<double> norm(vars, 0.0);
  for (int f = 0; f < F; ++f) norm[f] = 1.0;
  lp.push_back(norm);
  rhs.push_back(1.0);
  bool positive = feasible(lp, rhs);
  r.admissible = !positive && r.h1_order != 0;
  if (r.h1_order == 0)
    r.message = "intersection matrix is singular: not a rational homology sphere";
  else if (positive)
    r.message = "a nonnegative periodic domain avoids the w basepoints";
  else
    r.message = "admissible";
  return r;
}

// ---------------------------------------------------------------- differential

namespace {

struct DomainCandidate {
  Generator y;
  std::vector<int> regions;
  long nw = 0;
};

class DomainSearch {
 public:
  DomainSearch(const HeegaardDiagram& d) : d_(d) {
    zset_.insert(d.z_region.begin(), d.z_region.end());
  }

  std::vector<DomainCandidate> from(const Generator& x) {
    x_ = x;
    on_beta_.assign(d_.curves(), -1);
    for (int p : x) on_beta_[d_.points[p].beta] = p;
    out_.clear();
    seen_.clear();
    for (int a = 0; a < d_.curves(); ++a)
      for (HalfEdge h0 : {AlphaOut, AlphaIn}) walk_first(a, Dart{x[a], h0});
    return out_;
  }

 private:
  Dart straight(Dart cur) const { return Dart{d_.reverse(cur).point, cur.h}; }

  // follows a curve from `start` until reaching `target`; returns the darts used
  std::vector<Dart> follow(Dart start, int target) const {
    std::vector<Dart> path;
    Dart cur = start;
    for (size_t guard = 0; guard <= d_.points.size(); ++guard) {
      path.push_back(cur);
      if (d_.reverse(cur).point == target) return path;
      cur = straight(cur);
    }
    return {};
  }

  void walk_first(int a, Dart h0) {
    int x1 = x_[a];
    int b = d_.points[x1].beta;
    std::vector<Dart> leg1;
    Dart cur = h0;
    while (true) {
      leg1.push_back(cur);
      int v = d_.reverse(cur).point;
      if (v == x1) break;
      Dart turn = d_.cw_next(d_.reverse(cur));
      int bd = d_.points[v].beta;
      if (bd == b) {
        auto leg2 = follow(turn, x1);
        if (!leg2.empty()) {
          auto path = leg1;
          path.insert(path.end(), leg2.begin(), leg2.end());
          Generator y = x_;
          y[a] = v;
          close(h0, path, y);
        }
      } else {
        int x2 = on_beta_[bd];
        auto leg2 = follow(turn, x2);
        if (!leg2.empty()) {
          int c = d_.points[x2].alpha;
          Dart t2 = d_.cw_next(d_.reverse(leg2.back()));
          std::vector<Dart> leg3;
          Dart c3 = t2;
          while (true) {
            leg3.push_back(c3);
            int u = d_.reverse(c3).point;
            if (u == x2) break;
            if (d_.points[u].beta == b) {
              auto leg4 = follow(d_.cw_next(d_.reverse(c3)), x1);
              if (!leg4.empty()) {
                auto path = leg1;
                path.insert(path.end(), leg2.begin(), leg2.end());
                path.insert(path.end(), leg3.begin(), leg3.end());
                path.insert(path.end(), leg4.begin(), leg4.end());
                Generator y = x_;
                y[a] = v;
                y[c] = u;
                close(h0, path, y);
              }
            }
            c3 = straight(c3);
          }
        }
      }
      cur = straight(cur);
    }
  }

  void close(Dart h0, const std::vector<Dart>& path, const Generator& y) {
    if (!(d_.cw_next(d_.reverse(path.back())) == h0)) return;
    std::set<Dart> pathset(path.begin(), path.end());
    if (pathset.size() != path.size()) return;
    std::set<int> in, out;
    for (const Dart& e : path) {
      in.insert(d_.region_of(e));
      out.insert(d_.region_of(d_.reverse(e)));
    }
    for (int f : in)
      if (out.count(f)) return;
    std::vector<int> stack(in.begin(), in.end());
    std::set<int> dom = in;
    while (!stack.empty()) {
      int f = stack.back();
      stack.pop_back();
      for (const Dart& e : d_.regions[f].boundary) {
        if (pathset.count(e)) continue;
        int g = d_.region_of(d_.reverse(e));
        if (out.count(g)) return;
        if (dom.insert(g).second) stack.push_back(g);
      }
    }
    for (int f : dom)
      if (zset_.count(f)) return;
    std::set<int> path_points;
    for (const Dart& e : path) path_points.insert(e.point);
    long edges_in = 0, verts_in = 0;
    for (int p = 0; p < int(d_.points.size()); ++p) {
      int sectors = 0;
      for (int h = 0; h < 4; ++h) {
        Dart e{p, HalfEdge(h)};
        bool l = dom.count(d_.region_of(e)) > 0;
        sectors += l;
        if (l && dom.count(d_.region_of(d_.reverse(e))) && !pathset.count(e) && !pathset.count(d_.reverse(e)))
          ++edges_in;
      }
      if (sectors == 4 && !path_points.count(p)) {
        ++verts_in;
        if (std::find(x_.begin(), x_.end(), p) != x_.end()) return;
      }
    }
    long chi = 0;
    for (int f : dom) chi += d_.regions[f].euler;
    if (chi - edges_in / 2 + verts_in != 1) return;
    std::vector<long> mult(d_.regions.size(), 0);
    for (int f : dom) mult[f] = 1;
    if (maslov_index(d_, mult, x_, y) != 1) return;
    std::vector<int> regs(dom.begin(), dom.end());
    if (!seen_.insert({y, regs}).second) return;
    DomainCandidate c;
    c.y = y;
    c.regions = regs;
    c.nw = count_in(d_.w_region, mult);
    out_.push_back(std::move(c));
  }

  const HeegaardDiagram& d_;
  std::set<int> zset_;
  Generator x_;
  std::vector<int> on_beta_;
  std::vector<DomainCandidate> out_;
  std::set<std::pair<Generator, std::vector<int>>> seen_;
};

FreeBigradedComplex assemble(const HeegaardDiagram& d, const GradingData& gd, const std::optional<std::string>& spinc) {
  FreeBigradedComplex c;
  std::map<Generator, uint32_t> index;
  for (size_t g = 0; g < gd.generators.size(); ++g) {
    if (spinc && gd.spinc[g] != *spinc) continue;
    index[gd.generators[g]] =
        c.add_generator(GradedGenerator{generator_id(d, gd.generators[g]), gd.grading[g], gd.spinc[g]});
  }
  DomainSearch search(d);
  for (const auto& [x, xi] : index)
    for (const auto& dc : search.from(x)) {
      auto it = index.find(dc.y);
      if (it == index.end()) throw ConsistencyError("domain leaves its Spin^c class");
      c.add_entry(it->second, xi, UPoly::monomial(uint32_t(dc.nw)));
    }
  return c;
}

}  // namespace

FreeBigradedComplex differential_nice(const HeegaardDiagram& d, const std::optional<std::string>& spinc) {
  auto nice = niceness_check(d);
  if (!nice.nice) throw ConsistencyError("diagram is not nice; differential unavailable");
  auto adm = admissibility_check(d);
  if (adm.h1_order == 0) throw ConsistencyError(adm.message);
  if (!adm.admissible) throw ConsistencyError("diagram is not admissible: " + adm.message);
  return assemble(d, compute_gradings(d), spinc);
}

DiagramHomology diagram_homology(const HeegaardDiagram& d) {
  GradingData gd = compute_gradings(d);
  auto nice = niceness_check(d);
  if (!nice.nice) throw ConsistencyError("diagram is not nice; differential unavailable");
  auto adm = admissibility_check(d);
  if (!adm.admissible) throw ConsistencyError(adm.message);
  FreeBigradedComplex c = assemble(d, gd, gd.pinned_class);
  DiagramHomology h;
  h.generators = gd.generators.size();
  h.spinc_classes = int(std::set<std::string>(gd.spinc.begin(), gd.spinc.end()).size());
  h.absolute = gd.absolute;
  h.homology = homology(c);
  if (!d.distinguished.empty()) {
    long i = c.find(generator_id(d, d.distinguished));
    if (i < 0) throw ConsistencyError("distinguished generator missing from its class");
    h.invariant = class_position(c, Chain{{uint32_t(i), UPoly::one()}});
  }
  return h;
}

// ---------------------------------------------------------------- stabilization map

StabilizationMap stabilization_map(const HeegaardDiagram& d, const HeegaardDiagram& dp, int new_arc) {
  if (dp.curves() != d.curves() + 1 || new_arc < 0 || new_arc >= dp.curves())
    throw ConsistencyError("diagrams do not differ by one stabilization");
  auto remap = [&](int i) { return i >= new_arc ? i + 1 : i; };
  // k-th point of alpha_i on beta_j, counted from the start of alpha_i
  auto occurrence = [](const HeegaardDiagram& h, int p) {
    int k = 0;
    const Point& q = h.points[p];
    for (int r : h.alpha[q.alpha]) {
      if (r == p) break;
      if (h.points[r].beta == q.beta) ++k;
    }
    return k;
  };
  std::map<std::tuple<int, int, int>, int> plus_points;
  for (int p = 0; p < int(dp.points.size()); ++p)
    plus_points[{dp.points[p].alpha, dp.points[p].beta, occurrence(dp, p)}] = p;
  std::vector<int> to_plus(d.points.size(), -1);
  for (int p = 0; p < int(d.points.size()); ++p) {
    auto it = plus_points.find({remap(d.points[p].alpha), remap(d.points[p].beta), occurrence(d, p)});
    if (it == plus_points.end()) throw ConsistencyError("stabilized diagram lost an intersection point");
    to_plus[p] = it->second;
  }
  if (dp.distinguished.empty()) throw ConsistencyError("stabilized diagram has no distinguished generator");
  int fresh = dp.distinguished[new_arc];
  auto image = [&](const Generator& x) {
    Generator y(dp.curves());
    for (int i = 0; i < d.curves(); ++i) y[remap(i)] = to_plus[x[i]];
    y[new_arc] = fresh;
    return y;
  };
  StabilizationMap m;
  auto gens = enumerate_generators(d);
  std::set<Generator> targets;
  for (const auto& x : gens) {
    m.pairs.push_back({x, image(x)});
    targets.insert(image(x));
  }
  auto plus_gens = enumerate_generators(dp);
  if (plus_gens.size() != gens.size() || std::set<Generator>(plus_gens.begin(), plus_gens.end()) != targets)
    throw ConsistencyError("gamma-disjointness precondition unmet: the generator map is not a bijection");
  if (!d.distinguished.empty()) m.invariant_maps = image(d.distinguished) == dp.distinguished;
  if (niceness_check(d).nice && niceness_check(dp).nice) {
    auto c = differential_nice(d);
    auto cp = differential_nice(dp);
    std::map<std::string, std::string> id_map;
    for (const auto& [x, y] : m.pairs) id_map[generator_id(d, x)] = generator_id(dp, y);
    m.chain_map = true;
    for (uint32_t s = 0; s < c.size(); ++s) {
      long sp = cp.find(id_map[c.generator(s).id]);
      std::map<std::string, UPoly> lhs, rhs;
      for (const auto& [t, coeff] : c.boundary(s)) rhs[id_map[c.generator(t).id]] = coeff;
      for (const auto& [t, coeff] : cp.boundary(uint32_t(sp))) lhs[cp.generator(t).id] = coeff;
      if (lhs != rhs) m.chain_map = false;
    }
  }
  return m;
}

// ---------------------------------------------------------------- text format

namespace {

using RegionWord = std::pair<int, std::vector<std::string>>;  // Euler characteristic, cycles joined by "|"

RegionWord canonical_region(std::vector<std::vector<std::string>> cycles, int euler) {
  for (auto& w : cycles) {
    auto best = w;
    for (size_t k = 1; k < w.size(); ++k) {
      std::vector<std::string> rot(w.begin() + k, w.end());
      rot.insert(rot.end(), w.begin(), w.begin() + k);
      if (rot < best) best = rot;
    }
    w = best;
  }
  std::sort(cycles.begin(), cycles.end());
  RegionWord out{euler, {}};
  for (size_t c = 0; c < cycles.size(); ++c) {
    if (c) out.second.push_back("|");
    out.second.insert(out.second.end(), cycles[c].begin(), cycles[c].end());
  }
  return out;
}

std::vector<RegionWord> region_words(const HeegaardDiagram& d) {
  std::vector<RegionWord> out;
  for (const auto& r : d.regions) {
    std::vector<std::vector<std::string>> cycles;
    for (size_t c = 0; c < r.cycles.size(); ++c) {
      size_t end = c + 1 < r.cycles.size() ? r.cycles[c + 1] : r.boundary.size();
      std::vector<std::string> w;
      for (size_t k = r.cycles[c]; k < end; ++k)
        w.push_back(d.points[r.boundary[k].point].id + "@" + half_edge_name(r.boundary[k].h));
      cycles.push_back(w);
    }
    out.push_back(canonical_region(cycles, r.euler));
  }
  std::sort(out.begin(), out.end(), [](const RegionWord& x, const RegionWord& y) { return x.second < y.second; });
  return out;
}

}  // namespace

void write_diagram(std::ostream& os, const HeegaardDiagram& d) {
  os << "heegaard genus " << d.genus << " components " << d.components << " basis " << d.basis << '\n';
  for (const auto& p : d.points)
    os << "point " << p.id << ' ' << p.alpha + 1 << ' ' << p.beta + 1 << ' ' << (p.sign > 0 ? '+' : '-') << '\n';
  for (size_t i = 0; i < d.alpha.size(); ++i) {
    os << "alpha " << i + 1 << ":";
    for (int p : d.alpha[i]) os << ' ' << d.points[p].id;
    os << '\n';
  }
  for (size_t j = 0; j < d.beta.size(); ++j) {
    os << "beta " << j + 1 << ":";
    for (int p : d.beta[j]) os << ' ' << d.points[p].id;
    os << '\n';
  }
  auto words = region_words(d);
  for (size_t k = 0; k < words.size(); ++k) {
    os << "region " << k + 1;
    int cycles = int(std::count(words[k].second.begin(), words[k].second.end(), "|")) + 1;
    if (words[k].first != 2 - cycles) os << " euler " << words[k].first;
    os << ":";
    for (const auto& s : words[k].second) os << ' ' << s;
    os << '\n';
  }
  for (const auto& b : d.z) os << "z " << d.points[b.point].id << ' ' << half_edge_name(b.h) << '\n';
  for (const auto& b : d.w) os << "w " << d.points[b.point].id << ' ' << half_edge_name(b.h) << '\n';
  if (!d.distinguished.empty()) {
    os << "distinguished:";
    for (int p : d.distinguished) os << ' ' << d.points[p].id;
    os << '\n';
  }
  if (d.pin) os << "pin " << d.pin->maslov.str() << ' ' << d.pin->alexander.str() << '\n';
}

std::string to_string(const HeegaardDiagram& d) {
  std::ostringstream os;
  write_diagram(os, d);
  return os.str();
}

HeegaardDiagram read_diagram(std::istream& is) {
  auto lines = tokenize_lines(is, ":");
  HeegaardDiagram d;
  std::map<std::string, int> pid;
  bool header = false;
  struct RegionLine {
    int line;
    std::optional<int> euler;
    std::vector<std::vector<Token>> cycles;
  };
  std::vector<RegionLine> regions;
  std::map<int, std::vector<int>> alpha, beta;
  auto half = [](const Token& t, int line) {
    for (int h = 0; h < 4; ++h)
      if (half_edge_name(HalfEdge(h)) == t.text) return HalfEdge(h);
    throw ParseError(line, t.col, "expected ao, bo, ai or bi");
  };
  auto point = [&](const Token& t, int line) {
    auto it = pid.find(t.text);
    if (it == pid.end()) throw ParseError(line, t.col, "unknown point " + t.text);
    return it->second;
  };
  for (const auto& ln : lines) {
    const auto& kw = ln.tokens[0].text;
    auto need = [&](size_t k) {
      if (ln.tokens.size() != k) throw ParseError(ln.number, ln.tokens[0].col, "wrong number of fields for " + kw);
    };
    if (kw == "heegaard") {
      need(7);
      if (ln.tokens[1].text != "genus" || ln.tokens[3].text != "components" || ln.tokens[5].text != "basis")
        throw ParseError(ln.number, 1, "expected 'heegaard genus <g> components <n> basis <b>'");
      d.genus = int(parse_long(ln.tokens[2], ln.number));
      d.components = int(parse_long(ln.tokens[4], ln.number));
      d.basis = int(parse_long(ln.tokens[6], ln.number));
      header = true;
    } else if (kw == "point") {
      need(5);
      Point p;
      p.id = ln.tokens[1].text;
      if (pid.count(p.id)) throw ParseError(ln.number, ln.tokens[1].col, "duplicate point");
      p.alpha = int(parse_long(ln.tokens[2], ln.number)) - 1;
      p.beta = int(parse_long(ln.tokens[3], ln.number)) - 1;
      if (ln.tokens[4].text != "+" && ln.tokens[4].text != "-")
        throw ParseError(ln.number, ln.tokens[4].col, "sign must be + or -");
      p.sign = ln.tokens[4].text == "+" ? 1 : -1;
      pid[p.id] = int(d.points.size());
      d.points.push_back(p);
    } else if (kw == "alpha" || kw == "beta") {
      if (ln.tokens.size() < 3 || ln.tokens[2].text != ":")
        throw ParseError(ln.number, ln.tokens[0].col, "expected '" + kw + " <index>: <points>'");
      int i = int(parse_long(ln.tokens[1], ln.number)) - 1;
      auto& target = kw == "alpha" ? alpha : beta;
      if (i < 0 || target.count(i)) throw ParseError(ln.number, ln.tokens[1].col, "bad or duplicate curve index");
      auto& list = target[i];
      for (size_t k = 3; k < ln.tokens.size(); ++k) list.push_back(point(ln.tokens[k], ln.number));
    } else if (kw == "region") {
      RegionLine r{ln.number, std::nullopt, {{}}};
      size_t k = 2;
      if (ln.tokens.size() > 4 && ln.tokens[2].text == "euler") {
        r.euler = int(parse_long(ln.tokens[3], ln.number));
        k = 4;
      }
      if (ln.tokens.size() <= k + 1 || ln.tokens[k].text != ":")
        throw ParseError(ln.number, 1, "expected 'region <k> [euler <e>]: ...'");
      for (++k; k < ln.tokens.size(); ++k) {
        if (ln.tokens[k].text == "|")
          r.cycles.emplace_back();
        else
          r.cycles.back().push_back(ln.tokens[k]);
      }
      for (const auto& c : r.cycles)
        if (c.empty()) throw ParseError(ln.number, 1, "empty boundary cycle");
      regions.push_back(std::move(r));
    } else if (kw == "z" || kw == "w") {
      need(3);
      Basepoint b{point(ln.tokens[1], ln.number), half(ln.tokens[2], ln.number)};
      (kw == "z" ? d.z : d.w).push_back(b);
    } else if (kw == "distinguished") {
      if (ln.tokens.size() < 2 || ln.tokens[1].text != ":") throw ParseError(ln.number, 1, "expected 'distinguished: ...'");
      for (size_t k = 2; k < ln.tokens.size(); ++k) d.distinguished.push_back(point(ln.tokens[k], ln.number));
    } else if (kw == "pin") {
      need(3);
      try {
        d.pin = Bigrading{Half::parse(ln.tokens[1].text), Half::parse(ln.tokens[2].text)};
      } catch (const std::exception&) {
        throw ParseError(ln.number, ln.tokens[1].col, "bad grading");
      }
    } else {
      throw ParseError(ln.number, ln.tokens[0].col, "unknown keyword '" + kw + "'");
    }
  }
  if (!header) throw ParseError(1, 1, "missing heegaard header");
  int m = int(alpha.size());
  if (int(beta.size()) != m) throw ParseError(1, 1, "alpha and beta curve counts differ");
  for (int i = 0; i < m; ++i) {
    if (!alpha.count(i) || !beta.count(i)) throw ParseError(1, 1, "curve indices must be 1..d");
    d.alpha.push_back(alpha[i]);
    d.beta.push_back(beta[i]);
  }
  auto dart = [&](const Token& t, int line) {
    auto at = t.text.find('@');
    if (at == std::string::npos) throw ParseError(line, t.col, "expected <point>@<half-edge>");
    Token pt{t.text.substr(0, at), t.col}, h{t.text.substr(at + 1), t.col + int(at) + 1};
    return Dart{point(pt, line), half(h, line)};
  };
  for (const auto& r : regions) {
    Dart first = dart(r.cycles[0][0], r.line);
    for (size_t c = 1; c < r.cycles.size(); ++c) d.joins.push_back({dart(r.cycles[c][0], r.line), first});
    if (r.euler && *r.euler != 2 - int(r.cycles.size())) d.region_euler[first] = *r.euler;
  }
  try {
    index_regions(d);
  } catch (const ConsistencyError& e) {
    throw ParseError(1, 1, e.what());
  }
  if (!regions.empty()) {
    auto words = region_words(d);
    std::vector<RegionWord> given;
    for (const auto& r : regions) {
      std::vector<std::vector<std::string>> cycles;
      for (const auto& c : r.cycles) {
        cycles.emplace_back();
        for (const auto& t : c) cycles.back().push_back(t.text);
      }
      given.push_back(canonical_region(cycles, r.euler.value_or(2 - int(cycles.size()))));
    }
    std::sort(given.begin(), given.end(), [](const RegionWord& x, const RegionWord& y) { return x.second < y.second; });
    if (given != words) throw ParseError(regions.front().line, 1, "region lines do not match the curves");
  }
  return d;
}

HeegaardDiagram parse_diagram(const std::string& text) {
  std::istringstream is(text);
  return read_diagram(is);
}

}  // namespace lf::hd
