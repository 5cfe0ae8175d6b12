#include <algorithm>
#include <functional>

#include "grid_internal.hpp"
#include "lf/errors.hpp"
#include "lf/grid.hpp"

namespace lf::grid {

using detail::mod;

int ClassicalInvariants::tb_i(int i) const {
  int s = tb_component[i];
  for (int j = 0; j < n; ++j)
    if (j != i) s += linking[i][j];
  return s;
}

int ClassicalInvariants::tb() const {
  int s = 0;
  for (int i = 0; i < n; ++i) s += tb_i(i);
  return s;
}

int ClassicalInvariants::rot() const {
  int s = 0;
  for (int r : rot_component) s += r;
  return s;
}

// Front: rotate the grid 45 degrees clockwise. Vertical segments run X -> O, horizontal
// ones O -> X; in the front the horizontal strand is in front, so the front is the mirror
// of the usual grid link diagram.
ClassicalInvariants classical_invariants(const GridDiagram& g) {
  auto rep = validate_grid(g);
  if (!rep.ok) throw ConsistencyError("invalid grid: " + rep.errors.front());
  const int N = g.N, n = rep.components;
  std::vector<int> row_of_o(N), row_of_x(N);
  for (int r = 0; r < N; ++r) row_of_o[g.O[r]] = r, row_of_x[g.X[r]] = r;

  ClassicalInvariants ci;
  ci.n = n;
  ci.tb_component.assign(n, 0);
  ci.rot_component.assign(n, 0);
  ci.linking.assign(n, std::vector<int>(n, 0));
  std::vector<int> writhe2(n, 0), cusps(n, 0), down(n, 0), up(n, 0);
  std::vector<std::vector<int>> cross(n, std::vector<int>(n, 0));

  // column c carries the component of the O in that column
  auto comp_of_col = [&](int c) { return rep.row_component[row_of_o[c]]; };

  for (int r = 0; r < N; ++r) {
    int comp = rep.row_component[r];
    for (Mark m : {Mark::O, Mark::X}) {
      int col = m == Mark::O ? g.O[r] : g.X[r];
      int partner_col = m == Mark::O ? g.X[r] : g.O[r];
      int partner_row = m == Mark::O ? row_of_x[col] : row_of_o[col];
      int hd = partner_col > col ? 1 : -1;
      int vd = partner_row > r ? 1 : -1;
      if (hd == vd) {
        ++cusps[comp];
        bool left = hd == 1;
        bool is_down = left ? (m == Mark::O) : (m == Mark::X);
        (is_down ? down : up)[comp]++;
      }
    }
  }
  for (int c = 0; c < N; ++c) {
    int rx = row_of_x[c], ro = row_of_o[c];
    int vlo = std::min(rx, ro), vhi = std::max(rx, ro);
    int sv = ro > rx ? 1 : -1;
    int cv = comp_of_col(c);
    for (int r = vlo + 1; r < vhi; ++r) {
      int hlo = std::min(g.O[r], g.X[r]), hhi = std::max(g.O[r], g.X[r]);
      if (!(hlo < c && c < hhi)) continue;
      int sh = g.X[r] > g.O[r] ? 1 : -1;
      int ch = rep.row_component[r];
      int sign = sv * sh;
      if (cv == ch)
        writhe2[cv] += sign;
      else
        cross[cv][ch] += sign, cross[ch][cv] += sign;
    }
  }
  for (int i = 0; i < n; ++i) {
    ci.tb_component[i] = writhe2[i] - cusps[i] / 2;
    ci.rot_component[i] = (down[i] - up[i]) / 2;
    for (int j = 0; j < n; ++j)
      if (i != j) ci.linking[i][j] = cross[i][j] / 2;
  }
  return ci;
}

GridDiagram commute_columns(const GridDiagram& g, int c) {
  const int N = g.N;
  int d = (c + 1) % N;
  std::vector<int> row_of_o(N), row_of_x(N);
  for (int r = 0; r < N; ++r) row_of_o[g.O[r]] = r, row_of_x[g.X[r]] = r;
  auto span = [&](int col) { return std::minmax(row_of_o[col], row_of_x[col]); };
  auto [a0, a1] = span(c);
  auto [b0, b1] = span(d);
  bool disjoint = a1 < b0 || b1 < a0;
  bool nested = (a0 < b0 && b1 < a1) || (b0 < a0 && a1 < b1);
  if (!disjoint && !nested) throw ConsistencyError("columns " + std::to_string(c) + " and " + std::to_string(d) + " interleave");
  GridDiagram h = g;
  for (auto* v : {&h.O, &h.X})
    for (int& x : *v) {
      if (x == c)
        x = d;
      else if (x == d)
        x = c;
    }
  return h;
}

static GridDiagram transpose(const GridDiagram& g) {
  GridDiagram t{g.N, std::vector<int>(g.N), std::vector<int>(g.N)};
  for (int r = 0; r < g.N; ++r) t.O[g.O[r]] = r, t.X[g.X[r]] = r;
  return t;
}

GridDiagram commute_rows(const GridDiagram& g, int r) { return transpose(commute_columns(transpose(g), r)); }

GridDiagram cyclic_shift(const GridDiagram& g, int dcol, int drow) {
  GridDiagram h{g.N, std::vector<int>(g.N), std::vector<int>(g.N)};
  for (int r = 0; r < g.N; ++r) {
    int nr = mod(r + drow, g.N);
    h.O[nr] = mod(g.O[r] + dcol, g.N);
    h.X[nr] = mod(g.X[r] + dcol, g.N);
  }
  return h;
}

GridDiagram mirror_lr(const GridDiagram& g) {
  GridDiagram h = g;
  for (auto* v : {&h.O, &h.X})
    for (int& x : *v) x = g.N - 1 - x;
  return h;
}

GridDiagram stabilize(const GridDiagram& g, Mark kind, int row, Quadrant empty) {
  const int N = g.N;
  if (row < 0 || row >= N) throw ConsistencyError("stabilization row out of range");
  const std::vector<int>& same = kind == Mark::O ? g.O : g.X;
  const std::vector<int>& other = kind == Mark::O ? g.X : g.O;
  const int c = same[row];
  // block cells: (dc, dr) with dc, dr in {0,1}; the other-type marking sits opposite the empty cell
  int ec = (empty == Quadrant::NE || empty == Quadrant::SE) ? 1 : 0;
  int er = (empty == Quadrant::NW || empty == Quadrant::NE) ? 1 : 0;
  int oc = 1 - ec, orr = 1 - er;  // other-type cell
  int keep_row = er;               // row of the block without the other-type marking
  int keep_col = ec;
  auto new_col = [&](int j) { return j < c ? j : j + 1; };
  auto new_row = [&](int i) { return i < row ? i : i + 1; };
  std::vector<int> S(N + 1, -1), T(N + 1, -1);  // same-kind and other-kind columns by new row
  for (int r = 0; r < N; ++r) {
    if (r == row) continue;
    int nr = new_row(r);
    S[nr] = same[r] == c ? c + keep_col : new_col(same[r]);
    T[nr] = other[r] == c ? c + keep_col : new_col(other[r]);
  }
  // the old row's partner moves to the block row that lacks the other-type marking
  T[row + keep_row] = new_col(other[row]);
  // same-kind markings on the diagonal avoiding the empty and other-type cells
  S[row + orr] = c + ec;
  S[row + er] = c + oc;
  T[row + orr] = c + oc;
  GridDiagram h{N + 1, kind == Mark::O ? S : T, kind == Mark::O ? T : S};
  auto rep = validate_grid(h);
  if (!rep.ok) throw std::logic_error("stabilization produced an invalid grid: " + rep.errors.front());
  return h;
}

GridDiagram legendrian_stabilize(const GridDiagram& g, int sign, int row) {
  // X markings with the empty cell at NE give rot+1, at SW give rot-1
  Quadrant q = sign > 0 ? Quadrant::NE : Quadrant::SW;
  GridDiagram h = stabilize(g, Mark::X, row, q);
  auto before = classical_invariants(g), after = classical_invariants(h);
  if (after.tb() != before.tb() - 1 || after.rot() != before.rot() + (sign > 0 ? 1 : -1))
    throw std::logic_error("Legendrian stabilization changed tb/rot unexpectedly");
  return h;
}

GridDiagram disjoint_union(const GridDiagram& a, const GridDiagram& b) {
  GridDiagram h{a.N + b.N, {}, {}};
  h.O = a.O;
  h.X = a.X;
  for (int r = 0; r < b.N; ++r) {
    h.O.push_back(b.O[r] + a.N);
    h.X.push_back(b.X[r] + a.N);
  }
  return h;
}

GridDiagram connected_sum(const GridDiagram& a, const GridDiagram& b, int ca, int cb) {
  auto ra = validate_grid(a), rb = validate_grid(b);
  if (!ra.ok || !rb.ok) throw ConsistencyError("invalid grid in connected sum");
  if (ca < 0 || ca >= ra.components || cb < 0 || cb >= rb.components)
    throw ConsistencyError("connected sum on a nonexistent component");
  // move an X of component ca to the bottom-right cell of a
  int xr = -1;
  for (int r = 0; r < a.N && xr < 0; ++r)
    if (ra.row_component[r] == ca) xr = r;
  GridDiagram A = cyclic_shift(a, a.N - 1 - a.X[xr], -xr);
  // and an O of component cb to the top-left cell of b
  int orow = -1;
  for (int r = 0; r < b.N && orow < 0; ++r)
    if (rb.row_component[r] == cb) orow = r;
  GridDiagram B = cyclic_shift(b, -b.O[orow], b.N - 1 - orow);
  // b occupies rows [0, nb) and columns [na, na+nb); a occupies rows [nb, nb+na) and columns [0, na).
  // Rows nb-1, nb merge and columns na-1, na merge; the two corner markings disappear.
  const int na = A.N, nb = B.N, M = na + nb - 1;
  GridDiagram h{M, std::vector<int>(M, -1), std::vector<int>(M, -1)};
  auto col_b = [&](int j) { return na + j - 1; };
  for (int r = 0; r < nb; ++r) {
    h.O[r] = r == nb - 1 ? -1 : col_b(B.O[r]);
    h.X[r] = col_b(B.X[r]);
  }
  for (int r = 0; r < na; ++r) {
    int nr = nb - 1 + r;
    if (r == 0) {
      h.O[nr] = A.O[0];
    } else {
      h.O[nr] = A.O[r];
      h.X[nr] = A.X[r];
    }
  }
  auto rep = validate_grid(h);
  if (!rep.ok) throw std::logic_error("connected sum produced an invalid grid: " + rep.errors.front());
  return h;
}

}  // namespace lf::grid
