#include "lf/grid.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <thread>

#include "f2_sparse.hpp"
#include "grid_internal.hpp"
#include "lf/errors.hpp"
#include "lf/textio.hpp"

namespace lf::grid {

namespace detail {
std::vector<uint64_t> factorials(int N) {
  std::vector<uint64_t> f(N + 1, 1);
  for (int i = 1; i <= N; ++i) f[i] = f[i - 1] * uint64_t(i);
  return f;
}
}  // namespace detail

using detail::mod;

GridReport validate_grid(const GridDiagram& g) {
  GridReport r;
  if (g.N < 1) r.errors.push_back("grid size must be positive");
  if (int(g.O.size()) != g.N) r.errors.push_back("O has " + std::to_string(g.O.size()) + " entries");
  if (int(g.X.size()) != g.N) r.errors.push_back("X has " + std::to_string(g.X.size()) + " entries");
  if (!r.errors.empty()) return r;
  for (const auto* v : {&g.O, &g.X}) {
    const char* name = v == &g.O ? "O" : "X";
    std::vector<int> seen(g.N, -1);
    for (int i = 0; i < g.N; ++i) {
      int c = (*v)[i];
      if (c < 0 || c >= g.N) {
        r.errors.push_back(std::string(name) + " column " + std::to_string(c) + " out of range in row " + std::to_string(i));
        continue;
      }
      if (seen[c] >= 0)
        r.errors.push_back(std::string(name) + " column " + std::to_string(c) + " used in rows " +
                           std::to_string(seen[c]) + " and " + std::to_string(i));
      seen[c] = i;
    }
  }
  for (int i = 0; i < g.N && r.errors.empty(); ++i)
    if (g.O[i] == g.X[i]) r.errors.push_back("O and X share the cell in row " + std::to_string(i));
  if (!r.errors.empty()) return r;
  // O -> X along a row, then X -> O along the column
  std::vector<int> row_of_o(g.N);
  for (int i = 0; i < g.N; ++i) row_of_o[g.O[i]] = i;
  r.row_component.assign(g.N, -1);
  for (int start = 0; start < g.N; ++start) {
    if (r.row_component[start] >= 0) continue;
    int row = start;
    while (r.row_component[row] < 0) {
      r.row_component[row] = r.components;
      row = row_of_o[g.X[row]];
    }
    ++r.components;
  }
  r.ok = true;
  return r;
}

int component_count(const GridDiagram& g) {
  auto r = validate_grid(g);
  if (!r.ok) throw ConsistencyError("invalid grid: " + r.errors.front());
  return r.components;
}

GridDiagram read_grid(std::istream& is) {
  auto lines = tokenize_lines(is, ":");
  GridDiagram g;
  bool haveN = false, haveO = false, haveX = false;
  for (const auto& ln : lines) {
    const auto& t = ln.tokens;
    const std::string& key = t[0].text;
    if (key == "N") {
      if (t.size() != 2) throw ParseError(ln.number, t[0].col, "expected 'N <int>'");
      long n = parse_long(t[1], ln.number);
      if (n < 1 || n > 16) throw ParseError(ln.number, t[1].col, "grid size must be between 1 and 16");
      g.N = int(n);
      haveN = true;
    } else if (key == "O" || key == "X") {
      if (!haveN) throw ParseError(ln.number, t[0].col, "N must come first");
      if (t.size() < 2 || t[1].text != ":") throw ParseError(ln.number, t[0].col + 1, "expected ':' after " + key);
      std::vector<int> v;
      for (size_t i = 2; i < t.size(); ++i) v.push_back(int(parse_long(t[i], ln.number)));
      if (int(v.size()) != g.N)
        throw ParseError(ln.number, t[0].col, key + " needs " + std::to_string(g.N) + " entries, got " + std::to_string(v.size()));
      for (size_t i = 0; i < v.size(); ++i)
        if (v[i] < 0 || v[i] >= g.N) throw ParseError(ln.number, t[i + 2].col, "column out of range");
      (key == "O" ? g.O : g.X) = v;
      (key == "O" ? haveO : haveX) = true;
    } else {
      throw ParseError(ln.number, t[0].col, "unknown key '" + key + "'");
    }
  }
  if (!haveN || !haveO || !haveX) throw ParseError(lines.empty() ? 1 : lines.back().number, 1, "grid needs N, O and X lines");
  auto rep = validate_grid(g);
  if (!rep.ok) throw ParseError(1, 1, rep.errors.front());
  return g;
}

GridDiagram parse_grid(const std::string& text) {
  std::istringstream is(text);
  return read_grid(is);
}

void write_grid(std::ostream& os, const GridDiagram& g) {
  os << "N " << g.N << "\nO:";
  for (int c : g.O) os << " " << c;
  os << "\nX:";
  for (int c : g.X) os << " " << c;
  os << "\n";
}

namespace {

// I(P,Q) on doubled coordinates: pairs with p strictly south-west of q
struct Pt {
  int x, y;
};

long count_sw(const std::vector<Pt>& p, const std::vector<Pt>& q) {
  long n = 0;
  for (const auto& a : p)
    for (const auto& b : q)
      if (a.x < b.x && a.y < b.y) ++n;
  return n;
}

std::vector<Pt> marks(const std::vector<int>& cols) {
  std::vector<Pt> v;
  for (int r = 0; r < int(cols.size()); ++r) v.push_back({2 * cols[r] + 1, 2 * r + 1});
  return v;
}

struct GradingCtx {
  std::vector<Pt> O, X;
  long oo, xx;
  int N, n;
  explicit GradingCtx(const GridDiagram& g) : O(marks(g.O)), X(marks(g.X)), N(g.N), n(component_count(g)) {
    oo = count_sw(O, O);
    xx = count_sw(X, X);
  }
  Bigrading operator()(const GridGenerator& x) const {
    std::vector<Pt> p(N);
    for (int r = 0; r < N; ++r) p[r] = {2 * x[r], 2 * r};
    long pp = count_sw(p, p);
    long mo = pp - count_sw(p, O) - count_sw(O, p) + oo + 1;
    long mx = pp - count_sw(p, X) - count_sw(X, p) + xx + 1;
    return {Half(int(mo)), Half::from_twice(mo - mx - (N - n))};
  }
};

}  // namespace

Bigrading gradings(const GridDiagram& g, const GridGenerator& x) { return GradingCtx(g)(x); }

GridGenerator invariant_generator(const GridDiagram& g, Corner c) {
  GridGenerator x(g.N);
  for (int r = 0; r < g.N; ++r) {
    if (c == Corner::Plus)
      x[(r + 1) % g.N] = (g.X[r] + 1) % g.N;
    else
      x[r] = g.X[r];
  }
  return x;
}

uint64_t generator_index(const GridGenerator& x) {
  auto f = detail::factorials(int(x.size()));
  return detail::rank_perm(x.data(), int(x.size()), f);
}

GridGenerator generator_at(int N, uint64_t index) {
  auto f = detail::factorials(N);
  std::vector<int> pool(N);
  std::iota(pool.begin(), pool.end(), 0);
  GridGenerator x(N);
  for (int i = 0; i < N; ++i) {
    uint64_t q = index / f[N - 1 - i];
    index %= f[N - 1 - i];
    x[i] = pool[q];
    pool.erase(pool.begin() + long(q));
  }
  return x;
}

static std::string gen_id(const GridGenerator& x) {
  std::string s;
  for (size_t i = 0; i < x.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(x[i]);
  }
  return s;
}

FreeBigradedComplex differential_minus(const GridDiagram& g) {
  GradingCtx gr(g);
  if (g.N > 8) throw ResourceLimitError("explicit grid complexes are limited to N <= 8");
  auto f = detail::factorials(g.N);
  FreeBigradedComplex c;
  GridGenerator x(g.N);
  std::iota(x.begin(), x.end(), 0);
  do {
    c.add_generator({gen_id(x), gr(x), "0"});
  } while (std::next_permutation(x.begin(), x.end()));
  std::iota(x.begin(), x.end(), 0);
  uint32_t s = 0;
  do {
    detail::for_each_rectangle(g, x, [&](int r1, int r2, int os) {
      GridGenerator y = x;
      std::swap(y[r1], y[r2]);
      c.add_entry(uint32_t(detail::rank_perm(y.data(), g.N, f)), s, UPoly::monomial(uint32_t(os)));
    });
    ++s;
  } while (std::next_permutation(x.begin(), x.end()));
  return c;
}

uint64_t estimated_bytes(int N) {
  uint64_t gens = detail::factorials(N)[N];
  return gens * (160 + 4 * uint64_t(N) * uint64_t(N));
}

FilteredInput filtered_grid_complex(const GridDiagram& g, unsigned threads) {
  GradingCtx gr(g);
  const int N = g.N;
  auto f = detail::factorials(N);
  const uint64_t total = f[N];
  threads = std::max(1u, std::min<unsigned>(threads, unsigned(std::max<uint64_t>(1, total / 64))));
  struct Part {
    std::vector<Bigrading> grading;
    std::vector<uint32_t> counts;
    std::vector<uint32_t> targets;
  };
  std::vector<Part> parts(threads);
  auto work = [&](unsigned t) {
    uint64_t lo = total * t / threads, hi = total * (t + 1) / threads;
    Part& p = parts[t];
    p.grading.reserve(hi - lo);
    p.counts.reserve(hi - lo);
    GridGenerator x = generator_at(N, lo);
    std::vector<uint32_t> col;
    for (uint64_t s = lo; s < hi; ++s) {
      p.grading.push_back(gr(x));
      col.clear();
      detail::for_each_rectangle(g, x, [&](int r1, int r2, int) {
        std::swap(x[r1], x[r2]);
        col.push_back(uint32_t(detail::rank_perm(x.data(), N, f)));
        std::swap(x[r1], x[r2]);
      });
      lf::detail::sort_mod2(col);
      p.counts.push_back(uint32_t(col.size()));
      p.targets.insert(p.targets.end(), col.begin(), col.end());
      std::next_permutation(x.begin(), x.end());
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  FilteredInput in;
  in.grading.reserve(total);
  in.offsets.reserve(total + 1);
  in.offsets.push_back(0);
  for (auto& p : parts) {
    in.grading.insert(in.grading.end(), p.grading.begin(), p.grading.end());
    size_t base = in.targets.size();
    in.targets.insert(in.targets.end(), p.targets.begin(), p.targets.end());
    uint64_t off = base;
    for (auto c : p.counts) {
      off += c;
      in.offsets.push_back(off);
    }
    p = Part{};
  }
  return in;
}

GridHomology grid_homology(const GridDiagram& g, const EngineOptions& opt) {
  GridHomology h;
  h.n = component_count(g);
  if (estimated_bytes(g.N) > opt.memory_limit)
    throw ResourceLimitError("grid of size " + std::to_string(g.N) + " needs about " +
                             std::to_string(estimated_bytes(g.N) >> 20) + " MiB; reduce N or raise the limit");
  FilteredInput in = filtered_grid_complex(g, opt.threads);
  h.generators = in.grading.size();
  FilteredReduction red(in);
  h.collapsed = red.decomposition();
  auto link = divide_by_w(h.collapsed, unsigned(g.N - h.n));
  if (!link) throw ConsistencyError("collapsed grid homology does not factor through the extra basepoints");
  h.link = *link;
  for (Corner c : {Corner::Plus, Corner::Minus}) {
    GridGenerator x = invariant_generator(g, c);
    uint64_t idx = generator_index(x);
    if (in.offsets[idx + 1] != in.offsets[idx]) throw ConsistencyError("invariant generator is not a cycle");
    auto pos = red.locate({uint32_t(idx)}, in.grading[idx].alexander);
    (c == Corner::Plus ? h.invariant : h.companion) = pos;
  }
  return h;
}

}  // namespace lf::grid
