#include "lf/openbook.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "lf/errors.hpp"
#include "lf/textio.hpp"

namespace lf::ob {

namespace {

int mod(int a, int m) { return ((a % m) + m) % m; }

std::string fresh_name(const std::set<std::string>& used, const std::string& prefix) {
  for (int k = 1;; ++k) {
    std::string s = prefix + std::to_string(k);
    if (!used.count(s)) return s;
  }
}

std::set<std::string> segment_names(const Page& p) {
  std::set<std::string> s;
  for (const auto& poly : p.polygons) s.insert(poly.segments.begin(), poly.segments.end());
  return s;
}

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  bool unite(int a, int b) {
    a = find(a), b = find(b);
    if (a == b) return false;
    p[a] = b;
    return true;
  }
};

// rank over F2 of bit rows
int f2_rank(std::vector<std::vector<uint8_t>> rows) {
  int r = 0;
  size_t cols = rows.empty() ? 0 : rows[0].size();
  for (size_t c = 0; c < cols && r < int(rows.size()); ++c) {
    int piv = -1;
    for (int i = r; i < int(rows.size()); ++i)
      if (rows[i][c]) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(rows[r], rows[piv]);
    for (int i = 0; i < int(rows.size()); ++i)
      if (i != r && rows[i][c])
        for (size_t k = 0; k < cols; ++k) rows[i][k] ^= rows[r][k];
    ++r;
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------- page

Page::Loc Page::side_loc(int arc, int sign) const {
  for (int i = 0; i < int(polygons.size()); ++i)
    for (int k = 0; k < int(polygons[i].sides.size()); ++k)
      if (polygons[i].sides[k] == Side{arc, sign}) return {i, k};
  throw ConsistencyError("arc " + (arc >= 0 && arc < int(arc_names.size()) ? arc_names[arc] : std::to_string(arc)) +
                         " has no " + (sign > 0 ? "+" : "-") + " side");
}

int Page::arc_index(const std::string& name) const {
  for (int i = 0; i < int(arc_names.size()); ++i)
    if (arc_names[i] == name) return i;
  return -1;
}

int Page::polygon_index(const std::string& id) const {
  for (int i = 0; i < int(polygons.size()); ++i)
    if (polygons[i].id == id) return i;
  return -1;
}

std::vector<std::vector<std::pair<int, int>>> Page::boundary_cycles() const {
  std::set<std::pair<int, int>> seen;
  std::vector<std::vector<std::pair<int, int>>> out;
  for (int i = 0; i < int(polygons.size()); ++i)
    for (int k = 0; k < int(polygons[i].sides.size()); ++k) {
      if (seen.count({i, k})) continue;
      std::vector<std::pair<int, int>> cyc;
      std::pair<int, int> c{i, k};
      while (!seen.count(c)) {
        seen.insert(c);
        cyc.push_back(c);
        const auto& poly = polygons[c.first];
        Side nx = poly.sides[(c.second + 1) % poly.sides.size()];
        Loc o = side_loc(nx.arc, -nx.sign);
        c = {o.poly, o.idx};
      }
      out.push_back(std::move(cyc));
    }
  return out;
}

int Page::genus() const { return (2 - euler_characteristic() - boundary_components()) / 2; }

void check_page(const Page& p) {
  if (p.polygons.empty()) throw ConsistencyError("page has no polygons");
  std::vector<int> plus(p.arc_names.size(), 0), minus(p.arc_names.size(), 0);
  std::set<std::string> segs, ids;
  for (const auto& poly : p.polygons) {
    if (!ids.insert(poly.id).second) throw ConsistencyError("duplicate polygon " + poly.id);
    if (poly.sides.empty()) throw ConsistencyError("polygon " + poly.id + " has no arc sides");
    if (poly.segments.size() != poly.sides.size())
      throw ConsistencyError("polygon " + poly.id + " does not alternate arc sides and segments");
    for (const auto& s : poly.sides) {
      if (s.arc < 0 || s.arc >= int(p.arc_names.size())) throw ConsistencyError("unknown arc in " + poly.id);
      (s.sign > 0 ? plus : minus)[s.arc]++;
    }
    for (const auto& s : poly.segments)
      if (!segs.insert(s).second) throw ConsistencyError("segment " + s + " appears twice");
  }
  for (size_t a = 0; a < p.arc_names.size(); ++a)
    if (plus[a] != 1 || minus[a] != 1)
      throw ConsistencyError("arc " + p.arc_names[a] + " must appear once with each sign");
  UnionFind uf(int(p.polygons.size()));
  for (size_t a = 0; a < p.arc_names.size(); ++a)
    uf.unite(p.side_loc(int(a), 1).poly, p.side_loc(int(a), -1).poly);
  for (size_t i = 0; i < p.polygons.size(); ++i)
    if (uf.find(int(i)) != uf.find(0)) throw ConsistencyError("page is not connected");
  int chi = p.euler_characteristic(), l = p.boundary_components();
  if ((2 - chi - l) % 2 != 0 || 2 - chi - l < 0) throw ConsistencyError("inconsistent Euler characteristic");
  if (chi == 1 && l == 1) throw ConsistencyError("page is a disk");
}

std::string tag_name(ArcTag t) {
  switch (t) {
    case ArcTag::Distinguished:
      return "distinguished";
    case ArcTag::Dead:
      return "dead";
    default:
      return "separating";
  }
}

int ArcSystem::n() const {
  int k = 0;
  while (k < int(tags.size()) && tags[k] == ArcTag::Distinguished) ++k;
  return k;
}

bool AbstractOpenBook::has_monodromy() const {
  if (bimage.size() != page.arc_names.size() || bimage.empty()) return false;
  for (const auto& b : bimage)
    if (!b) return false;
  return true;
}

// ---------------------------------------------------------------- text format

namespace {

std::string side_str(const Page& p, int arc, int sign) { return p.arc_names[arc] + (sign > 0 ? "+" : "-"); }

}  // namespace

std::string word_str(const Page& p, const CurveWord& w) {
  std::string s;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += side_str(p, w[i].arc, w[i].sign);
  }
  return s;
}

AbstractOpenBook read_openbook(std::istream& is) {
  auto lines = tokenize_lines(is, ":");
  AbstractOpenBook b;
  // arc declarations first so that side tokens can be told from segments
  for (const auto& ln : lines) {
    if (ln.tokens[0].text != "arc") continue;
    if (ln.tokens.size() != 3) throw ParseError(ln.number, ln.tokens[0].col, "expected 'arc <id> <tag>'");
    const auto& id = ln.tokens[1];
    if (id.text.empty() || id.text.back() == '+' || id.text.back() == '-')
      throw ParseError(ln.number, id.col, "arc ids may not end in a sign");
    if (b.page.arc_index(id.text) >= 0) throw ParseError(ln.number, id.col, "duplicate arc " + id.text);
    const auto& tg = ln.tokens[2];
    ArcTag t;
    if (tg.text == "distinguished")
      t = ArcTag::Distinguished;
    else if (tg.text == "dead")
      t = ArcTag::Dead;
    else if (tg.text == "separating")
      t = ArcTag::Separating;
    else
      throw ParseError(ln.number, tg.col, "unknown tag '" + tg.text + "'");
    b.page.arc_names.push_back(id.text);
    b.arcs.tags.push_back(t);
  }
  b.bimage.assign(b.page.arc_names.size(), std::nullopt);
  auto crossing = [&](const Token& t, int line) {
    if (t.text.size() < 2 || (t.text.back() != '+' && t.text.back() != '-'))
      throw ParseError(line, t.col, "expected a signed arc, got '" + t.text + "'");
    int a = b.page.arc_index(t.text.substr(0, t.text.size() - 1));
    if (a < 0) throw ParseError(line, t.col, "unknown arc in '" + t.text + "'");
    return Crossing{a, t.text.back() == '+' ? 1 : -1};
  };
  auto expect_colon = [&](const Line& ln) {
    if (ln.tokens.size() < 3 || ln.tokens[2].text != ":")
      throw ParseError(ln.number, ln.tokens[0].col, "expected '" + ln.tokens[0].text + " <id>: ...'");
  };
  std::vector<std::pair<int, std::string>> zrefs;
  bool seen_classical = false;
  for (const auto& ln : lines) {
    const std::string& kw = ln.tokens[0].text;
    if (kw == "arc") continue;
    if (kw == "polygon") {
      expect_colon(ln);
      Polygon poly;
      poly.id = ln.tokens[1].text;
      if (b.page.polygon_index(poly.id) >= 0) throw ParseError(ln.number, ln.tokens[1].col, "duplicate polygon");
      bool want_side = true;
      for (size_t i = 3; i < ln.tokens.size(); ++i) {
        const auto& t = ln.tokens[i];
        bool signed_tok = !t.text.empty() && (t.text.back() == '+' || t.text.back() == '-');
        bool is_side = signed_tok && b.page.arc_index(t.text.substr(0, t.text.size() - 1)) >= 0;
        if (want_side != is_side)
          throw ParseError(ln.number, t.col, want_side ? "expected an arc side" : "expected a boundary segment");
        if (is_side) {
          Crossing c = crossing(t, ln.number);
          poly.sides.push_back({c.arc, c.sign});
        } else {
          poly.segments.push_back(t.text);
        }
        want_side = !want_side;
      }
      if (poly.sides.empty() || !want_side)
        throw ParseError(ln.number, ln.tokens[0].col, "polygon word must alternate sides and segments");
      b.page.polygons.push_back(std::move(poly));
    } else if (kw == "bimage") {
      expect_colon(ln);
      int a = b.page.arc_index(ln.tokens[1].text);
      if (a < 0) throw ParseError(ln.number, ln.tokens[1].col, "unknown arc");
      if (b.bimage[a]) throw ParseError(ln.number, ln.tokens[1].col, "duplicate bimage");
      CurveWord w;
      for (size_t i = 3; i < ln.tokens.size(); ++i) w.push_back(crossing(ln.tokens[i], ln.number));
      b.bimage[a] = w;
    } else if (kw == "link") {
      expect_colon(ln);
      LinkComponent c;
      c.id = ln.tokens[1].text;
      for (size_t i = 3; i < ln.tokens.size(); ++i) c.word.push_back(crossing(ln.tokens[i], ln.number));
      b.link.components.push_back(std::move(c));
    } else if (kw == "z") {
      if (ln.tokens.size() != 2) throw ParseError(ln.number, ln.tokens[0].col, "expected 'z <polygon>'");
      zrefs.push_back({ln.number, ln.tokens[1].text});
    } else if (kw == "w") {
      if (ln.tokens.size() != 3 || (ln.tokens[2].text != "+" && ln.tokens[2].text != "-"))
        throw ParseError(ln.number, ln.tokens[0].col, "expected 'w <arc> <+|->'");
      int a = b.page.arc_index(ln.tokens[1].text);
      if (a < 0) throw ParseError(ln.number, ln.tokens[1].col, "unknown arc");
      b.link.w.push_back({a, ln.tokens[2].text == "+" ? 1 : -1});
    } else if (kw == "classical") {
      if (seen_classical) throw ParseError(ln.number, ln.tokens[0].col, "duplicate classical line");
      seen_classical = true;
      if (ln.tokens.size() != 7 || ln.tokens[1].text != "tb" || ln.tokens[3].text != "rot" ||
          ln.tokens[5].text != "d3")
        throw ParseError(ln.number, ln.tokens[0].col, "expected 'classical tb <int> rot <int> d3 <half>'");
      Classical c;
      c.tb = int(parse_long(ln.tokens[2], ln.number));
      c.rot = int(parse_long(ln.tokens[4], ln.number));
      try {
        c.d3 = Half::parse(ln.tokens[6].text);
      } catch (const std::exception&) {
        throw ParseError(ln.number, ln.tokens[6].col, "bad d3 value");
      }
      b.classical = c;
    } else {
      throw ParseError(ln.number, ln.tokens[0].col, "unknown keyword '" + kw + "'");
    }
  }
  for (const auto& [line, id] : zrefs) {
    int pi = b.page.polygon_index(id);
    if (pi < 0) throw ParseError(line, 3, "unknown polygon " + id);
    b.link.z.push_back(pi);
  }
  if (b.page.arc_names.empty()) throw ParseError(1, 1, "no arcs declared");
  try {
    check_page(b.page);
  } catch (const ConsistencyError& e) {
    throw ParseError(1, 1, e.what());
  }
  return b;
}

AbstractOpenBook parse_openbook(const std::string& text) {
  std::istringstream is(text);
  return read_openbook(is);
}

void write_openbook(std::ostream& os, const AbstractOpenBook& b) {
  const Page& p = b.page;
  for (const auto& poly : p.polygons) {
    os << "polygon " << poly.id << ":";
    for (size_t k = 0; k < poly.sides.size(); ++k)
      os << ' ' << side_str(p, poly.sides[k].arc, poly.sides[k].sign) << ' ' << poly.segments[k];
    os << '\n';
  }
  for (size_t a = 0; a < p.arc_names.size(); ++a)
    os << "arc " << p.arc_names[a] << ' ' << tag_name(b.arcs.tags[a]) << '\n';
  for (size_t a = 0; a < b.bimage.size(); ++a)
    if (b.bimage[a]) {
      os << "bimage " << p.arc_names[a] << ":";
      if (!b.bimage[a]->empty()) os << ' ' << word_str(p, *b.bimage[a]);
      os << '\n';
    }
  for (const auto& c : b.link.components) {
    os << "link " << c.id << ":";
    if (!c.word.empty()) os << ' ' << word_str(p, c.word);
    os << '\n';
  }
  for (int z : b.link.z) os << "z " << p.polygons[z].id << '\n';
  for (const auto& w : b.link.w) os << "w " << p.arc_names[w.arc] << ' ' << (w.half > 0 ? "+" : "-") << '\n';
  if (b.classical)
    os << "classical tb " << b.classical->tb << " rot " << b.classical->rot << " d3 " << b.classical->d3.str()
       << '\n';
}

std::string to_string(const AbstractOpenBook& b) {
  std::ostringstream os;
  write_openbook(os, b);
  return os.str();
}

AbstractOpenBook canonical(const AbstractOpenBook& b) {
  AbstractOpenBook c = b;
  std::vector<Polygon>& polys = c.page.polygons;
  for (auto& poly : polys) {
    size_t K = poly.sides.size(), best = 0;
    auto rot = [&](size_t r) {
      std::vector<Side> s(K);
      for (size_t i = 0; i < K; ++i) s[i] = poly.sides[(r + i) % K];
      return s;
    };
    for (size_t r = 1; r < K; ++r)
      if (rot(r) < rot(best)) best = r;
    std::rotate(poly.sides.begin(), poly.sides.begin() + best, poly.sides.end());
    std::rotate(poly.segments.begin(), poly.segments.begin() + best, poly.segments.end());
  }
  std::vector<int> order(polys.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return polys[x].sides < polys[y].sides; });
  std::vector<int> newpos(polys.size());
  std::vector<Polygon> sorted;
  for (size_t i = 0; i < order.size(); ++i) {
    newpos[order[i]] = int(i);
    sorted.push_back(polys[order[i]]);
  }
  int seg = 0;
  for (size_t i = 0; i < sorted.size(); ++i) {
    sorted[i].id = "P" + std::to_string(i + 1);
    for (auto& s : sorted[i].segments) s = "s" + std::to_string(++seg);
  }
  polys = std::move(sorted);
  for (int& z : c.link.z) z = newpos[z];
  return c;
}

// ---------------------------------------------------------------- checks

std::vector<ArcTag> classify(const Page& p, int n) {
  std::vector<ArcTag> t(p.arc_names.size());
  for (size_t a = 0; a < t.size(); ++a) {
    if (int(a) < n)
      t[a] = ArcTag::Distinguished;
    else
      t[a] = p.side_loc(int(a), 1).poly == p.side_loc(int(a), -1).poly ? ArcTag::Dead : ArcTag::Separating;
  }
  return t;
}

int basis_rank(const Page& p, const std::vector<int>& arcs) {
  int V = int(p.polygons.size()), E = int(p.arc_names.size());
  std::vector<std::pair<int, int>> ends(E);
  for (int a = 0; a < E; ++a) ends[a] = {p.side_loc(a, 1).poly, p.side_loc(a, -1).poly};
  // spanning tree by BFS, then one fundamental cycle per remaining edge
  std::vector<int> parent_edge(V, -1), parent(V, -1), depth(V, -1);
  std::vector<int> queue{0};
  depth[0] = 0;
  std::vector<bool> tree(E, false);
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    int v = queue[qi];
    for (int a = 0; a < E; ++a) {
      int u = ends[a].first == v ? ends[a].second : ends[a].second == v ? ends[a].first : -1;
      if (u < 0 || depth[u] >= 0) continue;
      depth[u] = depth[v] + 1;
      parent[u] = v;
      parent_edge[u] = a;
      tree[a] = true;
      queue.push_back(u);
    }
  }
  std::vector<std::vector<uint8_t>> cycles;
  for (int a = 0; a < E; ++a) {
    if (tree[a]) continue;
    std::vector<uint8_t> cyc(E, 0);
    cyc[a] ^= 1;
    int u = ends[a].first, v = ends[a].second;
    while (u != v) {
      if (depth[u] < depth[v]) std::swap(u, v);
      cyc[parent_edge[u]] ^= 1;
      u = parent[u];
    }
    cycles.push_back(std::move(cyc));
  }
  if (cycles.empty()) return 0;
  std::vector<std::vector<uint8_t>> rows;
  for (int a : arcs) {
    std::vector<uint8_t> r(cycles.size());
    for (size_t c = 0; c < cycles.size(); ++c) r[c] = cycles[c][a];
    rows.push_back(std::move(r));
  }
  return f2_rank(std::move(rows));
}

int curve_rank(const Page& p, const std::vector<CurveWord>& curves) {
  std::vector<std::vector<uint8_t>> rows;
  for (const auto& w : curves) {
    std::vector<uint8_t> r(p.arc_names.size(), 0);
    for (const auto& c : w) r[c.arc] ^= 1;
    rows.push_back(std::move(r));
  }
  return f2_rank(std::move(rows));
}

namespace {

// cells visited by a closed word; throws if the word does not follow the cells
std::set<int> visited_cells(const Page& p, const CurveWord& w) {
  std::set<int> cells;
  for (size_t i = 0; i < w.size(); ++i) {
    const Crossing& c = w[i];
    const Crossing& nx = w[(i + 1) % w.size()];
    int in = p.side_loc(c.arc, c.sign).poly;
    int out = p.side_loc(nx.arc, -nx.sign).poly;
    if (in != out) throw ConsistencyError("curve word leaves a cell through a side it is not in");
    cells.insert(in);
  }
  return cells;
}

}  // namespace

AdaptedReport validate_adapted(const Page& p, const ArcSystem& a, const LinkOnPage& l) {
  AdaptedReport r;
  auto fail = [&](int cond, const std::string& msg) {
    if (std::find(r.failed.begin(), r.failed.end(), cond) == r.failed.end()) r.failed.push_back(cond);
    r.messages.push_back("condition " + std::to_string(cond) + ": " + msg);
  };
  int n = int(l.components.size());
  int g = p.genus(), bl = p.boundary_components();
  int basis = 2 * g + bl - 1;
  int total = int(p.arc_names.size());
  r.computed_tags = classify(p, n);
  if (n < 1) fail(2, "no link components");
  if (total != 2 * g + bl + n - 2)
    fail(1, "expected " + std::to_string(2 * g + bl + n - 2) + " arcs, found " + std::to_string(total));
  if (a.n() != n) fail(2, "expected " + std::to_string(n) + " distinguished arcs, found " + std::to_string(a.n()));
  // 1
  std::vector<int> first;
  for (int i = 0; i < std::min(basis, total); ++i) first.push_back(i);
  if (int(first.size()) != basis || basis_rank(p, first) != basis) fail(1, "A1 and A2 do not form a basis");
  // 2
  std::vector<int> hits(total, 0);
  bool walks_ok = true;
  std::vector<std::set<int>> cells(n);
  for (int c = 0; c < n; ++c) {
    for (const auto& x : l.components[c].word) hits[x.arc]++;
    try {
      if (!l.components[c].word.empty()) cells[c] = visited_cells(p, l.components[c].word);
    } catch (const ConsistencyError& e) {
      walks_ok = false;
      fail(2, l.components[c].id + ": " + e.what());
    }
  }
  for (int i = 0; i < total; ++i) {
    int want = i < n ? 1 : 0;
    if (hits[i] != want)
      fail(2, "link meets " + p.arc_names[i] + " in " + std::to_string(hits[i]) + " points, expected " +
                  std::to_string(want));
  }
  // 3
  if (int(p.polygons.size()) != n)
    fail(3, "cutting along all arcs leaves " + std::to_string(p.polygons.size()) + " cells, expected " +
                std::to_string(n));
  if (walks_ok) {
    std::vector<int> owner(p.polygons.size(), 0);
    for (int c = 0; c < n; ++c) {
      if (cells[c].size() != 1) {
        fail(3, l.components[c].id + " is not contained in a single cell");
        continue;
      }
      owner[*cells[c].begin()]++;
    }
    for (size_t i = 0; i < owner.size(); ++i)
      if (owner[i] != 1)
        fail(3, "cell " + p.polygons[i].id + " holds " + std::to_string(owner[i]) + " link components");
  }
  for (int i = n; i < total && i < int(a.tags.size()); ++i)
    if (a.tags[i] != r.computed_tags[i])
      fail(3, p.arc_names[i] + " is tagged " + tag_name(a.tags[i]) + " but is " + tag_name(r.computed_tags[i]));
  // 4
  int a3 = total - std::max(basis, 0);
  if (a3 != n - 1) fail(4, "expected " + std::to_string(n - 1) + " arcs in A3, found " + std::to_string(a3));
  UnionFind uf(int(p.polygons.size()));
  for (int i = std::max(basis, 0); i < total; ++i) {
    int x = p.side_loc(i, 1).poly, y = p.side_loc(i, -1).poly;
    if (r.computed_tags[i] != ArcTag::Separating) fail(4, p.arc_names[i] + " in A3 is not separating");
    if (!uf.unite(x, y)) fail(4, p.arc_names[i] + " does not separate a new pair of cells");
  }
  for (size_t i = 0; i < p.polygons.size(); ++i)
    if (uf.find(int(i)) != uf.find(0)) {
      fail(4, "cutting along A1 and A2 does not leave a disk");
      break;
    }
  std::sort(r.failed.begin(), r.failed.end());
  return r;
}

// ---------------------------------------------------------------- link encoding

LinkOnPage place_basepoints(const Page& p, const ArcSystem& a, const std::vector<LinkComponent>& comps) {
  LinkOnPage l;
  l.components = comps;
  LinkOnPage probe;
  probe.components = comps;
  auto rep = validate_adapted(p, a, probe);
  if (!rep.ok()) throw ConsistencyError("adapted conditions unmet: " + rep.messages.front());
  for (const auto& c : comps) {
    const Crossing& x = c.word.front();
    l.z.push_back(p.side_loc(x.arc, x.sign).poly);
    l.w.push_back({x.arc, -x.sign});
  }
  return l;
}

LinkReport link_from_basepoints(const Page& p, const ArcSystem& a, const LinkOnPage& l) {
  LinkReport r;
  int n = int(l.z.size());
  if (int(l.w.size()) != n) throw ConsistencyError("numbers of z and w basepoints differ");
  r.components = n;
  std::vector<int> zcount(p.polygons.size(), 0), wcount(p.polygons.size(), 0);
  std::set<int> strips;
  for (int c = 0; c < n; ++c) {
    const StripPoint& w = l.w[c];
    if (w.arc >= a.n()) r.errors.push_back("w" + std::to_string(c + 1) + " is not in a distinguished strip");
    if (!strips.insert(w.arc).second) r.errors.push_back("strip " + p.arc_names[w.arc] + " holds two w");
    int sign = -w.half;
    int from = p.side_loc(w.arc, -sign).poly, to = p.side_loc(w.arc, sign).poly;
    if (from != l.z[c] || to != l.z[c])
      throw ConsistencyError("traversal from z" + std::to_string(c + 1) + " does not close up");
    zcount[l.z[c]]++;
    wcount[from]++;
    LinkComponent comp;
    comp.id = c < int(l.components.size()) ? l.components[c].id : "L" + std::to_string(c + 1);
    comp.word = {{w.arc, sign}};
    r.link.components.push_back(comp);
  }
  for (size_t i = 0; i < zcount.size(); ++i)
    if (zcount[i] != 1 || wcount[i] != 1)
      r.errors.push_back("cell " + p.polygons[i].id + " does not hold exactly one z and one w");
  r.link.z = l.z;
  r.link.w = l.w;
  if (!l.components.empty()) {
    for (int c = 0; c < n && c < int(l.components.size()); ++c)
      if (reduce(l.components[c].word, true) != r.link.components[c].word)
        r.errors.push_back(l.components[c].id + " differs from the curve read off the basepoints");
  }
  std::vector<CurveWord> words;
  for (const auto& c : r.link.components) words.push_back(c.word);
  r.independent = curve_rank(p, words) == n;
  return r;
}

// ---------------------------------------------------------------- cut and paste

CurveWord reduce(const CurveWord& w, bool closed) {
  CurveWord out;
  for (const auto& c : w) {
    if (!out.empty() && out.back() == c.inverse())
      out.pop_back();
    else
      out.push_back(c);
  }
  if (closed) {
    size_t lo = 0, hi = out.size();
    while (hi - lo >= 2 && out[hi - 1] == out[lo].inverse()) {
      ++lo;
      --hi;
    }
    out = CurveWord(out.begin() + lo, out.begin() + hi);
  }
  return out;
}

namespace {

// Splits polygon `poly` along a new arc from corner c1 to corner c2. The first piece keeps
// sides c2+1..c1 and sees the new arc with sign +1, the second keeps c1+1..c2 with sign -1.
std::pair<Polygon, Polygon> cut_polygon(const Polygon& poly, int c1, int c2, int new_arc,
                                        std::set<std::string>& used) {
  int K = int(poly.sides.size());
  if (mod(c1 - c2, K) == 0) throw ConsistencyError("chord joins a corner to itself");
  std::string c1b = fresh_name(used, "s");
  used.insert(c1b);
  std::string c2b = fresh_name(used, "s");
  used.insert(c2b);
  Polygon a, b;
  for (int t = mod(c2 + 1, K);; t = (t + 1) % K) {
    a.sides.push_back(poly.sides[t]);
    a.segments.push_back(t == c1 ? poly.segments[c1] : poly.segments[t]);
    if (t == c1) break;
  }
  a.sides.push_back({new_arc, 1});
  a.segments.push_back(c2b);
  for (int t = mod(c1 + 1, K);; t = (t + 1) % K) {
    b.sides.push_back(poly.sides[t]);
    b.segments.push_back(poly.segments[t]);
    if (t == c2) break;
  }
  b.sides.push_back({new_arc, -1});
  b.segments.push_back(c1b);
  return {a, b};
}

// Glues the two cells on either side of `arc` (which must be distinct) into one; the arc disappears.
void merge_across(Page& p, int arc) {
  Page::Loc la = p.side_loc(arc, 1), lb = p.side_loc(arc, -1);
  if (la.poly == lb.poly) throw ConsistencyError("cannot merge across a dead arc");
  const Polygon& A = p.polygons[la.poly];
  const Polygon& B = p.polygons[lb.poly];
  int KA = int(A.sides.size()), KB = int(B.sides.size());
  Polygon m;
  m.id = A.id;
  for (int t = 1; t < KA; ++t) {
    int q = (la.idx + t) % KA;
    m.sides.push_back(A.sides[q]);
    m.segments.push_back(A.segments[q]);
  }
  for (int t = 1; t < KB; ++t) {
    int q = (lb.idx + t) % KB;
    m.sides.push_back(B.sides[q]);
    m.segments.push_back(B.segments[q]);
  }
  if (m.sides.empty()) throw ConsistencyError("merge leaves a cell without arcs");
  int hi = std::max(la.poly, lb.poly), lo = std::min(la.poly, lb.poly);
  p.polygons.erase(p.polygons.begin() + hi);
  p.polygons[lo] = std::move(m);
}

void renumber_polygons(Page& p) {
  for (size_t i = 0; i < p.polygons.size(); ++i) p.polygons[i].id = "P" + std::to_string(i + 1);
}

}  // namespace

std::pair<Page, ArcSystem> complete_to_adapted_system(const Page& page, const ArcSystem& basis,
                                                      const std::vector<LinkComponent>& link) {
  check_page(page);
  Page p = page;
  int n = int(link.size());
  int b = 2 * p.genus() + p.boundary_components() - 1;
  if (int(p.arc_names.size()) != b || int(basis.tags.size()) != b)
    throw ConsistencyError("expected exactly " + std::to_string(b) + " basis arcs");
  std::vector<int> all(b);
  std::iota(all.begin(), all.end(), 0);
  if (basis_rank(p, all) != b) throw ConsistencyError("arcs do not form a basis of H1(S, dS)");
  if (basis.n() != n) throw ConsistencyError("number of distinguished arcs differs from the link");
  for (int c = 0; c < n; ++c) {
    const auto& w = link[c].word;
    if (w.size() != 1 || w[0].arc != c)
      throw ConsistencyError(link[c].id + " must cross its distinguished arc once and no other arc");
  }
  ArcSystem sys = basis;
  std::set<std::string> used = segment_names(p);
  auto cell_of = [&](int arc) { return p.side_loc(arc, 1).poly; };
  while (int(p.polygons.size()) < n) {
    int k = -1;
    for (int c = 0; c < n && k < 0; ++c)
      for (int d = 0; d < n; ++d)
        if (d != c && cell_of(d) == cell_of(c)) {
          k = c;
          break;
        }
    if (k < 0) throw ConsistencyError("cannot separate the link components");
    int pi = cell_of(k);
    const Polygon& poly = p.polygons[pi];
    int K = int(poly.sides.size());
    int ip = p.side_loc(k, 1).idx, im = p.side_loc(k, -1).idx;
    auto stretch_has_other = [&](int from, int to) {
      for (int t = (from + 1) % K; t != to; t = (t + 1) % K)
        if (poly.sides[t].arc < n && poly.sides[t].arc != k) return true;
      return false;
    };
    int c1, c2;
    if (stretch_has_other(im, ip)) {
      c1 = mod(ip - 1, K);
      c2 = im;
    } else {
      c1 = ip;
      c2 = mod(im - 1, K);
    }
    int new_arc = int(p.arc_names.size());
    std::set<std::string> names(p.arc_names.begin(), p.arc_names.end());
    p.arc_names.push_back(fresh_name(names, "a"));
    auto [pa, pb] = cut_polygon(poly, c1, c2, new_arc, used);
    p.polygons[pi] = pa;
    p.polygons.insert(p.polygons.begin() + pi + 1, pb);
    sys.tags.push_back(ArcTag::Separating);
  }
  renumber_polygons(p);
  LinkOnPage l;
  l.components = link;
  auto rep = validate_adapted(p, sys, l);
  if (!rep.ok()) throw ConsistencyError("completion failed: " + rep.messages.front());
  return {p, sys};
}

std::vector<std::tuple<int, int, std::string>> admissible_slides(const AbstractOpenBook& b) {
  std::vector<std::tuple<int, int, std::string>> out;
  int n = b.arcs.n();
  for (const auto& poly : b.page.polygons) {
    int K = int(poly.sides.size());
    if (K < 3) continue;
    for (int k = 0; k < K; ++k) {
      int u = poly.sides[k].arc, v = poly.sides[(k + 1) % K].arc;
      if (u == v) continue;
      if (u >= n) out.emplace_back(v, u, poly.segments[k]);
      if (v >= n) out.emplace_back(u, v, poly.segments[k]);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

AbstractOpenBook admissible_arc_slide(const AbstractOpenBook& b, int i, int j, const std::string& segment) {
  const Page& p0 = b.page;
  int E = int(p0.arc_names.size());
  if (i < 0 || j < 0 || i >= E || j >= E || i == j) throw ConsistencyError("bad arc indices for a slide");
  if (j < b.arcs.n()) throw ConsistencyError("cannot slide over the distinguished arc " + p0.arc_names[j]);
  int pi = -1, k = -1;
  for (int q = 0; q < int(p0.polygons.size()) && pi < 0; ++q) {
    const auto& poly = p0.polygons[q];
    int K = int(poly.sides.size());
    for (int t = 0; t < K; ++t) {
      int u = poly.sides[t].arc, v = poly.sides[(t + 1) % K].arc;
      bool pair = (u == i && v == j) || (u == j && v == i);
      if (pair && (segment.empty() || poly.segments[t] == segment)) {
        pi = q;
        k = t;
        break;
      }
    }
  }
  if (pi < 0)
    throw ConsistencyError("endpoints of " + p0.arc_names[i] + " and " + p0.arc_names[j] + " are not adjacent" +
                           (segment.empty() ? "" : " along " + segment));
  const Polygon& poly = p0.polygons[pi];
  int K = int(poly.sides.size());
  if (K < 3) throw ConsistencyError("slide would produce a boundary-parallel arc");
  Side u = poly.sides[k], v = poly.sides[(k + 1) % K];
  bool keep = v.arc == i ? v.sign == -1 : u.sign == -1;
  int sigma = v.arc == i ? v.sign : u.sign;  // sign of the a_i side inside the triangle

  Page p = p0;
  std::set<std::string> used = segment_names(p);
  p.arc_names.push_back(p0.arc_names[i]);
  auto [tri, rest] = cut_polygon(poly, (k + 1) % K, mod(k - 1, K), E, used);
  p.polygons[pi] = tri;
  p.polygons.push_back(rest);
  merge_across(p, i);
  int flip = keep ? 1 : -1;
  for (auto& pl : p.polygons)
    for (auto& s : pl.sides) {
      if (s.arc == E) {
        s.arc = i;
        s.sign *= flip;
      }
    }
  p.arc_names.pop_back();
  renumber_polygons(p);
  check_page(p);

  AbstractOpenBook r;
  r.page = p;
  r.arcs = b.arcs;
  r.bimage.assign(E, std::nullopt);
  r.classical = b.classical;
  r.link.components = b.link.components;
  for (auto& c : r.link.components)
    for (auto& x : c.word)
      if (x.arc == i) x.sign = (sigma == x.sign ? -1 : 1) * flip;
  if (!b.link.z.empty()) {
    LinkOnPage probe;
    probe.components = r.link.components;
    if (validate_adapted(r.page, r.arcs, probe).ok())
      r.link = place_basepoints(r.page, r.arcs, r.link.components);
  }
  return canonical(r);
}

// ---------------------------------------------------------------- curve layout

namespace {

std::pair<int, int> ccw_key(const BoundaryPos& q, const BoundaryPos& from, int K) {
  int d = mod(q.slot - from.slot, 2 * K);
  if (d == 0 && q.rank <= from.rank) d = 2 * K;
  return {d, q.rank};
}

}  // namespace

struct CurveLayout::Walk {
  const CurveLayout* L;
  int strand;
  int chord;  // position within the strand's chord list
  int dir;

  const Chord& c() const { return L->chords_[L->by_strand_[strand][chord]]; }
  int exit_slot() const { return dir > 0 ? c().exit.slot : c().entry.slot; }
  int entry_slot() const { return dir > 0 ? c().entry.slot : c().exit.slot; }
  bool advance() {
    int m = int(L->by_strand_[strand].size());
    if (L->strands_[strand].closed) {
      chord = mod(chord + dir, m);
      return true;
    }
    chord += dir;
    return chord >= 0 && chord < m;
  }
};

CurveLayout::CurveLayout(const Page& p, std::vector<Strand> strands) : page_(&p), strands_(std::move(strands)) {
  events_.assign(p.arc_names.size(), {});
  by_strand_.assign(strands_.size(), {});
  auto slot_of_side = [&](int arc, int sign) {
    auto l = p.side_loc(arc, sign);
    return std::pair<int, int>{l.poly, 2 * l.idx};
  };
  for (int s = 0; s < int(strands_.size()); ++s) {
    const Strand& st = strands_[s];
    const CurveWord& w = st.word;
    int m = int(w.size());
    if (reduce(w, st.closed).size() != w.size()) throw ConsistencyError("curve word is not reduced");
    if (st.closed && m == 0) throw ConsistencyError("empty closed curve");
    int nchords = st.closed ? m : m + 1;
    for (int c = 0; c < nchords; ++c) {
      Chord ch;
      ch.strand = s;
      ch.index = c;
      std::pair<int, int> in, out;
      if (!st.closed && c == 0) {
        auto l = p.side_loc(st.arc, -1);
        in = {l.poly, 2 * l.idx + 1};
      } else {
        const Crossing& t = w[mod(c - 1, m)];
        in = slot_of_side(t.arc, t.sign);
      }
      if (!st.closed && c == m) {
        auto l = p.side_loc(st.arc, 1);
        out = {l.poly, 2 * l.idx + 1};
      } else {
        const Crossing& t = w[c];
        out = slot_of_side(t.arc, -t.sign);
      }
      if (in.first != out.first) throw ConsistencyError("curve word does not follow the cells of the page");
      ch.poly = in.first;
      ch.entry.slot = in.second;
      ch.exit.slot = out.second;
      by_strand_[s].push_back(int(chords_.size()));
      chords_.push_back(ch);
    }
    for (int t = 0; t < m; ++t) events_[w[t].arc].push_back({s, t});
  }
  for (auto& ev : events_)
    for (size_t i = 1; i < ev.size(); ++i)
      for (size_t j = i; j > 0 && compare(ev[j], ev[j - 1]) < 0; --j) std::swap(ev[j], ev[j - 1]);
  std::map<std::pair<int, int>, int> rank;
  for (const auto& ev : events_)
    for (size_t i = 0; i < ev.size(); ++i) rank[ev[i]] = int(i);
  for (auto& ch : chords_) {
    const Strand& st = strands_[ch.strand];
    int m = int(st.word.size());
    auto side_rank = [&](int token, int sign) {
      const Crossing& t = st.word[token];
      int r = rank[{ch.strand, token}];
      int cnt = int(events_[t.arc].size());
      return sign > 0 ? r : cnt - 1 - r;
    };
    if (ch.entry.slot % 2 == 0) {
      int tok = mod(ch.index - 1, m);
      ch.entry.rank = side_rank(tok, st.word[tok].sign);
    }
    if (ch.exit.slot % 2 == 0) {
      int tok = ch.index % std::max(m, 1);
      ch.exit.rank = side_rank(tok, -st.word[tok].sign);
    }
  }
}

int CurveLayout::polygon_size(int poly) const { return int(page_->polygons[poly].sides.size()); }

int CurveLayout::compare(std::pair<int, int> e1, std::pair<int, int> e2) const {
  if (e1 == e2) return 0;
  const Strand& S1 = strands_[e1.first];
  const Strand& S2 = strands_[e2.first];
  bool lead1 = S1.pushed != S2.pushed ? S1.pushed : e1 < e2;
  int flip = 1;
  if (!lead1) {
    std::swap(e1, e2);
    flip = -1;
  }
  const Strand& A = strands_[e1.first];
  const Strand& B = strands_[e2.first];
  int tau1 = A.word[e1.second].sign, tau2 = B.word[e2.second].sign;
  auto start = [&](const Strand& st, int token, int dir) {
    int m = int(st.word.size());
    if (dir > 0) return st.closed ? (token + 1) % m : token + 1;
    return token;
  };
  int cap = 2 * (int(A.word.size()) + int(B.word.size()) + 2);
  for (int attempt = 0; attempt < 2; ++attempt) {
    int sigma = attempt == 0 ? tau1 : -tau1;
    int d1 = tau1 == sigma ? 1 : -1, d2 = tau2 == sigma ? 1 : -1;
    Walk w1{this, e1.first, start(A, e1.second, d1), d1};
    Walk w2{this, e2.first, start(B, e2.second, d2), d2};
    for (int step = 0; step < cap; ++step) {
      int x1 = w1.exit_slot(), x2 = w2.exit_slot();
      if (x1 != x2) {
        int K = polygon_size(w1.c().poly);
        int entry = w1.entry_slot();
        int a = mod(x1 - entry, 2 * K), b = mod(x2 - entry, 2 * K);
        return (a > b ? -1 : 1) * sigma * flip;
      }
      if (x1 % 2 == 1) break;
      if (!w1.advance() || !w2.advance()) break;
    }
  }
  if (e1.first == e2.first) throw ConsistencyError("curve is not embedded");
  // parallel closed curves: the higher strand runs to the left of the lower one
  bool e1_low = e1.first < e2.first;
  int tau_low = e1_low ? tau1 : tau2;
  int high_first = tau_low > 0 ? 1 : -1;  // 1: high strand comes first
  int r = e1_low ? high_first : -high_first;
  return r * flip;
}

bool CurveLayout::cross(const Chord& a, const Chord& b) const {
  if (a.poly != b.poly) return false;
  BoundaryPos lo = std::min(a.entry, a.exit), hi = std::max(a.entry, a.exit);
  auto inside = [&](const BoundaryPos& q) { return lo < q && q < hi; };
  if (b.entry == lo || b.entry == hi || b.exit == lo || b.exit == hi) return false;
  return inside(b.entry) != inside(b.exit);
}

std::vector<std::pair<int, int>> CurveLayout::crossings(int s, int t) const {
  std::vector<std::pair<int, int>> out;
  for (int i : by_strand_[s])
    for (int j : by_strand_[t]) {
      if (s == t && j <= i) continue;
      if (cross(chords_[i], chords_[j])) out.push_back({i, j});
    }
  return out;
}

// ---------------------------------------------------------------- twists and stabilization

CurveWord dehn_twist(const Page& p, int arc, const CurveWord& image, const CurveWord& gamma, int sign) {
  CurveWord g = reduce(gamma, true);
  CurveWord w = reduce(image, false);
  if (g.empty()) return w;
  CurveLayout L(p, {Strand{w, false, arc, false}, Strand{g, true, -1, true}});
  int m = int(g.size());
  std::vector<std::vector<std::pair<std::pair<int, int>, CurveWord>>> ins(w.size() + 1);
  for (auto [ci, gi] : L.crossings(0, 1)) {
    const Chord& c = L.chords()[ci];
    const Chord& h = L.chords()[gi];
    int K = L.polygon_size(c.poly);
    auto key = [&](const BoundaryPos& q) { return ccw_key(q, c.entry, K); };
    bool entry_right = key(h.entry) < key(c.exit);
    bool backward = entry_right == (sign > 0);
    CurveWord loop;
    if (backward)
      for (int q = 1; q <= m; ++q) loop.push_back(g[mod(h.index - q, m)].inverse());
    else
      for (int q = 0; q < m; ++q) loop.push_back(g[(h.index + q) % m]);
    ins[c.index].push_back({key(entry_right ? h.entry : h.exit), loop});
  }
  CurveWord out;
  for (size_t k = 0; k <= w.size(); ++k) {
    std::sort(ins[k].begin(), ins[k].end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& [key, loop] : ins[k]) out.insert(out.end(), loop.begin(), loop.end());
    if (k < w.size()) out.push_back(w[k]);
  }
  return reduce(out, false);
}

int intersection_count(const Page& p, const CurveWord& c1, const CurveWord& c2) {
  CurveWord a = reduce(c1, true), b = reduce(c2, true);
  if (a.empty() || b.empty()) return 0;
  CurveLayout L(p, {Strand{a, true, -1, false}, Strand{b, true, -1, false}});
  return int(L.crossings(0, 1).size());
}

AbstractOpenBook positive_stabilization(const AbstractOpenBook& b0, const StabilizationSpec& s) {
  if (!b0.has_monodromy()) throw ConsistencyError("stabilization needs monodromy images for every arc");
  const Page& p0 = b0.page;
  int E = int(p0.arc_names.size());
  int basis = 2 * p0.genus() + p0.boundary_components() - 1;
  auto find_segment = [&](const std::string& name) {
    for (int q = 0; q < int(p0.polygons.size()); ++q)
      for (int c = 0; c < int(p0.polygons[q].segments.size()); ++c)
        if (p0.polygons[q].segments[c] == name) return std::pair<int, int>{q, c};
    throw ConsistencyError("unknown boundary segment " + name);
  };
  auto [q1, c1] = find_segment(s.segment1);
  auto [q2, c2] = find_segment(s.segment2);
  auto remap = [&](int a) { return a >= basis ? a + 1 : a; };

  Page p = p0;
  for (auto& poly : p.polygons)
    for (auto& sd : poly.sides) sd.arc = remap(sd.arc);
  std::set<std::string> names(p.arc_names.begin(), p.arc_names.end());
  std::string name = s.arc_name.empty() ? fresh_name(names, "a") : s.arc_name;
  if (names.count(name)) throw ConsistencyError("arc " + name + " already exists");
  p.arc_names.insert(p.arc_names.begin() + basis, name);
  std::set<std::string> used = segment_names(p);
  auto fresh = [&] {
    std::string f = fresh_name(used, "s");
    used.insert(f);
    return f;
  };
  auto insert_side = [&](int q, int c, Side sd) {
    auto& poly = p.polygons[q];
    poly.sides.insert(poly.sides.begin() + c + 1, sd);
    poly.segments.insert(poly.segments.begin() + c + 1, fresh());
  };
  if (q1 == q2 && c1 == c2) {
    insert_side(q1, c1, {basis, -1});
    insert_side(q1, c1, {basis, 1});
  } else if (q1 == q2 && c1 > c2) {
    insert_side(q1, c1, {basis, 1});
    insert_side(q2, c2, {basis, -1});
  } else {
    insert_side(q2, c2, {basis, -1});
    insert_side(q1, c1, {basis, 1});
  }
  check_page(p);

  CurveWord gamma;
  for (const auto& tok : s.gamma) {
    if (tok.size() < 2 || (tok.back() != '+' && tok.back() != '-'))
      throw ConsistencyError("bad crossing token '" + tok + "' in gamma");
    int a = p.arc_index(tok.substr(0, tok.size() - 1));
    if (a < 0) throw ConsistencyError("unknown arc in gamma token '" + tok + "'");
    gamma.push_back({a, tok.back() == '+' ? 1 : -1});
  }
  gamma = reduce(gamma, true);
  if (gamma.empty()) throw ConsistencyError("gamma is empty");
  try {
    visited_cells(p, gamma);
  } catch (const ConsistencyError&) {
    throw ConsistencyError("gamma is not closed after handle attachment");
  }
  int through = 0;
  for (const auto& c : gamma) through += c.arc == basis;
  if (through != 1) throw ConsistencyError("gamma must cross the new handle exactly once");

  AbstractOpenBook b;
  b.page = p;
  b.classical = b0.classical;
  b.arcs.tags = b0.arcs.tags;
  b.link.components = b0.link.components;
  for (auto& c : b.link.components)
    for (auto& x : c.word) x.arc = remap(x.arc);
  if (s.l_elementary) {
    int meet = 0;
    for (const auto& c : b.link.components) meet += intersection_count(p, c.word, gamma);
    if (meet > 1) throw ConsistencyError("gamma meets the link in more than one point");
  }
  b.arcs.tags.insert(b.arcs.tags.begin() + basis, classify(p, b0.arcs.n())[basis]);
  b.bimage.assign(E + 1, std::nullopt);
  for (int i = 0; i < E; ++i) {
    CurveWord img = *b0.bimage[i];
    for (auto& x : img) x.arc = remap(x.arc);
    b.bimage[remap(i)] = dehn_twist(p, remap(i), img, gamma, 1);
  }
  b.bimage[basis] = dehn_twist(p, basis, CurveWord{{basis, 1}}, gamma, 1);
  if (!b0.link.z.empty()) b.link = place_basepoints(p, b.arcs, b.link.components);
  return canonical(b);
}

AbstractOpenBook annulus_unknot(int twist) {
  AbstractOpenBook b = parse_openbook(
      "polygon P1: a1+ s1 a1- s2\n"
      "arc a1 distinguished\n"
      "link L1: a1+\n");
  CurveWord id{{0, 1}};
  b.bimage[0] = dehn_twist(b.page, 0, id, id, twist >= 0 ? 1 : -1);
  b.link = place_basepoints(b.page, b.arcs, b.link.components);
  if (twist >= 0) b.classical = Classical{-1, 0, Half{}};
  return b;
}

}  // namespace lf::ob
