#include "lf/homology.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "lf/errors.hpp"
#include "lf/filtered.hpp"
#include "lf/snf.hpp"

namespace lf {

unsigned TowerHeight::value() const {
  if (!k_) throw std::logic_error("infinite tower height has no value");
  return *k_;
}

TowerHeight TowerHeight::min(const TowerHeight& a, const TowerHeight& b) {
  if (a.is_infinite()) return b;
  if (b.is_infinite()) return a;
  return finite(std::min(*a.k_, *b.k_));
}

void ModuleDecomposition::canonicalize() {
  std::sort(free_part.begin(), free_part.end(), grading_less);
  std::sort(torsion_part.begin(), torsion_part.end(), [](const TorsionSummand& a, const TorsionSummand& b) {
    if (!(a.grading == b.grading)) return grading_less(a.grading, b.grading);
    return a.order < b.order;
  });
}

bool operator==(const ModuleDecomposition& a, const ModuleDecomposition& b) {
  auto x = a.canonical(), y = b.canonical();
  return x.free_part == y.free_part && x.torsion_part == y.torsion_part;
}

std::string ModuleDecomposition::str() const {
  auto c = canonical();
  std::string s;
  auto sep = [&] {
    if (!s.empty()) s += " + ";
  };
  for (const auto& g : c.free_part) sep(), s += "F[U]_" + g.str();
  for (const auto& t : c.torsion_part) {
    sep();
    s += t.order == 1 ? "(F[U]/U)_" : "(F[U]/U^" + std::to_string(t.order) + ")_";
    s += t.grading.str();
  }
  return s.empty() ? "0" : s;
}

ModuleDecomposition kunneth(const ModuleDecomposition& a, const ModuleDecomposition& b) {
  ModuleDecomposition r;
  for (const auto& x : a.free_part) {
    for (const auto& y : b.free_part) r.free_part.push_back(x + y);
    for (const auto& t : b.torsion_part) r.torsion_part.push_back({x + t.grading, t.order});
  }
  for (const auto& s : a.torsion_part) {
    for (const auto& y : b.free_part) r.torsion_part.push_back({s.grading + y, s.order});
    for (const auto& t : b.torsion_part) {
      unsigned lo = std::min(s.order, t.order), hi = std::max(s.order, t.order);
      Bigrading g = s.grading + t.grading;
      r.torsion_part.push_back({g, lo});
      // Tor term sits one Maslov degree above U^hi times the product generator
      Bigrading tor = g.u_shift(hi);
      tor.maslov += Half(1);
      r.torsion_part.push_back({tor, lo});
    }
  }
  r.canonicalize();
  return r;
}

namespace {

// divides a multiset of gradings by (1 + t), t the (-1,-1) shift
bool divide_once(std::vector<Bigrading>& v) {
  auto key = [](const Bigrading& g) { return std::make_pair(g.maslov - g.alexander, g.alexander); };
  std::multimap<std::pair<Half, Half>, int> bag;
  for (const auto& g : v) bag.emplace(key(g), 0);
  std::vector<Bigrading> out;
  while (!bag.empty()) {
    auto top = std::prev(bag.end());
    auto [diag, alex] = top->first;
    bag.erase(top);
    auto partner = bag.find({diag, alex - Half(1)});
    if (partner == bag.end()) return false;
    bag.erase(partner);
    out.push_back({diag + alex, alex});
  }
  v.swap(out);
  return true;
}

}  // namespace

std::optional<ModuleDecomposition> divide_by_w(const ModuleDecomposition& d, unsigned m) {
  std::vector<Bigrading> fr = d.free_part;
  std::map<unsigned, std::vector<Bigrading>> tor;
  for (const auto& t : d.torsion_part) tor[t.order].push_back(t.grading);
  for (unsigned i = 0; i < m; ++i) {
    if (!divide_once(fr)) return std::nullopt;
    for (auto& [k, v] : tor)
      if (!divide_once(v)) return std::nullopt;
  }
  ModuleDecomposition r;
  r.free_part = fr;
  for (const auto& [k, v] : tor)
    for (const auto& g : v) r.torsion_part.push_back({g, k});
  r.canonicalize();
  return r;
}

ModuleDecomposition multiply_by_w(const ModuleDecomposition& d, unsigned m) {
  ModuleDecomposition r = d;
  const Bigrading t{Half(-1), Half(-1)};
  for (unsigned i = 0; i < m; ++i) {
    ModuleDecomposition n = r;
    for (const auto& g : r.free_part) n.free_part.push_back(g + t);
    for (const auto& s : r.torsion_part) n.torsion_part.push_back({s.grading + t, s.order});
    r = n;
  }
  r.canonicalize();
  return r;
}

namespace {

Bigrading vector_grading(const std::vector<Bigrading>& gr, const PolyMatrix& m, size_t col) {
  bool have = false;
  Bigrading g;
  for (size_t i = 0; i < m.rows(); ++i)
    for (auto e : m.at(i, col).exponents()) {
      Bigrading h = gr[i].u_shift(e);
      if (!have)
        g = h, have = true;
      else if (!(g == h))
        throw ConsistencyError("Smith basis vector is not homogeneous");
    }
  if (!have) throw std::logic_error("zero basis vector");
  return g;
}

ModuleDecomposition homology_block(const FreeBigradedComplex& c, const std::vector<uint32_t>& idx) {
  const size_t n = idx.size();
  std::map<uint32_t, size_t> local;
  for (size_t i = 0; i < n; ++i) local[idx[i]] = i;
  std::vector<Bigrading> gr(n);
  PolyMatrix d(n, n);
  for (size_t s = 0; s < n; ++s) {
    gr[s] = c.generator(idx[s]).grading;
    for (const auto& [t, coef] : c.boundary(idx[s])) d.at(local.at(t), s) = coef;
  }
  SmithForm s1 = smith_normal_form(d);
  const size_t r = s1.rank();
  // image vectors d_j p_j expressed in the kernel basis q_r, ..., q_{n-1}
  PolyMatrix coords = s1.Q_inv * s1.P_inv;
  PolyMatrix b(n - r, r);
  for (size_t j = 0; j < r; ++j) {
    for (size_t l = 0; l < r; ++l)
      if (!coords.at(l, j).is_zero()) throw ConsistencyError("image not contained in kernel; is d^2 = 0?");
    for (size_t l = r; l < n; ++l) b.at(l - r, j) = coords.at(l, j) * s1.diagonal[j];
  }
  SmithForm s2 = smith_normal_form(b);
  // kernel basis adapted to the image
  PolyMatrix kq(n, n - r);
  for (size_t i = 0; i < n; ++i)
    for (size_t l = r; l < n; ++l) kq.at(i, l - r) = s1.Q.at(i, l);
  PolyMatrix kb = kq * s2.P_inv;
  ModuleDecomposition out;
  for (size_t i = 0; i < n - r; ++i) {
    Bigrading g = vector_grading(gr, kb, i);
    if (i < s2.rank()) {
      const UPoly& e = s2.diagonal[i];
      if (e.is_one()) continue;
      if (!e.is_monomial()) throw ConsistencyError("invariant factor is not a monomial");
      out.torsion_part.push_back({g, e.degree()});
    } else {
      out.free_part.push_back(g);
    }
  }
  return out;
}

void require_valid(const FreeBigradedComplex& c) {
  auto rep = validate_complex(c);
  if (!rep.ok()) throw ConsistencyError("invalid complex: " + rep.violations.front());
}

}  // namespace

std::map<std::string, ModuleDecomposition> homology_by_spinc(const FreeBigradedComplex& c) {
  require_valid(c);
  std::map<std::string, std::vector<uint32_t>> parts;
  for (uint32_t i = 0; i < c.size(); ++i) parts[c.generator(i).spinc].push_back(i);
  std::map<std::string, ModuleDecomposition> out;
  for (const auto& [tag, idx] : parts) {
    auto h = homology_block(c, idx);
    h.canonicalize();
    out.emplace(tag, std::move(h));
  }
  return out;
}

ModuleDecomposition homology(const FreeBigradedComplex& c) {
  ModuleDecomposition all;
  for (const auto& [tag, h] : homology_by_spinc(c)) {
    all.free_part.insert(all.free_part.end(), h.free_part.begin(), h.free_part.end());
    all.torsion_part.insert(all.torsion_part.end(), h.torsion_part.begin(), h.torsion_part.end());
  }
  all.canonicalize();
  return all;
}

TowerHeight ClassPosition::annihilator() const {
  if (is_zero) return TowerHeight::finite(0);
  if (height.is_infinite()) return height;
  return TowerHeight::finite(height.value() - depth);
}

std::string ClassPosition::str() const {
  if (is_zero) return "zero";
  std::ostringstream os;
  os << "nonzero height=" << height.str() << " depth=" << depth << " grading=" << grading.str();
  return os.str();
}

ClassPosition class_position(const FreeBigradedComplex& c, const Chain& cycle) {
  Chain nz;
  for (const auto& [g, coef] : cycle)
    if (!coef.is_zero()) nz.emplace(g, coef);
  ClassPosition zero;
  zero.height = TowerHeight::finite(0);
  if (nz.empty()) return zero;
  Bigrading g = chain_grading(c, nz);
  if (!apply_differential(c, nz).empty()) throw std::invalid_argument("chain is not a cycle");
  std::vector<uint32_t> gens;
  for (const auto& [i, coef] : nz) {
    if (!coef.is_monomial()) throw std::invalid_argument("chain is not homogeneous");
    gens.push_back(i);
  }
  FilteredReduction red(filtered_input(c));
  auto cp = red.locate(gens, g.alexander);
  return cp;
}

}  // namespace lf
