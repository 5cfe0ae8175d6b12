#include "lf/complex.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "f2_sparse.hpp"
#include "lf/errors.hpp"
#include "lf/textio.hpp"

namespace lf {

uint32_t FreeBigradedComplex::add_generator(GradedGenerator g) {
  if (index_.count(g.id)) throw std::invalid_argument("duplicate generator id " + g.id);
  uint32_t i = uint32_t(gens_.size());
  index_.emplace(g.id, i);
  gens_.push_back(std::move(g));
  diff_.emplace_back();
  return i;
}

void FreeBigradedComplex::add_entry(uint32_t target, uint32_t source, const UPoly& c) {
  if (target >= gens_.size() || source >= gens_.size()) throw std::out_of_range("entry index out of range");
  auto& col = diff_[source];
  auto it = std::lower_bound(col.begin(), col.end(), target,
                             [](const auto& e, uint32_t t) { return e.first < t; });
  if (it != col.end() && it->first == target) {
    it->second += c;
    if (it->second.is_zero()) col.erase(it);
  } else if (!c.is_zero()) {
    col.insert(it, {target, c});
  }
}

std::vector<DiffEntry> FreeBigradedComplex::entries() const {
  std::vector<DiffEntry> out;
  for (uint32_t s = 0; s < diff_.size(); ++s)
    for (const auto& [t, c] : diff_[s]) out.push_back({t, s, c});
  return out;
}

size_t FreeBigradedComplex::entry_count() const {
  size_t n = 0;
  for (const auto& c : diff_) n += c.size();
  return n;
}

long FreeBigradedComplex::find(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : long(it->second);
}

std::vector<std::string> FreeBigradedComplex::spinc_tags() const {
  std::set<std::string> s;
  for (const auto& g : gens_) s.insert(g.spinc);
  return {s.begin(), s.end()};
}

Chain apply_differential(const FreeBigradedComplex& c, const Chain& x) {
  Chain out;
  for (const auto& [s, coef] : x) {
    if (coef.is_zero()) continue;
    for (const auto& [t, d] : c.boundary(s)) {
      auto& slot = out[t];
      slot += coef * d;
    }
  }
  for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

Bigrading chain_grading(const FreeBigradedComplex& c, const Chain& x) {
  bool have = false;
  Bigrading g;
  for (const auto& [i, coef] : x) {
    for (auto e : coef.exponents()) {
      Bigrading h = c.generator(i).grading.u_shift(e);
      if (!have) {
        g = h;
        have = true;
      } else if (!(g == h)) {
        throw std::invalid_argument("chain is not homogeneous");
      }
    }
  }
  if (!have) throw std::invalid_argument("zero chain has no grading");
  return g;
}

ComplexReport validate_complex(const FreeBigradedComplex& c) {
  ComplexReport r;
  for (uint32_t s = 0; s < c.size(); ++s) {
    const auto& gs = c.generator(s);
    for (const auto& [t, coef] : c.boundary(s)) {
      const auto& gt = c.generator(t);
      std::string where = gs.id + " -> " + gt.id;
      if (!coef.is_monomial()) {
        r.homogeneous = false;
        r.violations.push_back("non-monomial entry " + coef.str() + " at " + where);
        continue;
      }
      int64_t k = coef.degree();
      Bigrading img = gt.grading.u_shift(k);
      if (img.alexander != gs.grading.alexander)
        r.violations.push_back("Alexander mismatch at " + where), r.homogeneous = false;
      if (img.maslov != gs.grading.maslov - Half(1))
        r.violations.push_back("Maslov mismatch at " + where), r.homogeneous = false;
      if (gs.spinc != gt.spinc) r.violations.push_back("spinc mismatch at " + where), r.homogeneous = false;
    }
    Chain dd = apply_differential(c, apply_differential(c, Chain{{s, UPoly::one()}}));
    for (const auto& [t, coef] : dd) {
      r.d_squared_zero = false;
      r.violations.push_back("d^2 nonzero: " + gs.id + " -> " + c.generator(t).id + " coefficient " + coef.str());
    }
  }
  return r;
}

FreeBigradedComplex tensor_product(const FreeBigradedComplex& a, const FreeBigradedComplex& b) {
  FreeBigradedComplex t;
  const uint32_t nb = uint32_t(b.size());
  for (uint32_t i = 0; i < a.size(); ++i)
    for (uint32_t j = 0; j < nb; ++j) {
      const auto& x = a.generator(i);
      const auto& y = b.generator(j);
      t.add_generator({x.id + "|" + y.id, x.grading + y.grading, x.spinc + "|" + y.spinc});
    }
  for (uint32_t i = 0; i < a.size(); ++i)
    for (uint32_t j = 0; j < nb; ++j) {
      uint32_t src = i * nb + j;
      for (const auto& [ti, c] : a.boundary(i)) t.add_entry(ti * nb + j, src, c);
      for (const auto& [tj, c] : b.boundary(j)) t.add_entry(i * nb + tj, src, c);
    }
  return t;
}

FieldComplex specialize_U(const FreeBigradedComplex& c, UMode mode) {
  FieldComplex f;
  f.mode = mode;
  f.ids.reserve(c.size());
  f.boundary.resize(c.size());
  for (uint32_t s = 0; s < c.size(); ++s) {
    const auto& g = c.generator(s);
    f.ids.push_back(g.id);
    f.grading.push_back(mode == UMode::Zero ? g.grading : Bigrading{g.grading.collapsed(), Half(0)});
    for (const auto& [t, coef] : c.boundary(s)) {
      bool bit = mode == UMode::Zero ? coef.coeff(0) : (coef.exponents().size() % 2 == 1);
      if (bit) f.boundary[s].push_back(t);
    }
  }
  return f;
}

long FieldHomology::total() const {
  long n = 0;
  for (const auto& [g, d] : dims) n += d;
  return n;
}

FieldHomology field_homology(const FieldComplex& f) {
  FieldHomology h;
  auto key = [&](uint32_t i) { return std::make_pair(f.grading[i].maslov, f.grading[i].alexander); };
  for (uint32_t i = 0; i < f.ids.size(); ++i) h.dims[key(i)] += 1;
  detail::F2Echelon ech(f.ids.size());
  for (uint32_t s = 0; s < f.ids.size(); ++s) {
    std::vector<uint32_t> v = f.boundary[s];
    if (v.empty()) continue;
    uint32_t any = v.front();
    if (ech.insert(std::move(v))) {
      h.dims[key(s)] -= 1;
      h.dims[key(any)] -= 1;
    }
  }
  for (auto it = h.dims.begin(); it != h.dims.end();) it = it->second == 0 ? h.dims.erase(it) : std::next(it);
  return h;
}

bool field_is_boundary(const FieldComplex& f, std::vector<uint32_t> cells) {
  detail::sort_mod2(cells);
  detail::F2Echelon ech(f.ids.size());
  for (uint32_t s = 0; s < f.ids.size(); ++s)
    if (!f.boundary[s].empty()) ech.insert(f.boundary[s]);
  return ech.reduce(cells);
}

void write_complex(std::ostream& os, const FreeBigradedComplex& c) {
  os << "generators " << c.size() << "\n";
  for (const auto& g : c.generators())
    os << g.id << " " << g.grading.maslov.str() << " " << g.grading.alexander.str() << " " << g.spinc << "\n";
  for (uint32_t s = 0; s < c.size(); ++s)
    for (const auto& [t, coef] : c.boundary(s))
      for (auto e : coef.exponents()) os << "entry " << c.generator(t).id << " " << c.generator(s).id << " " << e << "\n";
}

FreeBigradedComplex read_complex(std::istream& is) {
  auto lines = tokenize_lines(is);
  FreeBigradedComplex c;
  if (lines.empty()) throw ParseError(1, 1, "empty complex file");
  const auto& h = lines[0];
  if (h.tokens.size() != 2 || h.tokens[0].text != "generators")
    throw ParseError(h.number, 1, "expected 'generators N'");
  long n = parse_long(h.tokens[1], h.number);
  if (n < 0 || size_t(n) >= lines.size() + 1) throw ParseError(h.number, h.tokens[1].col, "bad generator count");
  for (long i = 1; i <= n; ++i) {
    if (size_t(i) >= lines.size()) throw ParseError(h.number, 1, "missing generator lines");
    const auto& ln = lines[i];
    if (ln.tokens.size() != 4) throw ParseError(ln.number, 1, "expected 'id maslov alexander spinc'");
    Bigrading g;
    try {
      g = {Half::parse(ln.tokens[1].text), Half::parse(ln.tokens[2].text)};
    } catch (const std::exception& e) {
      throw ParseError(ln.number, ln.tokens[1].col, e.what());
    }
    if (c.find(ln.tokens[0].text) >= 0) throw ParseError(ln.number, 1, "duplicate id " + ln.tokens[0].text);
    c.add_generator({ln.tokens[0].text, g, ln.tokens[3].text});
  }
  for (size_t i = size_t(n) + 1; i < lines.size(); ++i) {
    const auto& ln = lines[i];
    if (ln.tokens.size() != 4 || ln.tokens[0].text != "entry")
      throw ParseError(ln.number, 1, "expected 'entry target source exponent'");
    long t = c.find(ln.tokens[1].text), s = c.find(ln.tokens[2].text);
    if (t < 0) throw ParseError(ln.number, ln.tokens[1].col, "unknown generator " + ln.tokens[1].text);
    if (s < 0) throw ParseError(ln.number, ln.tokens[2].col, "unknown generator " + ln.tokens[2].text);
    long e = parse_long(ln.tokens[3], ln.number);
    if (e < 0) throw ParseError(ln.number, ln.tokens[3].col, "negative exponent");
    c.add_entry(uint32_t(t), uint32_t(s), UPoly::monomial(uint32_t(e)));
  }
  return c;
}

}  // namespace lf
