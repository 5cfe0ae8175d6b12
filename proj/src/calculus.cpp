#include "lf/calculus.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "lf/errors.hpp"

namespace lf::calc {

ContactLabel ContactLabel::standard() { return ContactLabel{}; }

ContactLabel ContactLabel::xi(int i) {
  ContactLabel c;
  c.d3 = Half(i);
  c.overtwisted = true;
  c.c_hat_nonzero = false;
  return c;
}

ContactLabel contact_sum(const ContactLabel& a, const ContactLabel& b) {
  ContactLabel c;
  if (a.manifold == "S3")
    c.manifold = b.manifold;
  else if (b.manifold == "S3")
    c.manifold = a.manifold;
  else
    c.manifold = a.manifold + "#" + b.manifold;
  c.d3 = a.d3 + b.d3;
  c.spinc_tag = a.spinc_tag == b.spinc_tag ? a.spinc_tag : a.spinc_tag + "#" + b.spinc_tag;
  c.overtwisted = a.overtwisted || b.overtwisted;
  c.c_hat_nonzero = a.c_hat_nonzero && b.c_hat_nonzero;
  if (a.convention != b.convention) throw ConsistencyError("mixed d3 conventions");
  c.convention = a.convention;
  return c;
}

InvariantStatus InvariantStatus::vanishing() {
  InvariantStatus s;
  s.zero = true;
  s.height = TowerHeight::finite(0);
  return s;
}

InvariantStatus InvariantStatus::at(TowerHeight k, unsigned d, Bigrading g) {
  if (!k.exceeds(d)) return vanishing();
  InvariantStatus s;
  s.height = k;
  s.depth = d;
  s.grading = g;
  return s;
}

std::string InvariantStatus::str() const {
  if (zero) return "zero";
  return std::string(height.is_infinite() ? "non-torsion" : "torsion") + " height=" + height.str() +
         " depth=" + std::to_string(depth) + " grading=" + grading.str();
}

InvariantStatus tensor(const InvariantStatus& a, const InvariantStatus& b) {
  if (a.zero || b.zero) return InvariantStatus::vanishing();
  return InvariantStatus::at(TowerHeight::min(a.height, b.height), a.depth + b.depth, a.grading + b.grading);
}

InvariantStatus from_position(const ClassPosition& p) {
  if (p.is_zero) return InvariantStatus::vanishing();
  return InvariantStatus::at(p.height, p.depth, p.grading);
}

int LegendrianDescriptor::tb() const {
  int t = 0;
  for (int v : tb_components) t += v;
  for (size_t i = 0; i < linking.size(); ++i)
    for (size_t j = 0; j < linking.size(); ++j)
      if (i != j) t += linking[i][j];
  return t;
}

int LegendrianDescriptor::rot() const {
  int r = 0;
  for (int v : rot_components) r += v;
  return r;
}

Bigrading gradings_from_classical(const LegendrianDescriptor& d) {
  int s = d.tb() - d.rot() + d.n();
  if (s % 2 != 0) throw ConsistencyError(d.name + ": tb - rot + n is odd");
  Half a(s / 2);
  Half m = -d.contact.d3 + Half(d.tb() - d.rot() + 1);
  return {m, a};
}

LegendrianDescriptor knot(std::string name, int tb, int rot, ContactLabel c, TowerHeight k, unsigned depth) {
  LegendrianDescriptor d;
  d.name = std::move(name);
  d.tb_components = {tb};
  d.rot_components = {rot};
  d.linking = {{0}};
  d.contact = std::move(c);
  Bigrading top = gradings_from_classical(d);
  d.status = InvariantStatus::at(k, depth, top);
  return d;
}

static void check_component(const LegendrianDescriptor& d, int c) {
  if (c < 0 || c >= d.n())
    throw std::invalid_argument(d.name + " has no component " + std::to_string(c));
}

static std::string wrap(const std::string& s) {
  bool compound = s.find_first_of("# ") != std::string::npos || s.find("\u2294") != std::string::npos;
  return compound ? "(" + s + ")" : s;
}

LegendrianDescriptor connected_sum(const LegendrianDescriptor& a, const LegendrianDescriptor& b, int ca, int cb) {
  check_component(a, ca);
  check_component(b, cb);
  LegendrianDescriptor r;
  r.name = wrap(a.name) + "#" + wrap(b.name);
  int na = a.n(), nb = b.n();
  // components: a's in order, then b's without cb; cb is merged into ca
  std::vector<int> bmap(nb);
  for (int j = 0, next = na; j < nb; ++j) bmap[j] = j == cb ? ca : next++;
  int n = na + nb - 1;
  r.tb_components = a.tb_components;
  r.rot_components = a.rot_components;
  r.tb_components.resize(n);
  r.rot_components.resize(n);
  r.linking.assign(n, std::vector<int>(n, 0));
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j) r.linking[i][j] = a.linking[i][j];
  for (int j = 0; j < nb; ++j) {
    if (j == cb) {
      r.tb_components[ca] += b.tb_components[j] + 1;
      r.rot_components[ca] += b.rot_components[j];
    } else {
      r.tb_components[bmap[j]] = b.tb_components[j];
      r.rot_components[bmap[j]] = b.rot_components[j];
    }
    for (int k = 0; k < nb; ++k)
      if (j != k) r.linking[bmap[j]][bmap[k]] += b.linking[j][k];
  }
  r.contact = contact_sum(a.contact, b.contact);
  r.status = tensor(a.status, b.status);
  r.loose = a.loose || b.loose;
  r.split = a.split || b.split;
  r.derived_classical = true;
  return r;
}

LegendrianDescriptor disjoint_union(const LegendrianDescriptor& a, const LegendrianDescriptor& b) {
  LegendrianDescriptor r;
  r.name = wrap(a.name) + "\u2294" + wrap(b.name);
  r.tb_components = a.tb_components;
  r.tb_components.insert(r.tb_components.end(), b.tb_components.begin(), b.tb_components.end());
  r.rot_components = a.rot_components;
  r.rot_components.insert(r.rot_components.end(), b.rot_components.begin(), b.rot_components.end());
  int na = a.n(), n = na + b.n();
  r.linking.assign(n, std::vector<int>(n, 0));
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j) r.linking[i][j] = a.linking[i][j];
  for (int i = 0; i < b.n(); ++i)
    for (int j = 0; j < b.n(); ++j) r.linking[na + i][na + j] = b.linking[i][j];
  r.contact = contact_sum(a.contact, b.contact);
  r.status = tensor(tensor(a.status, b.status), unlink2().status);
  r.loose = a.loose || b.loose;
  r.split = true;
  r.derived_classical = true;
  return r;
}

LegendrianDescriptor stabilize(const LegendrianDescriptor& d, int sign, int component) {
  check_component(d, component);
  if (sign != 1 && sign != -1) throw std::invalid_argument("stabilization sign must be +1 or -1");
  LegendrianDescriptor r = d;
  r.name = wrap(d.name) + (sign > 0 ? " stab+" : " stab-");
  r.tb_components[component] -= 1;
  r.rot_components[component] += sign;
  if (sign > 0 && !d.status.zero)
    r.status = InvariantStatus::at(d.status.height, d.status.depth + 1, d.status.grading.u_shift(1));
  r.derived_classical = true;
  return r;
}

TransverseDescriptor transverse_pushoff(const LegendrianDescriptor& d) {
  TransverseDescriptor t;
  t.name = wrap(d.name) + " pushoff";
  t.n = d.n();
  t.sl = d.tb() - d.rot();
  t.contact = d.contact;
  t.status = d.status;
  if ((t.sl + t.n) % 2 != 0) throw ConsistencyError(t.name + ": sl + n is odd");
  if (!t.status.zero) {
    Half a((t.sl + t.n) / 2);
    if (a != t.status.grading.alexander)
      throw ConsistencyError(t.name + ": Alexander grading differs from (sl+n)/2");
  }
  return t;
}

ConsistencyReport vanishing_and_torsion(const LegendrianDescriptor& d) {
  ConsistencyReport rep;
  auto fail = [&](const std::string& s) { rep.failures.push_back(s); };
  int n = d.n();
  if (n < 1) fail("no components");
  if (int(d.rot_components.size()) != n || int(d.linking.size()) != n) fail("component data sizes differ");
  for (int i = 0; i < int(d.linking.size()); ++i) {
    if (int(d.linking[i].size()) != n) {
      fail("linking matrix not square");
      break;
    }
    if (d.linking[i][i] != 0) fail("nonzero linking diagonal");
    for (int j = 0; j < i; ++j)
      if (d.linking[i][j] != d.linking[j][i]) fail("linking matrix not symmetric");
  }
  if (!rep.ok()) return rep;
  if (d.contact.convention != kD3Convention) fail("unknown d3 convention " + d.contact.convention);
  if ((d.tb() - d.rot() + n) % 2 != 0) fail("tb - rot + n is odd");
  if (d.contact.overtwisted && d.contact.c_hat_nonzero) fail("overtwisted structure with nonzero contact invariant");
  if (d.loose && !d.contact.overtwisted) fail("loose link in a tight structure");
  if (d.loose && !d.status.zero) fail("loose link with nonzero invariant");
  if (d.status.zero != !d.status.height.exceeds(d.status.depth)) fail("zero flag disagrees with depth/height");
  if (d.contact.c_hat_nonzero && (d.status.zero || d.status.torsion()))
    fail("contact invariant nonzero but class is not non-torsion");
  if (!d.status.zero && d.status.height.is_infinite() && !d.contact.c_hat_nonzero)
    fail("non-torsion class with vanishing contact invariant");
  if (!d.status.zero && rep.ok()) {
    Bigrading g = gradings_from_classical(d);
    if (g != d.status.grading) fail("status grading " + d.status.grading.str() + " differs from classical " + g.str());
    Half m = -d.contact.d3 + 2 * d.status.grading.alexander + Half(1 - n);
    if (m != d.status.grading.maslov) fail("M != -d3 + 2A + 1 - n");
  }
  return rep;
}

LegendrianDescriptor unknot() {
  return knot("O", -1, 0, ContactLabel::standard(), TowerHeight::infinite(), 0);
}

LegendrianDescriptor unlink2() {
  LegendrianDescriptor d;
  d.name = "O2";
  d.tb_components = {-1, -1};
  d.rot_components = {0, 0};
  d.linking = {{0, 0}, {0, 0}};
  d.status = InvariantStatus::at(TowerHeight::infinite(), 0, {Half(-1), Half(0)});
  d.split = true;
  return d;
}

static LegendrianDescriptor hopf(int lk, unsigned depth, const char* name) {
  LegendrianDescriptor d;
  d.name = name;
  d.tb_components = {-1, -1};
  d.rot_components = {0, 0};
  d.linking = {{0, lk}, {lk, 0}};
  Bigrading top = gradings_from_classical(d);
  d.status = InvariantStatus::at(TowerHeight::infinite(), depth, top);
  return d;
}

LegendrianDescriptor hopf_positive() { return hopf(1, 0, "H+"); }

// the class sits one U-step below a tower top (computed from the 4x4 grid)
LegendrianDescriptor hopf_negative() { return hopf(-1, 1, "H-"); }

LegendrianDescriptor L_family(int j) {
  if (j < 1) throw std::invalid_argument("L(j) needs j >= 1");
  return knot("L(" + std::to_string(j) + ")", 6 + 4 * (j - 1), 7 + 6 * (j - 1), ContactLabel::xi(1 - 2 * j),
              TowerHeight::finite(1), 0);
}

LegendrianDescriptor L_kl(int k, int l) {
  bool known = (k == 0 && l >= 0) || (k == 1 && (l == 1 || l == 2));
  if (!known) throw std::invalid_argument("L_{k,l} is cataloged for k = 0 and for (1,1), (1,2)");
  return knot("L_{" + std::to_string(k) + "," + std::to_string(l) + "}", -6 - 4 * (k + l), -7 - 2 * k - 6 * l,
              ContactLabel::xi(2 * l + 2), TowerHeight::finite(1), 0);
}

LegendrianDescriptor K(int i) {
  LegendrianDescriptor d;
  if (i < 0 && i % 2 == 0)
    d = connected_sum(L_family(-i / 2), L_family(1));
  else if (i < 0)
    d = L_family((1 - i) / 2);
  else if (i > 0 && i % 2 == 0)
    d = L_kl(0, i / 2 - 1);
  else if (i > 0)
    d = connected_sum(L_kl(0, (i + 1) / 2 - 1), L_family(1));
  else
    d = connected_sum(connected_sum(L_kl(0, 0), L_family(1)), L_family(1));
  d.name = "K_" + std::to_string(i);
  d.derived_classical = true;
  return d;
}

LegendrianDescriptor power(const LegendrianDescriptor& d, int times) {
  if (times < 1) throw std::invalid_argument("power needs a positive exponent");
  LegendrianDescriptor r = d;
  for (int t = 1; t < times; ++t) r = connected_sum(r, d, r.n() - 1, 0);
  if (times > 1) r.name = wrap(d.name) + "^" + std::to_string(times);
  return r;
}

LegendrianDescriptor nonloose_family(int n, int d) {
  if (n < 1) throw std::invalid_argument("NL(n,d) needs n >= 1");
  LegendrianDescriptor r = K(d + 1);
  if (n > 1) r = connected_sum(r, power(hopf_positive(), n - 1), 0, 0);
  r = connected_sum(r, L_family(1), r.n() - 1, 0);
  r.name = "NL(" + std::to_string(n) + "," + std::to_string(d) + ")";
  r.split = false;
  r.loose = false;
  return r;
}

std::vector<std::string> catalog_names() {
  std::vector<std::string> v = {"O", "O2", "H+", "H-"};
  for (int j = 1; j <= 5; ++j) v.push_back("L(" + std::to_string(j) + ")");
  for (int l = 0; l <= 3; ++l) v.push_back("L_{0," + std::to_string(l) + "}");
  v.push_back("L_{1,1}");
  v.push_back("L_{1,2}");
  for (int i = -6; i <= 6; ++i) v.push_back("K_" + std::to_string(i));
  v.push_back("NL(2,0)");
  v.push_back("NL(3,0)");
  return v;
}

static bool parse_int(const std::string& s, int& out) {
  if (s.empty()) return false;
  size_t pos = 0;
  try {
    out = std::stoi(s, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == s.size();
}

std::optional<LegendrianDescriptor> lookup(const std::string& name) {
  if (name == "O") return unknot();
  if (name == "O2") return unlink2();
  if (name == "H+") return hopf_positive();
  if (name == "H-") return hopf_negative();
  try {
    int a, b;
    if (name.size() > 3 && name.rfind("L(", 0) == 0 && name.back() == ')' &&
        parse_int(name.substr(2, name.size() - 3), a))
      return L_family(a);
    if (name.size() > 5 && name.rfind("L_{", 0) == 0 && name.back() == '}') {
      std::string in = name.substr(3, name.size() - 4);
      auto comma = in.find(',');
      if (comma != std::string::npos && parse_int(in.substr(0, comma), a) && parse_int(in.substr(comma + 1), b))
        return L_kl(a, b);
    }
    if (name.rfind("K_", 0) == 0) {
      std::string in = name.substr(2);
      if (in.size() > 2 && in.front() == '{' && in.back() == '}') in = in.substr(1, in.size() - 2);
      if (parse_int(in, a)) return K(a);
    }
    if (name.size() > 4 && name.rfind("NL(", 0) == 0 && name.back() == ')') {
      std::string in = name.substr(3, name.size() - 4);
      auto comma = in.find(',');
      if (comma != std::string::npos && parse_int(in.substr(0, comma), a) && parse_int(in.substr(comma + 1), b))
        return nonloose_family(a, b);
    }
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
  return std::nullopt;
}

SumTree sum_leaf(LegendrianDescriptor d) { return SumTree{std::move(d), {}, 0, 0}; }

SumTree sum_node(SumTree a, SumTree b, int ca, int cb) {
  SumTree t;
  t.value = connected_sum(a.value, b.value, ca, cb);
  t.ca = ca;
  t.cb = cb;
  t.children.push_back(std::move(a));
  t.children.push_back(std::move(b));
  return t;
}

int edge_count(const SumTree& t) {
  if (t.children.empty()) return 0;
  return 1 + edge_count(t.children[0]) + edge_count(t.children[1]);
}

static const SumTree* find_edge(const SumTree& t, int& remaining) {
  if (t.children.empty()) return nullptr;
  if (auto* l = find_edge(t.children[0], remaining)) return l;
  if (--remaining == 0) return &t;
  return find_edge(t.children[1], remaining);
}

AlexanderPair alexander_pair(const SumTree& t, int edge) {
  if (!t.value.status.hat_nonzero())
    throw ConsistencyError("Alexander pair undefined: hat invariant of " + t.value.name + " vanishes");
  int remaining = edge;
  const SumTree* node = edge >= 1 ? find_edge(t, remaining) : nullptr;
  if (!node)
    throw std::invalid_argument("edge " + std::to_string(edge) + " out of range 1.." +
                                std::to_string(edge_count(t)));
  const auto& l = node->children[0].value;
  const auto& r = node->children[1].value;
  if (!l.status.hat_nonzero() || !r.status.hat_nonzero())
    throw ConsistencyError("Alexander pair undefined: a summand has vanishing hat invariant");
  return {l.status.grading.alexander, r.status.grading.alexander};
}

bool distinguished(const AlexanderPair& a, const AlexanderPair& b) { return !(a == b); }

static std::string join(const std::vector<int>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

static std::string contact_text(const ContactLabel& c) {
  return c.manifold + " d3=" + c.d3.str() + " spinc=" + c.spinc_tag + " overtwisted=" + (c.overtwisted ? "1" : "0") +
         " c_hat_nonzero=" + (c.c_hat_nonzero ? "1" : "0") + " convention=" + c.convention;
}

std::string to_text(const LegendrianDescriptor& d) {
  std::ostringstream os;
  os << "name " << d.name << "\n";
  os << "n " << d.n() << "\n";
  os << "tb " << d.tb() << "\n";
  os << "rot " << d.rot() << "\n";
  os << "tb_components " << join(d.tb_components) << "\n";
  os << "rot_components " << join(d.rot_components) << "\n";
  os << "linking";
  for (size_t i = 0; i < d.linking.size(); ++i) os << (i ? " ; " : " ") << join(d.linking[i]);
  os << "\n";
  os << "contact " << contact_text(d.contact) << "\n";
  os << "status " << d.status.str() << "\n";
  os << "hat " << (d.status.hat_nonzero() ? "nonzero" : "zero") << "\n";
  os << "loose " << (d.loose ? 1 : 0) << "\n";
  os << "split " << (d.split ? 1 : 0) << "\n";
  os << "classical " << (d.derived_classical ? "derived" : "tabulated") << "\n";
  return os.str();
}

std::string to_text(const TransverseDescriptor& d) {
  std::ostringstream os;
  os << "name " << d.name << "\n";
  os << "n " << d.n << "\n";
  os << "sl " << d.sl << "\n";
  os << "contact " << contact_text(d.contact) << "\n";
  os << "status " << d.status.str() << "\n";
  return os.str();
}

}  // namespace lf::calc
