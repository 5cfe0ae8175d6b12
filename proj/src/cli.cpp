#include "lf/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "lf/calc_expr.hpp"
#include "lf/calculus.hpp"
#include "lf/errors.hpp"
#include "lf/grid.hpp"
#include "lf/heegaard.hpp"
#include "lf/openbook.hpp"

namespace lf::cli {

using Json = nlohmann::ordered_json;

std::string digest(const std::string& bytes) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

namespace {

class InputError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  bool json = false;
  bool timing = false;
  unsigned threads = 1;
  uint64_t memory_mb = 4096;
  std::string output;
};

unsigned default_threads() {
  if (const char* env = std::getenv("LF_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return unsigned(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json half(Half h) {
  if (h.is_integer()) return h.to_int();
  return double(h.twice()) / 2;
}

Json bigrading(const Bigrading& b) { return Json{{"maslov", half(b.maslov)}, {"alexander", half(b.alexander)}}; }

Json decomposition(const ModuleDecomposition& m) {
  auto c = m.canonical();
  Json free = Json::array(), tors = Json::array();
  for (const auto& g : c.free_part) free.push_back(bigrading(g));
  for (const auto& t : c.torsion_part) {
    Json e = bigrading(t.grading);
    e["order"] = t.order;
    tors.push_back(e);
  }
  return Json{{"text", c.str()}, {"rank", c.rank()}, {"hat_dimension", c.hat_dimension()}, {"free", free},
              {"torsion", tors}};
}

Json position(const ClassPosition& p) {
  Json j{{"text", p.str()}, {"zero", p.is_zero}};
  if (!p.is_zero) {
    j["height"] = p.height.str();
    j["depth"] = p.depth;
    j["grading"] = bigrading(p.grading);
    j["non_torsion"] = p.height.is_infinite();
    j["hat_nonzero"] = p.depth == 0;
  }
  return j;
}

Json check(const std::string& name, Half expected, Half actual) {
  return Json{{"name", name}, {"expected", half(expected)}, {"actual", half(actual)}, {"pass", expected == actual}};
}

Json contact(const calc::ContactLabel& c) {
  return Json{{"manifold", c.manifold},         {"d3", half(c.d3)},
              {"spinc", c.spinc_tag},           {"overtwisted", c.overtwisted},
              {"c_hat_nonzero", c.c_hat_nonzero}, {"convention", c.convention}};
}

Json status(const calc::InvariantStatus& s) {
  Json j{{"text", s.str()}, {"zero", s.zero}};
  if (!s.zero) {
    j["height"] = s.height.str();
    j["depth"] = s.depth;
    j["grading"] = bigrading(s.grading);
  }
  return j;
}

Json descriptor(const calc::LegendrianDescriptor& d) {
  Json link = Json::array();
  for (const auto& row : d.linking) link.push_back(row);
  Json j{{"name", d.name},
         {"n", d.n()},
         {"tb", d.tb()},
         {"rot", d.rot()},
         {"tb_components", d.tb_components},
         {"rot_components", d.rot_components},
         {"linking", link},
         {"contact", contact(d.contact)},
         {"status", status(d.status)},
         {"hat", d.status.hat_nonzero() ? "nonzero" : "zero"},
         {"loose", d.loose},
         {"split", d.split},
         {"classical_source", d.derived_classical ? "derived" : "tabulated"}};
  j["classical_grading"] = bigrading(calc::gradings_from_classical(d));
  auto rep = calc::vanishing_and_torsion(d);
  j["consistency"] = Json{{"pass", rep.ok()}, {"failures", rep.failures}};
  return j;
}

Json transverse(const calc::TransverseDescriptor& d) {
  return Json{{"name", d.name}, {"n", d.n}, {"sl", d.sl}, {"contact", contact(d.contact)}, {"status", status(d.status)}};
}

void render(const Json& j, const std::string& key, std::ostream& os) {
  auto scalar = [](const Json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  };
  if (j.is_object()) {
    if (!key.empty() && j.contains("text")) {
      os << key << ' ' << scalar(j["text"]) << '\n';
      return;
    }
    for (const auto& [k, v] : j.items()) render(v, key.empty() ? k : key + "." + k, os);
  } else if (j.is_array()) {
    bool flat = std::all_of(j.begin(), j.end(), [](const Json& v) { return v.is_primitive(); });
    if (flat) {
      os << key;
      if (j.empty()) os << " -";
      for (const auto& v : j) os << ' ' << scalar(v);
      os << '\n';
    } else {
      for (size_t i = 0; i < j.size(); ++i) render(j[i], key + "." + std::to_string(i + 1), os);
    }
  } else {
    os << key << ' ' << scalar(j) << '\n';
  }
}

class Runner {
 public:
  Runner(std::ostream& out) : out_(out) {}

  void emit(Json report) {
    if (opt.timing) {
      double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
      report["timing"] = Json{{"seconds", s}};
    }
    if (opt.json)
      out_ << report.dump(2) << '\n';
    else
      render(report, "", out_);
  }

  Json header(const std::string& op) { return Json{{"schema", kReportSchema}, {"operation", op}}; }

  Json input(const std::string& path, const std::string& text) { return Json{{"path", path}, {"digest", digest(text)}}; }

  // Writes a produced file to -o or prints it.
  void produce(const std::string& op, const Json& in, const std::string& text) {
    if (!opt.output.empty()) {
      std::ofstream f(opt.output, std::ios::binary);
      if (!f) throw InputError("cannot write " + opt.output);
      f << text;
      Json r = header(op);
      r["input"] = in;
      r["written"] = Json{{"path", opt.output}, {"digest", digest(text)}};
      emit(r);
    } else if (opt.json) {
      Json r = header(op);
      r["input"] = in;
      r["output"] = text;
      emit(r);
    } else {
      out_ << text;
    }
  }

  void grid_report(const std::string& path, bool full) {
    auto text = read_file(path);
    auto g = grid::parse_grid(text);
    grid::EngineOptions eo;
    eo.threads = opt.threads;
    eo.memory_limit = opt.memory_mb << 20;
    auto gh = grid::grid_homology(g, eo);
    auto cl = grid::classical_invariants(g);
    auto lg = grid::gradings(g, grid::invariant_generator(g, grid::Corner::Plus));
    int n = cl.n, tb = cl.tb(), rot = cl.rot();
    Json r = header(full ? "grid homology" : "grid invariant");
    r["input"] = input(path, text);
    r["grid"] = Json{{"N", g.N}, {"components", n}, {"generators", gh.generators}};
    if (full) r["homology"] = Json{{"link", decomposition(gh.link)}, {"collapsed", decomposition(gh.collapsed)}};
    r["invariant"] = Json{{"class", position(gh.invariant)}, {"generator_grading", bigrading(lg)}};
    r["companion"] = Json{{"class", position(gh.companion)}};
    r["classical"] = Json{{"tb", tb}, {"rot", rot}, {"tb_components", cl.tb_component}, {"rot_components", cl.rot_component}};
    Half A = Half::from_twice(tb - rot + n);
    Json checks = Json::array();
    checks.push_back(check("alexander_from_classical", A, lg.alexander));
    checks.push_back(check("maslov_from_classical", Half(tb - rot + 1), lg.maslov));
    checks.push_back(check("maslov_from_alexander", 2 * lg.alexander + Half(1 - n), lg.maslov));
    if (!gh.invariant.is_zero) checks.push_back(check("class_maslov", lg.maslov, gh.invariant.grading.maslov));
    bool pass = std::all_of(checks.begin(), checks.end(), [](const Json& c) { return c["pass"].get<bool>(); });
    r["checks"] = Json{{"pass", pass}, {"list", checks}};
    emit(r);
  }

  void grid_stabilize(const std::string& path, const std::string& sign, int row) {
    auto text = read_file(path);
    auto g = grid::parse_grid(text);
    if (sign != "+" && sign != "-") throw InputError("--sign must be + or -");
    auto s = grid::legendrian_stabilize(g, sign == "+" ? 1 : -1, row);
    std::ostringstream os;
    grid::write_grid(os, s);
    produce("grid stabilize", input(path, text), os.str());
  }

  void grid_sum(const std::string& a, const std::string& b, int ca, int cb) {
    auto ta = read_file(a), tb = read_file(b);
    auto s = grid::connected_sum(grid::parse_grid(ta), grid::parse_grid(tb), ca, cb);
    std::ostringstream os;
    grid::write_grid(os, s);
    produce("grid sum", Json::array({input(a, ta), input(b, tb)}), os.str());
  }

  void ob_validate(const std::string& path) {
    auto text = read_file(path);
    auto b = ob::parse_openbook(text);
    auto rep = ob::validate_adapted(b.page, b.arcs, b.link);
    Json r = header("openbook validate");
    r["input"] = input(path, text);
    r["page"] = Json{{"genus", b.page.genus()},
                     {"boundary_components", b.page.boundary_components()},
                     {"arcs", b.page.arc_names.size()},
                     {"cells", b.page.polygons.size()},
                     {"components", b.link.components.size()},
                     {"monodromy", b.has_monodromy()}};
    Json conds = Json::object();
    for (int c = 1; c <= 4; ++c)
      conds[std::to_string(c)] = std::count(rep.failed.begin(), rep.failed.end(), c) ? "fail" : "pass";
    r["conditions"] = conds;
    r["adapted"] = rep.ok();
    r["failures"] = rep.messages;
    emit(r);
    if (!rep.ok()) throw ReportedFailure();
  }

  void ob_build(const std::string& path) {
    auto text = read_file(path);
    auto b = ob::parse_openbook(text);
    produce("openbook build-diagram", input(path, text), hd::to_string(hd::build_diagram(b)));
  }

  void ob_slide(const std::string& path, const std::string& arc, const std::string& over, const std::string& seg) {
    auto text = read_file(path);
    auto b = ob::parse_openbook(text);
    int i = b.page.arc_index(arc), j = b.page.arc_index(over);
    if (i < 0) throw InputError("unknown arc " + arc);
    if (j < 0) throw InputError("unknown arc " + over);
    produce("openbook slide", input(path, text), ob::to_string(ob::admissible_arc_slide(b, i, j, seg)));
  }

  void ob_stabilize(const std::string& path, const ob::StabilizationSpec& spec) {
    auto text = read_file(path);
    auto b = ob::parse_openbook(text);
    produce("openbook stabilize", input(path, text), ob::to_string(ob::positive_stabilization(b, spec)));
  }

  void diagram_homology(const std::string& path) {
    auto text = read_file(path);
    auto d = hd::parse_diagram(text);
    auto adm = hd::admissibility_check(d);
    if (adm.h1_order == 0) throw ConsistencyError("intersection matrix is singular: not a rational homology sphere");
    auto nice = hd::niceness_check(d);
    Json r = header("diagram homology");
    r["input"] = input(path, text);
    r["diagram"] = Json{{"genus", d.genus},
                        {"curves", d.curves()},
                        {"components", d.components},
                        {"points", d.points.size()},
                        {"regions", d.regions.size()},
                        {"generators", hd::enumerate_generators(d).size()}};
    r["admissibility"] = Json{{"admissible", adm.admissible},
                              {"h1_order", adm.h1_order},
                              {"periodic_domains", adm.periodic_domains.size()},
                              {"message", adm.message}};
    r["nice"] = nice.nice;
    if (adm.admissible && nice.nice) {
      auto h = hd::diagram_homology(d);
      r["differential"] = "available";
      r["spinc_classes"] = h.spinc_classes;
      r["absolute"] = h.absolute;
      r["homology"] = decomposition(h.homology);
      r["invariant"] = position(h.invariant);
    } else {
      r["differential"] = nice.nice ? "unavailable: diagram is not admissible" : "unavailable: diagram is not nice";
      if (adm.admissible) {
        auto gd = hd::compute_gradings(d);
        std::set<std::string> classes(gd.spinc.begin(), gd.spinc.end());
        r["spinc_classes"] = classes.size();
        r["absolute"] = gd.absolute;
      }
    }
    emit(r);
  }

  void calc(const std::string& expr) {
    auto res = calc::evaluate(expr);
    Json r = header("calc");
    r["input"] = Json{{"expression", expr}, {"digest", digest(expr)}};
    if (res.transverse) {
      r["transverse"] = transverse(res.transverse_value());
    } else {
      r["legendrian"] = descriptor(res.legendrian());
      if (res.pair)
        r["alexander_pair"] = Json{{"edge", res.pair_edge}, {"s1", half(res.pair->s1)}, {"s2", half(res.pair->s2)}};
    }
    emit(r);
  }

  void catalog_list() {
    if (opt.json) {
      Json r = header("catalog list");
      r["names"] = calc::catalog_names();
      emit(r);
      return;
    }
    for (const auto& n : calc::catalog_names()) out_ << n << '\n';
  }

  void catalog_show(const std::string& name) {
    auto d = calc::lookup(name);
    if (!d) throw InputError("unknown catalog name " + name);
    Json r = header("catalog show");
    r["legendrian"] = descriptor(*d);
    emit(r);
  }

  struct ReportedFailure {};

  Options opt;

 private:
  std::ostream& out_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Runner R(out);
  R.opt.threads = default_threads();
  CLI::App app{"Legendrian invariants from grids, open books and Heegaard diagrams", "lfh"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_flag("--json", R.opt.json, "structured report");
  app.add_flag("--timing", R.opt.timing, "add wall-clock timing to the report");
  app.add_option("--threads", R.opt.threads, "worker threads (default: LF_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
  app.add_option("--memory-limit", R.opt.memory_mb, "abort grid runs estimated above this many MiB")
      ->check(CLI::PositiveNumber);

  std::function<void()> action;
  std::string path, path2, sign = "+", arc, over, segment, seg1, seg2, name, gamma, expr;
  int row = 0, ca = 0, cb = 0;
  bool general = false;

  auto* grid = app.add_subcommand("grid", "grid diagrams");
  grid->require_subcommand(1);
  auto* gh = grid->add_subcommand("homology", "homology, invariant class and grading checks");
  gh->add_option("file", path)->required();
  gh->callback([&] { action = [&] { R.grid_report(path, true); }; });
  auto* gi = grid->add_subcommand("invariant", "invariant class and grading checks");
  gi->add_option("file", path)->required();
  gi->callback([&] { action = [&] { R.grid_report(path, false); }; });
  auto* gs = grid->add_subcommand("stabilize", "Legendrian stabilization");
  gs->add_option("file", path)->required();
  gs->add_option("--sign", sign, "+ or -");
  gs->add_option("--row", row, "row on the component to stabilize");
  gs->add_option("-o,--output", R.opt.output);
  gs->callback([&] { action = [&] { R.grid_stabilize(path, sign, row); }; });
  auto* gsum = grid->add_subcommand("sum", "Legendrian connected sum");
  gsum->add_option("first", path)->required();
  gsum->add_option("second", path2)->required();
  gsum->add_option("--component-a", ca);
  gsum->add_option("--component-b", cb);
  gsum->add_option("-o,--output", R.opt.output);
  gsum->callback([&] { action = [&] { R.grid_sum(path, path2, ca, cb); }; });

  auto* obk = app.add_subcommand("openbook", "abstract open books");
  obk->require_subcommand(1);
  auto* ov = obk->add_subcommand("validate", "check the adapted conditions");
  ov->add_option("file", path)->required();
  ov->callback([&] { action = [&] { R.ob_validate(path); }; });
  auto* ob_b = obk->add_subcommand("build-diagram", "emit the Heegaard diagram");
  ob_b->add_option("file", path)->required();
  ob_b->add_option("-o,--output", R.opt.output);
  ob_b->callback([&] { action = [&] { R.ob_build(path); }; });
  auto* osl = obk->add_subcommand("slide", "admissible arc slide");
  osl->add_option("file", path)->required();
  osl->add_option("--arc", arc, "arc to slide")->required();
  osl->add_option("--over", over, "arc slid over")->required();
  osl->add_option("--segment", segment, "boundary segment between the two arcs");
  osl->add_option("-o,--output", R.opt.output);
  osl->callback([&] { action = [&] { R.ob_slide(path, arc, over, segment); }; });
  auto* ost = obk->add_subcommand("stabilize", "positive stabilization");
  ost->add_option("file", path)->required();
  ost->add_option("--segment1", seg1, "segment holding the first foot")->required();
  ost->add_option("--segment2", seg2, "segment holding the second foot")->required();
  ost->add_option("--gamma", gamma, "crossing tokens of the twist curve, e.g. \"a1+ a3-\"")->required();
  ost->add_option("--name", name, "name of the new arc");
  ost->add_flag("--general", general, "skip the L-elementary requirement");
  ost->add_option("-o,--output", R.opt.output);
  ost->callback([&] {
    action = [&] {
      ob::StabilizationSpec spec;
      spec.segment1 = seg1;
      spec.segment2 = seg2;
      spec.arc_name = name;
      std::istringstream is(gamma);
      for (std::string t; is >> t;) spec.gamma.push_back(t);
      spec.l_elementary = !general;
      R.ob_stabilize(path, spec);
    };
  });

  auto* dg = app.add_subcommand("diagram", "Heegaard diagrams");
  dg->require_subcommand(1);
  auto* dh = dg->add_subcommand("homology", "admissibility, niceness and homology");
  dh->add_option("file", path)->required();
  dh->callback([&] { action = [&] { R.diagram_homology(path); }; });

  auto* cc = app.add_subcommand("calc", "evaluate a calculus expression");
  cc->add_option("expression", expr)->required();
  cc->callback([&] { action = [&] { R.calc(expr); }; });

  auto* cat = app.add_subcommand("catalog", "catalog of Legendrian links");
  cat->require_subcommand(1);
  cat->add_subcommand("list", "catalog names")->callback([&] { action = [&] { R.catalog_list(); }; });
  auto* cs = cat->add_subcommand("show", "descriptor of a catalog entry");
  cs->add_option("name", name)->required();
  cs->callback([&] { action = [&] { R.catalog_show(name); }; });

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParse;
  }

  auto fail = [&](int code, const char* kind, const std::string& msg) {
    err << "error: " << msg << '\n';
    if (R.opt.json) out << Json{{"schema", kReportSchema}, {"error", {{"kind", kind}, {"message", msg}}}}.dump(2) << '\n';
    return code;
  };
  try {
    if (action) action();
  } catch (const Runner::ReportedFailure&) {
    return kConsistency;
  } catch (const ParseError& e) {
    return fail(kParse, "parse", e.what());
  } catch (const InputError& e) {
    return fail(kParse, "input", e.what());
  } catch (const ResourceLimitError& e) {
    return fail(kResource, "resource", e.what());
  } catch (const std::bad_alloc&) {
    return fail(kResource, "resource", "out of memory; reduce the grid size");
  } catch (const std::exception& e) {
    return fail(kConsistency, "consistency", e.what());
  }
  return kOk;
}

}  // namespace lf::cli
