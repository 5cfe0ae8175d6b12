#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lf/cli.hpp"
#include "oracles.hpp"

using lf::cli::run;
using nlohmann::json;

namespace {

std::string path(const std::string& name) { return std::string(LF_TEST_DATA) + "/" + name; }

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string value(const std::string& report, const std::string& key) {
  std::istringstream is(report);
  std::string line;
  while (std::getline(is, line))
    if (line.rfind(key + " ", 0) == 0) return line.substr(key.size() + 1);
  return "<missing " + key + ">";
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "lfh_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("grid homology reports") {
  auto r = call({"grid", "homology", path("unknot2.grid")});
  REQUIRE(r.code == lf::cli::kOk);
  CHECK(value(r.out, "schema") == lf::cli::kReportSchema);
  CHECK(value(r.out, "homology.link") == "F[U]_(0,0)");
  CHECK(value(r.out, "invariant.class") == "nonzero height=inf depth=0 grading=(0,0)");
  CHECK(value(r.out, "checks.pass") == "true");

  r = call({"grid", "homology", path("hopf_plus.grid")});
  CHECK(value(r.out, "homology.link") == "F[U]_(0,0) + F[U]_(1,1) + (F[U]/U)_(0,0)");
  CHECK(value(r.out, "input.digest") == lf::cli::digest(oracle::data("hopf_plus.grid")));
}

TEST_CASE("reports are deterministic") {
  for (std::vector<std::string> args :
       {std::vector<std::string>{"grid", "homology", path("trefoil.grid")},
        {"--json", "grid", "homology", path("trefoil.grid")},
        {"--threads", "2", "grid", "homology", path("trefoil.grid")},
        {"diagram", "homology", path("unlink.hd")},
        {"calc", "pair@1 L_{0,2} # L_{1,2} # H+ # L(1)"}}) {
    auto a = call(args), b = call(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
  // thread count does not change the result
  auto one = call({"--threads", "1", "grid", "homology", path("trefoil.grid")});
  auto two = call({"--threads", "2", "grid", "homology", path("trefoil.grid")});
  CHECK(one.out == two.out);
  auto timed = call({"--timing", "grid", "homology", path("unknot2.grid")});
  CHECK(timed.out.find("timing") != std::string::npos);
  CHECK(call({"grid", "homology", path("unknot2.grid")}).out.find("timing") == std::string::npos);
}

TEST_CASE("json reports") {
  auto r = call({"--json", "grid", "invariant", path("unknot2.grid")});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["schema"] == lf::cli::kReportSchema);
  CHECK(j["operation"] == "grid invariant");
  CHECK(j["invariant"]["class"]["zero"] == false);
  CHECK(j["invariant"]["class"]["height"] == "inf");
  CHECK(j["invariant"]["class"]["grading"]["maslov"] == 0);
  CHECK(j["classical"]["tb"] == -1);

  auto d = json::parse(call({"--json", "diagram", "homology", path("unknot_torus.hd")}).out);
  CHECK(d["homology"]["text"] == "F[U]_(0,0)");
  CHECK(d["homology"]["hat_dimension"] == 1);
}

TEST_CASE("exit codes") {
  auto missing = call({"grid", "homology", path("nope.grid")});
  CHECK(missing.code == lf::cli::kParse);

  auto bad = scratch("bad.grid");
  std::ofstream(bad) << "N 2\nO: 0 1\nX: 1 x\n";
  auto r = call({"grid", "homology", bad.string()});
  CHECK(r.code == lf::cli::kParse);
  CHECK(r.err.find("line 3, column 6") != std::string::npos);

  CHECK(call({"calc", "L(1) #"}).code == lf::cli::kParse);
  CHECK(call({"calc", "Q7"}).code == lf::cli::kParse);
  CHECK(call({"frobnicate"}).code == lf::cli::kParse);

  r = call({"openbook", "validate", path("unlink_page.ob")});
  CHECK(r.code == lf::cli::kConsistency);
  CHECK(value(r.out, "conditions.1") == "fail");
  CHECK(value(r.out, "conditions.2") == "pass");

  r = call({"openbook", "slide", path("unlink.ob"), "--arc", "a3", "--over", "a1"});
  CHECK(r.code != 0);
  CHECK(r.err.find("distinguished") != std::string::npos);

  CHECK(call({"--memory-limit", "1", "grid", "homology", path("t27.grid")}).code == lf::cli::kResource);
  CHECK(call({"diagram", "homology", path("nope.hd")}).code == lf::cli::kParse);
}

TEST_CASE("open book pipeline") {
  auto r = call({"openbook", "validate", path("unknot_annulus.ob")});
  CHECK(r.code == 0);
  for (const char* c : {"conditions.1", "conditions.2", "conditions.3", "conditions.4"}) CHECK(value(r.out, c) == "pass");

  auto out = scratch("annulus.hd");
  r = call({"openbook", "build-diagram", path("unknot_annulus.ob"), "-o", out.string()});
  REQUIRE(r.code == 0);
  auto h = call({"diagram", "homology", out.string()});
  CHECK(value(h.out, "homology") == "F[U]_(0,0)");
  CHECK(value(h.out, "invariant") == "nonzero height=inf depth=0 grading=(0,0)");

  auto st = scratch("stab.ob");
  r = call({"openbook", "stabilize", path("unknot_annulus.ob"), "--segment1", "s1", "--segment2", "s2", "--gamma",
            "a2+", "-o", st.string()});
  REQUIRE(r.code == 0);
  auto sd = scratch("stab.hd");
  REQUIRE(call({"openbook", "build-diagram", st.string(), "-o", sd.string()}).code == 0);
  CHECK(value(call({"diagram", "homology", sd.string()}).out, "homology") == "F[U]_(0,0)");
}

TEST_CASE("calculus and catalog") {
  auto r = call({"calc", "L(1) # L(1)"});
  REQUIRE(r.code == 0);
  CHECK(value(r.out, "legendrian.contact.d3") == "-2");
  CHECK(value(r.out, "legendrian.hat") == "nonzero");

  auto t = call({"calc", "O stab- pushoff"});
  CHECK(value(t.out, "transverse.sl") == "-1");

  auto list = call({"catalog", "list"});
  CHECK(list.code == 0);
  CHECK(list.out.find("K_-6") != std::string::npos);
  CHECK(call({"catalog", "show", "nope"}).code != 0);
  auto show = call({"catalog", "show", "L(2)"});
  CHECK(value(show.out, "legendrian.tb") == "10");
}

TEST_CASE("grid stabilize and sum") {
  auto st = scratch("stab.grid");
  auto r = call({"grid", "stabilize", path("unknot2.grid"), "--sign", "+", "-o", st.string()});
  REQUIRE(r.code == 0);
  auto h = call({"grid", "homology", st.string()});
  CHECK(value(h.out, "classical.tb") == "-2");
  CHECK(value(h.out, "classical.rot") == "1");

  auto sum = scratch("sum.grid");
  r = call({"grid", "sum", path("unknot2.grid"), path("trefoil.grid"), "-o", sum.string()});
  REQUIRE(r.code == 0);
  auto s = call({"grid", "homology", sum.string()});
  auto t = call({"grid", "homology", path("trefoil.grid")});
  CHECK(value(s.out, "homology.link") == value(t.out, "homology.link"));
}

TEST_CASE("thread count from the environment") {
  auto base = call({"grid", "homology", path("hopf_minus.grid")});
  setenv("LF_THREADS", "2", 1);
  auto env = call({"grid", "homology", path("hopf_minus.grid")});
  unsetenv("LF_THREADS");
  CHECK(env.code == 0);
  CHECK(env.out == base.out);
}
