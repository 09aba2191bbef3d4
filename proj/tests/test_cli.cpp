#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "arbor/cli.hpp"
#include "arbor/io.hpp"

using namespace arbor;

namespace {

const std::string kData = ARBOR_EXAMPLES_DIR;

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

std::string data(const std::string& name) { return kData + "/" + name; }

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("arbor_test_" + name)).string();
}

std::string temp_file(const std::string& name, const std::string& contents) {
  std::string path = temp_path(name);
  std::ofstream(path) << contents;
  return path;
}

}  // namespace

TEST_CASE("bound on the full GL2(Z/4) file") {
  auto r = run({"bound", "--group", data("gl2_mod4.json"), "--d", "0"});
  REQUIRE(r.code == 0);
  CHECK(contains(r.out, "bound          4\n"));
  auto r1 = run({"bound", "--group", data("gl2_mod4.json"), "--d", "1"});
  CHECK(contains(r1.out, "bound          16\n"));
  auto j = run({"bound", "--group", data("gl2_mod4.json"), "--d", "0", "--format", "json"});
  REQUIRE(j.code == 0);
  auto rep = json::parse(j.out).get<BoundReport>();
  CHECK(rep.bound == 4);
  CHECK(rep.params.r == 1);
  CHECK(rep.params.s == 0);
  CHECK(rep.params.index == 1);
}

TEST_CASE("bound input errors") {
  auto r = run({"bound", "--group", data("even_det.json"), "--d", "0"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "/generators/0"));
  CHECK(run({"bound", "--group", data("missing.json"), "--d", "0"}).code == 2);
  CHECK(run({"bound", "--group", data("gl2_mod4.json")}).code == 2);
  CHECK(run({"bound", "--group", data("gl2_mod4.json"), "--d", "-1"}).code == 2);
  CHECK(run({"bound", "--group", data("oversized.json"), "--d", "0"}).code == 3);
  CHECK(run({"bound", "--group", data("gl2_mod4.json"), "--d", "0", "--format", "xml"}).code == 2);
  auto bad = temp_file("bad.json", "{\"ell\": 4, \"level\": 1, \"kind\": \"linear\", \"generators\": [[[1,0],[0,1]]]}");
  auto rb = run({"bound", "--group", bad, "--d", "0"});
  CHECK(rb.code == 2);
  CHECK(contains(rb.err, "/ell"));
  auto junk = temp_file("junk.json", "{\"ell\": 2,");
  CHECK(run({"bound", "--group", junk, "--d", "0"}).code == 2);
  std::remove(bad.c_str());
  std::remove(junk.c_str());
}

TEST_CASE("density command") {
  auto r = run({"density", "--ell", "2", "--level", "1"});
  REQUIRE(r.code == 0);
  CHECK(contains(r.out, "5/8"));
  auto r4 = run({"density", "--ell", "2", "--level", "4", "--format", "json", "--threads", "4"});
  REQUIRE(r4.code == 0);
  auto rep = json::parse(r4.out).get<FixFractionReport>();
  CHECK(rep.nonincreasing);
  CHECK(rep.above_closed_form);
  CHECK(rep.closed_form == mpq_class(11, 21));
  CHECK(rep.fractions.front() == mpq_class(5, 8));
  CHECK(run({"density", "--ell", "4", "--level", "1"}).code == 2);
  CHECK(run({"density", "--ell", "2", "--level", "12"}).code == 3);
  auto img = run({"density", "--level", "2", "--image", data("affine_full_mod2.json")});
  REQUIRE(img.code == 0);
  CHECK(contains(img.out, "281/512"));
}

TEST_CASE("h1 command") {
  auto r = run({"h1", "--group", data("scalar3_mod4.json"), "--module-level", "2"});
  REQUIRE(r.code == 0);
  CHECK(contains(r.out, "Z/2 × Z/2, exponent 2, Sah bound 2"));
  auto t = run({"h1", "--group", data("trivial_mod2.json"), "--module-level", "1"});
  REQUIRE(t.code == 0);
  CHECK(contains(t.out, "trivial"));
  CHECK(run({"h1", "--group", data("oversized.json"), "--module-level", "1"}).code == 3);
  CHECK(run({"h1", "--group", data("scalar3_mod4.json"), "--module-level", "3"}).code == 2);
  auto tw = run({"h1", "--group", data("scalar3_mod4.json"), "--module-level", "2", "--tower", "2..3"});
  REQUIRE(tw.code == 0);
  CHECK(contains(tw.out, "level 2"));
  CHECK(contains(tw.out, "level 3"));
  CHECK(run({"h1", "--group", data("scalar3_mod4.json"), "--module-level", "2", "--tower", "3-2"}).code == 2);
  auto j = run({"h1", "--group", data("scalar3_mod4.json"), "--module-level", "2", "--format", "json"});
  auto res = json::parse(j.out).get<H1Result>();
  CHECK(res.factors == std::vector<std::uint64_t>{2, 2});
}

TEST_CASE("scan command") {
  auto r = run({"scan", "--curve", data("curve_37a.json"), "--ell", "2", "--limit", "3000"});
  REQUIRE(r.code == 0);
  CHECK(contains(r.out, "11/21"));
  auto r8 = run({"scan", "--curve", data("curve_37a.json"), "--ell", "2", "--limit", "3000", "--threads", "8"});
  CHECK(r8.out == r.out);
  auto e = run({"scan", "--curve", data("curve_37a.json"), "--ell", "2", "--limit", "1"});
  CHECK(e.code == 4);
  CHECK(contains(e.err, "empty scan"));
  auto csv = temp_path("scan.csv");
  auto rc = run({"scan", "--curve", data("curve_37a.json"), "--ell", "2", "--limit", "50", "--csv", csv});
  REQUIRE(rc.code == 0);
  std::ifstream in(csv);
  std::string header, first, bad;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header == "prime,good,coprime_order");
  CHECK(first == "2,1,1");
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("37,", 0) == 0) bad = line;
  CHECK(bad == "37,0,0");
  std::remove(csv.c_str());
  CHECK(run({"scan", "--curve", data("curve_torsion.json"), "--ell", "2", "--limit", "100"}).code == 2);
}

TEST_CASE("divide command") {
  auto r = run({"divide", "--curve", data("curve_x2a.json"), "--ell", "2"});
  REQUIRE(r.code == 0);
  CHECK(contains(r.out, "d = 0, strongly 2-indivisible"));
  auto d = run({"divide", "--curve", data("curve_37a_double.json"), "--ell", "2"});
  REQUIRE(d.code == 0);
  CHECK(contains(d.out, "[2]^-1(alpha): (0, 0)"));
  CHECK(contains(d.out, "d = 1"));
  auto t = run({"divide", "--curve", data("curve_torsion.json"), "--ell", "2"});
  CHECK(t.code == 2);
  CHECK(contains(t.err, "point must be non-torsion"));
  CHECK(run({"divide", "--curve", data("curve_37a.json"), "--ell", "5"}).code == 2);
  auto off = temp_file("off.json", "{\"a\": [0, 0, 1, -1, 0], \"point\": [\"1/2\", 3]}");
  auto ro = run({"divide", "--curve", off, "--ell", "2"});
  CHECK(ro.code == 2);
  CHECK(contains(ro.err, "/point"));
  std::remove(off.c_str());
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("file parsing") {
  auto spec = load_group_file(data("affine_full_mod2.json"));
  CHECK(spec.kind() == GroupKind::affine);
  CHECK(spec.generators().size() == 5);
  CHECK(group_to_json(spec) == group_to_json(parse_group(group_to_json(spec))));
  auto c = parse_curve(json::parse(R"({"a": [0, 0, 1, -1, 0], "point": ["0/7", "0"]})"));
  CHECK(c.point == ecq::PointQ::affine(0, 0));
  CHECK(parse_rational(json("-6/4"), "") == mpq_class(-3, 2));
  CHECK(parse_rational(json("123456789012345678901234567890"), "") == mpq_class("123456789012345678901234567890"));
  CHECK_THROWS_AS(parse_rational(json("x/2"), ""), ParseError);
  CHECK_THROWS_AS(parse_rational(json("1/0"), ""), ParseError);
  CHECK_THROWS_AS(parse_rational(json(1.5), ""), ParseError);
  CHECK(rational_string(mpq_class(6, 3)) == "2/1");
  CHECK_THROWS_AS(parse_curve(json::parse(R"({"a": [0, 0, 0, 0, 0], "point": [0, 0]})")), ParseError);
}

TEST_CASE("json records round trip") {
  BoundReport b;
  b.params = {3, 2, 1, 2, 3, 48};
  b.level = 3;
  b.bound = mpz_class("1208925819614629174706176");
  b.s_saturated = true;
  CHECK(json(b).get<BoundReport>() == b);

  H1Result h;
  h.ell = 2;
  h.module_level = 2;
  h.group_level = 3;
  h.group_order = 96;
  h.factors = {2, 4};
  h.exponent = 4;
  h.sah_bound = 4;
  h.log_z1 = 5;
  h.log_b1 = 2;
  CHECK(json(h).get<H1Result>() == h);
  H1Tower t{{2, 3}, {h, h}, true};
  CHECK(json(t).get<H1Tower>() == t);

  FixFractionReport f;
  f.ell = 2;
  f.image = "full";
  f.levels = {1, 2};
  f.fractions = {mpq_class(5, 8), mpq_class(281, 512)};
  f.closed_form = mpq_class(11, 21);
  CHECK(json(f).get<FixFractionReport>() == f);
  f.closed_form.reset();
  CHECK(json(f).get<FixFractionReport>() == f);

  ecq::ScanResult s;
  s.ell = 2;
  s.limit = 1000;
  s.good = 167;
  s.coprime = 93;
  s.skipped = 1;
  s.fraction = mpq_class(93, 167);
  CHECK(json(s).get<ecq::ScanResult>() == s);

  ecq::DivisionReport d;
  d.d = 1;
  d.torsion = ecq::PointQ::at_infinity();
  d.chain = {ecq::PointQ::affine(1, 0), ecq::PointQ::affine(0, 0)};
  d.rational_torsion = {ecq::PointQ::at_infinity(), ecq::PointQ::affine(mpq_class(-1, 4), mpq_class(1, 8))};
  CHECK(json(d).get<ecq::DivisionReport>() == d);
}
