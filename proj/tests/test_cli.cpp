#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qd/cli.hpp"

using namespace qd;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run qd_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string &name) {
  fs::path d = fs::temp_directory_path() / "qd_cli_test";
  fs::create_directories(d);
  return d / name;
}

} // namespace

TEST_CASE("cohomology command") {
  auto r = qd_run({"cohomology", "--n", "3", "--p", "2", "--bundle", "O(0)", "--no-timing"});
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["rows"][0]["h"] == nlohmann::json({1, 0, 0, 0}));
  CHECK(j["engine"] == kEngineVersion);
  CHECK(j["rows"][0]["bound_used"].get<int>() > 0);

  auto s = qd_run({"cohomology", "--n", "3", "--p", "3", "--bundle", "Sym(3, Ustar)", "--format", "csv", "--no-timing"});
  CHECK(s.code == 0);
  CHECK(s.out.rfind("n,p,object,h0,h1,h2,h3,h4,route,status,seconds\n", 0) == 0);
  CHECK(s.out.find("3,3,\"Sym(3,Ustar)\",20,0,0,0,,engine,ok,") != std::string::npos);

  auto t = qd_run({"cohomology", "--n", "3", "--p", "2", "--bundle", "O(0)", "--twist", "-3", "--format", "text"});
  CHECK(t.code == 0);
  CHECK(t.out.find("[0,0,0,1]") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(qd_run({}).code == 1);
  CHECK(qd_run({"cohomology", "--n", "3", "--p", "4", "--bundle", "O(0)"}).code == 1);
  CHECK(qd_run({"cohomology", "--n", "7", "--p", "2", "--bundle", "O(0)"}).code == 1);
  CHECK(qd_run({"cohomology", "--n", "3", "--p", "2", "--bundle", "Sym(2"}).code == 1);
  CHECK(qd_run({"cohomology", "--n", "3", "--p", "2", "--bundle", "O(0)", "--format", "xml"}).code == 1);
  CHECK(qd_run({"verify", "--n", "3", "--p", "2", "--route", "sideways"}).code == 1);
  CHECK(qd_run({"verify", "--n", "3", "--p", "2", "--bogus"}).code == 1);
  CHECK(qd_run({"--help"}).code == 0);

  // Bound exhaustion.
  setenv("QD_MAX_BOUND", "4", 1);
  CHECK(qd_run({"cohomology", "--n", "3", "--p", "3", "--bundle", "Frob(Ustar)"}).code == 3);
  CHECK(qd_run({"verify", "--n", "3", "--p", "3", "--route", "oracle"}).code == 3);
  unsetenv("QD_MAX_BOUND");

  // Outside the budget table without --force.
  auto over = qd_run({"verify", "--n", "3", "--p", "7", "--no-timing"});
  CHECK(over.code == 3);
  CHECK(nlohmann::json::parse(over.out)["rows"][0]["status"] == "over-budget");
}

TEST_CASE("verify command") {
  auto r = qd_run({"verify", "--n", "1", "--p", "2,3,5,7", "--no-timing", "--format", "csv"});
  CHECK(r.code == 0);
  for (unsigned p : {2u, 3u, 5u, 7u})
    CHECK(r.out.find("1," + std::to_string(p) + ",D_1," + std::to_string(p * p) + ",0,,,,both,PASS,") != std::string::npos);

  auto paper = qd_run({"verify", "--n", "3", "--p", "2", "--route", "paper", "--no-timing"});
  CHECK(paper.code == 0);
  auto j = nlohmann::json::parse(paper.out);
  CHECK(j["certificates"][0]["status"] == "proved");
  CHECK(j["rows"][0]["status"] == "PASS");
}

TEST_CASE("report command") {
  auto a = scratch("a.json"), b = scratch("b.json"), bad = scratch("bad.json");
  CHECK(qd_run({"verify", "--n", "1", "--p", "2", "--no-timing", "--out", a.string()}).code == 0);
  CHECK(qd_run({"verify", "--n", "1", "--p", "3", "--no-timing", "--out", b.string()}).code == 0);
  std::ofstream(bad) << "{\"rows\": 3";

  auto two = qd_run({"report", a.string(), b.string()});
  CHECK(two.code == 0);
  auto j = nlohmann::json::parse(two.out);
  CHECK(j["rows"].size() == 2);
  CHECK(j["rows"][0]["p"] == 2);

  auto same = nlohmann::json::parse(qd_run({"report", a.string(), a.string()}).out);
  CHECK(same["rows"].size() == 1);
  CHECK(same["rows"][0]["duplicates"] == 1);

  auto empty = qd_run({"report"});
  CHECK(empty.code == 0);
  CHECK(nlohmann::json::parse(empty.out)["rows"].empty());

  CHECK(qd_run({"report", bad.string()}).code == 1);
  CHECK(qd_run({"report", scratch("missing.json").string()}).code == 1);

  // Round trip: a single report merges to the same rows.
  std::ifstream fa(a);
  auto orig = nlohmann::json::parse(fa);
  auto merged = nlohmann::json::parse(qd_run({"report", a.string()}).out);
  CHECK(merged["rows"] == orig["rows"]);
}

TEST_CASE("byte-identical output without timings") {
  std::vector<std::string> args{"verify", "--n", "2", "--p", "2,3", "--no-timing"};
  auto x = qd_run(args), y = qd_run(args);
  CHECK(x.code == 0);
  CHECK(x.out == y.out);
}
