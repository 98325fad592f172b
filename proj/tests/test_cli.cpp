#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <regex>
#include <sstream>

#include "json.hpp"

#include "flagblocks/cli.hpp"

using flagblocks::cli::run;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result cli(std::initializer_list<std::string> args) {
  std::ostringstream out, err;
  int code = run(std::vector<std::string>(args), out, err);
  return {code, out.str(), err.str()};
}

std::string strip_wall(std::string s) {
  s = std::regex_replace(s, std::regex(R"("wall_ms":[0-9.eE+-]+)"), "\"wall_ms\":0");
  return std::regex_replace(s, std::regex(R"("wall_s":[0-9.eE+-]+)"), "\"wall_s\":0");
}

}  // namespace

TEST_CASE("combi colorings") {
  auto r = cli({"combi", "colorings", "--lambda", "2,1"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["count"] == 3);
  CHECK(j["colorings"].size() == 3);
}

TEST_CASE("combi qmultinomial") {
  auto r = cli({"combi", "qmultinomial", "--lambda", "2,2"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["coefficients"] == nlohmann::json({"1", "1", "2", "1", "1"}));
  CHECK(j["degree"] == 4);
}

TEST_CASE("loc euler and check-delta") {
  auto r = cli({"loc", "euler", "--lambda", "2,1", "--point", "1,1,2"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["euler_class"]["terms"].size() == 1);

  auto d = cli({"loc", "check-delta", "--lambda", "2,1"});
  CHECK(d.code == 0);
  auto jd = nlohmann::json::parse(d.out);
  CHECK(jd["result"] == "pass");
  CHECK(jd["failure_bound"] == 0.0);
}

TEST_CASE("cb verify subcommands") {
  for (std::string thm : {"2.5", "2.6a", "2.6b"}) {
    auto r = cli({"cb", "verify", "--theorem", thm, "--lambda", "2,1", "--seed", "7"});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["result"] == "pass");
    CHECK(j["failure_bound"].is_number());
  }
  // the KZ system holds for (2,2) and fails for (3,1), with exit code 1
  CHECK(cli({"cb", "verify", "--theorem", "2.6c", "--lambda", "2,2", "--seed", "7"}).code == 0);
  auto bad = cli({"cb", "verify", "--theorem", "2.6c", "--lambda", "3,1", "--seed", "7"});
  CHECK(bad.code == 1);
  auto jb = nlohmann::json::parse(bad.out);
  CHECK(jb["result"] == "fail");
  CHECK(!jb["witness"].is_null());
}

TEST_CASE("selberg") {
  auto r = cli({"selberg", "--m", "2", "--kappa", "-2", "--z", "0,1", "--nodes", "16"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  REQUIRE(j["components"].size() == 2);
  double ref = j["reference_constant"].get<double>();
  CHECK(std::fabs(std::fabs(ref) - M_PI / 2) < 1e-12);
  for (const auto& ratio : j["ratio"]) CHECK(std::fabs(ratio.get<double>() - 1.0) < 1e-8);

  // rational kappa spelling
  auto r2 = cli({"selberg", "--m", "2", "--kappa", "-5/2", "--z", "0,1"});
  CHECK(r2.code == 0);

  // level-one shape
  auto r3 = cli({"selberg", "--lambda", "2,1", "--kappa", "-2", "--z", "0,1,2.5"});
  CHECK(r3.code == 0);
  auto j3 = nlohmann::json::parse(r3.out);
  CHECK(j3["components"].size() == 3);
}

TEST_CASE("currents verify") {
  auto r = cli({"currents", "verify", "--m", "2", "--N", "2", "--jmax", "1", "--seed", "3"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["result"] == "pass");
  CHECK(j["detail"]["identities"].size() > 0);
  for (const auto& ident : j["detail"]["identities"]) {
    CHECK(ident.contains("lhs"));
    CHECK(ident.contains("rhs"));
    CHECK(ident.contains("equal"));
    CHECK(ident.contains("sign"));
    CHECK(ident.contains("failure_bound"));
  }
}

TEST_CASE("usage errors exit with 2") {
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"combi", "colorings"}).code == 2);                       // missing --lambda
  CHECK(cli({"combi", "colorings", "--lambda", "2,1", "--bogus"}).code == 2);  // unknown flag
  CHECK(cli({"cb", "verify", "--theorem", "9.9", "--lambda", "1,1"}).code == 2);
  CHECK(cli({"selberg", "--m", "2", "--kappa", "-2", "--z", "1,0"}).code == 2);  // z not increasing
  CHECK(cli({"loc", "euler", "--lambda", "2,1", "--point", "1,2"}).code == 2);   // wrong length
}

TEST_CASE("reproducibility: identical command and seed give identical JSON") {
  auto a = cli({"cb", "verify", "--theorem", "2.5", "--lambda", "2,1", "--seed", "42"});
  auto b = cli({"cb", "verify", "--theorem", "2.5", "--lambda", "2,1", "--seed", "42"});
  CHECK(strip_wall(a.out) == strip_wall(b.out));

  auto c = cli({"currents", "verify", "--m", "2", "--N", "2", "--jmax", "1", "--seed", "5"});
  auto d = cli({"currents", "verify", "--m", "2", "--N", "2", "--jmax", "1", "--seed", "5"});
  CHECK(strip_wall(c.out) == strip_wall(d.out));

  auto e = cli({"suite", "--profile", "smoke", "--seed", "9"});
  auto f = cli({"suite", "--profile", "smoke", "--seed", "9"});
  CHECK(strip_wall(e.out) == strip_wall(f.out));
}

TEST_CASE("environment overrides with the FLAGBLOCKS_ prefix") {
  setenv("FLAGBLOCKS_SEED", "77", 1);
  auto r = cli({"cb", "verify", "--theorem", "2.5", "--lambda", "1,1"});
  unsetenv("FLAGBLOCKS_SEED");
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["seed"] == 77);
}

TEST_CASE("suite smoke profile") {
  auto r = cli({"suite", "--profile", "smoke", "--seed", "1"});
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["result"] == "pass");
  CHECK(j["criteria"].size() >= 4);
}
