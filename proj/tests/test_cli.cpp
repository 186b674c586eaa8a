#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "apnkit/cli.hpp"

using apnkit::cli::Json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = apnkit::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("apnkit_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST(Cli, Factor) {
  const auto r = run({"factor", "134217729"});
  EXPECT_EQ(r.code, 0);
  const Json j = r.json();
  EXPECT_EQ(j["complete"], true);
  EXPECT_EQ(j["factors"][2]["p"], "87211");
  EXPECT_EQ(run({"factor", "1025", "--format", "csv"}).out, "p,e\n5,2\n41,1\n");
  const auto partial = run({"factor", "1208925819535464337504999", "--rho", "4", "--ops", "8"});
  EXPECT_EQ(partial.code, 2);
}

TEST(Cli, SigmaAndOrder) {
  const Json s = run({"sigma", "28"}).json();
  EXPECT_EQ(s["multiperfect_class"], "2");
  EXPECT_EQ(s["sigma_ratio"], "2");
  const Json e = run({"sigma", "1025"}).json();
  EXPECT_TRUE(e["multiperfect_class"].is_null());
  EXPECT_EQ(e["euler_form"]["p"], "41");
  EXPECT_EQ(run({"order", "2", "87211"}).json()["order"], "54");
  const auto bad = run({"order", "2", "341"});
  EXPECT_EQ(bad.code, 3);
  EXPECT_EQ(Json::parse(bad.err)["error"], "usage");
}

TEST(Cli, ChainRendersLevels) {
  const auto r = run({"chain", "2", "15"});
  EXPECT_EQ(r.code, 0);
  const Json j = r.json();
  EXPECT_EQ(j["levels"][0]["M"], "3");
  EXPECT_EQ(j["levels"][1]["M"], "11");
  EXPECT_EQ(j["levels"][2]["M"], "993");
  EXPECT_EQ(j["levels"][2]["D_X"]["kernel"], "3641");
  EXPECT_EQ(j["levels"][1]["step"], "coprime");
  EXPECT_EQ(j["levels"][2]["step"], "shared-prime");
  const auto text = run({"chain", "2", "15", "--format", "text"}).out;
  EXPECT_NE(text.find("(i) coprime"), std::string::npos);
  EXPECT_NE(text.find("(ii) shared prime 3"), std::string::npos);
  EXPECT_NE(text.find("D_2 = 3641"), std::string::npos);
  EXPECT_EQ(run({"chain", "2", "100000"}).code, 2);
  EXPECT_EQ(run({"chain", "1", "5"}).code, 3);
}

TEST(Cli, BoundAndConstants) {
  const auto r = run({"bound", "--a", "2", "--U", "4", "--m", "0"});
  EXPECT_EQ(r.code, 0);
  const Json j = r.json();
  EXPECT_NEAR(j["rhs_eq2"]["value"].get<double>(), 0.4704, 1e-4);
  EXPECT_EQ(j["verdict"], "Excluded");
  const Json odd = run({"bound", "--a", "2", "--U", "0", "--variant", "odd"}).json();
  EXPECT_EQ(odd["variant"], "odd");
  const Json c = run({"constants"}).json();
  EXPECT_NEAR(c["c"].get<double>(), 0.1093032061, 1e-10);
  EXPECT_EQ(c["C"].size(), 4u);
  const Json c1 = run({"constants", "--U", "1"}).json();
  ASSERT_EQ(c1["C"].size(), 1u);
  EXPECT_NEAR(c1["C"][0]["C_odd"].get<double>(), 0.1758, 5e-4);
}

TEST(Cli, PrecisionControlsReals) {
  const Json j = run({"constants", "--U", "0", "--precision", "4"}).json();
  EXPECT_EQ(j["c"].dump(), "0.1093");
}

TEST(Cli, SelfcertAndVerify) {
  EXPECT_EQ(run({"selfcert"}).code, 0);
  const auto emitted = run({"selfcert", "--emit"});
  EXPECT_EQ(emitted.code, 0);
  const std::string path = temp_file("cert.json", emitted.out);
  const auto v = run({"verify", path});
  EXPECT_EQ(v.code, 0);
  EXPECT_EQ(v.json()["overall"], "Proven");

  std::string mutated = emitted.out;
  const auto at = mutated.find("\"87211\"");
  ASSERT_NE(at, std::string::npos);
  mutated.replace(at, 7, "\"87209\"");
  EXPECT_EQ(run({"verify", temp_file("mutated.json", mutated)}).code, 1);

  const auto schema = run({"verify", temp_file("bad.json", R"({"schema_version":1,"title":"x","claims":[{"id":"a"}]})")});
  EXPECT_EQ(schema.code, 3);
  EXPECT_EQ(Json::parse(schema.err)["error"], "schema");
  EXPECT_EQ(run({"verify", "/nonexistent/cert.json"}).code, 3);
}

TEST(Cli, Scans) {
  const auto self = run({"scan", "selfpow", "--n-max", "14"});
  EXPECT_EQ(self.code, 0);
  const Json j = self.json();
  ASSERT_EQ(j["findings"].size(), 1u);
  EXPECT_EQ(j["findings"][0]["N"], "28");
  EXPECT_EQ(run({"scan", "selfpow", "--n-max", "14", "--format", "csv"}).out, "a,n,N_digits,m,parity\n3,3,2,2,even\n");
  const auto pow = run({"scan", "pow", "--a-max", "12", "--n-max", "12"});
  EXPECT_EQ(pow.code, 0);
  EXPECT_EQ(pow.json()["odd_findings"], false);
  EXPECT_EQ(run({"scan"}).code, 3);
}

TEST(Cli, CensusSweepNn) {
  const auto c = run({"census", "--a", "2", "--U", "1", "--d-max", "9"});
  EXPECT_EQ(c.code, 0);
  EXPECT_EQ(c.json()["rows"][2]["primes"][0], "41");
  const auto s = run({"sweep", "--U-min", "4", "--U-max", "64"});
  EXPECT_EQ(s.code, 0);
  EXPECT_EQ(s.json()["all_excluded"], true);
  const auto n = run({"nn", "6"});
  EXPECT_EQ(n.code, 0);
  EXPECT_EQ(n.json()["N2"], "1261");
  EXPECT_EQ(run({"nn", "8"}).code, 3);
}

TEST(Cli, UsageErrors) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {}, {"frobnicate"}, {"factor"}, {"factor", "12", "--bogus"}, {"factor", "x12"},
           {"factor", "12", "--format", "xml"}, {"bound", "--a", "2"}, {"chain", "2", "15", "--format", "csv"},
           {"factor", "12", "--budget", "rho=0"}}) {
    const auto r = run(args);
    EXPECT_EQ(r.code, 3) << (args.empty() ? "" : args[0]);
    EXPECT_TRUE(r.out.empty());
    EXPECT_NO_THROW(Json::parse(r.err));
  }
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, BudgetEnvironmentVariable) {
  const std::string hard = "1208925819535464337504999";  // product of two ~40-bit primes
  ::setenv("APNKIT_BUDGET", "rho=4,ops=8", 1);
  EXPECT_EQ(run({"factor", hard}).code, 2);
  // Flags override the environment.
  EXPECT_EQ(run({"factor", hard, "--budget", "rho=4194304,ops=67108864"}).code, 0);
  ::setenv("APNKIT_BUDGET", "rho=", 1);
  EXPECT_EQ(run({"factor", "12"}).code, 3);
  ::unsetenv("APNKIT_BUDGET");
  EXPECT_EQ(run({"factor", hard}).code, 0);
}

TEST(Cli, ByteIdenticalJson) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"selfcert"}, {"chain", "2", "105"}, {"scan", "pow", "--a-max", "9", "--n-max", "9", "--jobs", "3"},
           {"census", "--a", "3", "--U", "0", "--d-max", "9"}, {"bound", "--a", "17", "--U", "8"}}) {
    EXPECT_EQ(run(args).out, run(args).out) << args[0];
  }
  EXPECT_EQ(run({"selfcert", "--jobs", "4"}).out, run({"selfcert"}).out);
}
