#include <json.hpp>

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(SU2_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string spec(const char* name) { return std::string(SPEC_DIR) + "/" + name; }

std::string temp_path(const char* name) { return ::testing::TempDir() + name; }

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST(Cli, WignerTableTrivial) {
  const CliRun r = run("wigner-table --two-ell 0 --euler 0 0 0");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "two_ell,two_m,two_s,re,im\n0,0,0,1,0\n");
}

TEST(Cli, WignerTableG2Pi) {
  const CliRun r = run("wigner-table --two-ell 1 --euler 0 pi 0 --format json");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  const auto& e = j["entries"];
  EXPECT_NEAR(e[0]["re"].get<double>(), 0.0, 1e-15);
  EXPECT_EQ(e[1]["re"].get<double>(), 1.0);
  EXPECT_EQ(e[2]["re"].get<double>(), -1.0);
  EXPECT_NEAR(e[3]["re"].get<double>(), 0.0, 1e-15);
}

TEST(Cli, WignerTableFromAlphaBeta) {
  const CliRun a = run("wigner-table --two-ell 2 --alpha-beta 0 2 0 0 --format json");
  const CliRun b = run("wigner-table --two-ell 2 --euler 0 0 pi --format json");
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  const auto ja = nlohmann::json::parse(a.out)["entries"];
  const auto jb = nlohmann::json::parse(b.out)["entries"];
  ASSERT_EQ(ja.size(), 9u);
  for (std::size_t i = 0; i < ja.size(); ++i) {
    EXPECT_NEAR(ja[i]["re"].get<double>(), jb[i]["re"].get<double>(), 1e-15);
    EXPECT_NEAR(ja[i]["im"].get<double>(), jb[i]["im"].get<double>(), 1e-15);
  }
}

TEST(Cli, MalformedAngleNamesTheFlag) {
  const std::string cmd = std::string(SU2_CLI) + " wigner-table --two-ell 1 --euler 0 pi/x 0 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  std::string text;
  char buf[512];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) text.append(buf, n);
  const int status = pclose(pipe);
  EXPECT_EQ(WEXITSTATUS(status), 2);
  EXPECT_NE(text.find("--euler"), std::string::npos);
}

TEST(Cli, ParseErrors) {
  EXPECT_EQ(run("wigner-table --two-ell x --euler 0 0 0").code, 2);
  EXPECT_EQ(run("wigner-table --two-ell 1").code, 2);
  EXPECT_EQ(run("verify --seed -").code, 2);
  EXPECT_EQ(run("verify --tol-override unitarity").code, 2);
  EXPECT_EQ(run("verify --format xml").code, 2);
  EXPECT_EQ(run("no-such-command").code, 2);
}

TEST(Cli, BandLimitExit) {
  EXPECT_EQ(run("verify --band-limit-doubled 65").code, 3);
  EXPECT_EQ(run("grid --band-limit-doubled 65").code, 3);
  EXPECT_EQ(run("wigner-table --two-ell 65 --euler 0 0 0").code, 3);
}

TEST(Cli, VerifyDefaultAndOverride) {
  const CliRun ok = run("verify");
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out.rfind("name,metric,threshold,pass\n", 0), 0u);
  EXPECT_EQ(ok.out.find("false"), std::string::npos);
  const CliRun bad = run("verify --tol-override all=1e-20");
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("unitarity,"), std::string::npos);
  EXPECT_NE(bad.out.find(",false\n"), std::string::npos);
}

TEST(Cli, InvalidSpecExit) {
  EXPECT_EQ(run("mc-correlations --spec " + spec("not_psd.json")).code, 4);
  EXPECT_EQ(run("field-sample --spec /nonexistent.json").code, 4);
}

TEST(Cli, RerunsAreByteIdentical) {
  const std::string a = temp_path("su2_a.json"), b = temp_path("su2_b.json");
  for (const char* args : {"verify --format json", "field-sample --format json --samples 3",
                           "spin-spectra --format json --samples 500"}) {
    std::string extra = std::string(args).rfind("verify", 0) == 0 ? "" : " --spec " + spec("gaussian_bi.json");
    ASSERT_EQ(run(std::string(args) + extra + " --out " + a).code, 0) << args;
    ASSERT_EQ(run(std::string(args) + extra + " --out " + b).code, 0) << args;
    EXPECT_EQ(slurp(a), slurp(b)) << args;
    EXPECT_FALSE(slurp(a).empty());
  }
}

TEST(Cli, BiGaussianCorrelationsPass) {
  const CliRun r = run("mc-correlations --spec " + spec("gaussian_bi.json") + " --two-ell 2 --format json");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["all_pass"].get<bool>());
  EXPECT_EQ(j["samples"], 100000);
  EXPECT_EQ(j["rows"].size(), 14u * 14u);
}

TEST(Cli, SpinMeasureRealizationIsExact) {
  const CliRun r = run("spin-spectra --spec " + spec("spin_measure.json") + " --format json");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  const double mu[] = {0.2, 0.3, 0.5};
  int k = 0;
  for (const auto& e : j["strong"]["value"]["right"]) {
    if (e["two_s"].get<int>() % 2 != 0) continue;
    EXPECT_NEAR(e["value"].get<double>(), mu[k++], 1e-10);
  }
  EXPECT_EQ(k, 3);
}
