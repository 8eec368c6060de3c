#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(JTHETA_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST(Cli, ComputeConstantsJson) {
  CliRun r = run("compute --z 0 --tau i --prec-bits 128 --outputs constants");
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema"], "jtheta.bundle/1");
  const std::string v = j["values"]["theta00_0"]["re"];
  EXPECT_EQ(v.rfind("1.0864348112133080145753", 0), 0u) << v;
  EXPECT_FALSE(j["values"].contains("theta00_z"));
}

TEST(Cli, DigitsAndFormats) {
  CliRun r = run("compute --z 0.1 --tau 0.2+1.1i --prec-digits 30 --format csv");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("name,re,im,prec\n", 0), 0u);
  r = run("compute --z 0.1 --tau 0.2+1.1i --prec-digits 30 --format plain --method fast");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("(fast)"), std::string::npos) << r.out;
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("compute --tau -i").code, 2);
  EXPECT_EQ(run("compute --tau 3").code, 2);
  EXPECT_EQ(run("compute --tau abc").code, 1);
  EXPECT_EQ(run("compute --outputs 02").code, 1);
  EXPECT_EQ(run("compute --prec-bits 64 --prec-digits 20").code, 1);
  EXPECT_EQ(run("compute --method slow").code, 1);
  EXPECT_EQ(run("").code, 1);
}

TEST(Cli, OutFile) {
  const std::string path = ::testing::TempDir() + "jtheta_cli_out.json";
  std::remove(path.c_str());
  CliRun r = run("compute --z 0.25 --tau 1.5i --prec-bits 64 --out " + path);
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  ASSERT_TRUE(f.good());
  auto j = nlohmann::json::parse(f);
  EXPECT_EQ(j["prec_bits"], 64);
  std::remove(path.c_str());
}

TEST(Cli, Selftest) {
  CliRun a = run("selftest --cases 3 --prec-list 256");
  EXPECT_EQ(a.code, 0) << a.out;
  EXPECT_NE(a.out.find("passed 3 of 3"), std::string::npos);
  CliRun b = run("selftest --cases 3 --prec-list 256");
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(run("selftest --cases 2 --prec-list 256 --inject-fault").code, 3);
}

TEST(Cli, Bench) {
  CliRun r = run("bench --prec-list 128,256 --reps 1");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("# crossover_bits"), std::string::npos) << r.out;
  r = run("bench --prec-list 40,80 --digits --reps 1 --format json");
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["records"].size(), 4u);
  EXPECT_EQ(run("bench --prec-list 256,128").code, 1);
}
