#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr folded into stdout.
Run cli(const std::string& args) {
  const std::string cmd = std::string(EXPANDERS_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  while (std::size_t k = std::fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), k);
  const int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string sample(const std::string& name) { return std::string(EXPANDERS_SAMPLES_DIR) + "/" + name; }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("expanders_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  std::string path(const std::string& f) const { return (dir / f).string(); }
  fs::path dir;
};

std::string slurp(const std::string& p) {
  std::ifstream f(p);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_F(Cli, BuildProductSpectrumChain) {
  ASSERT_EQ(cli("build expander -n 30 -d 4 --seed 3 --out " + path("g1.edges")).code, 0);
  ASSERT_EQ(cli("build cycle-loops -n 4 --out " + path("g2.edges")).code, 0);
  auto z = cli("product zigzag " + path("g1.edges") + " " + path("g2.edges") + " --format json --out " + path("z.json"));
  ASSERT_EQ(z.code, 0) << z.out;
  auto s = cli("spectrum " + path("z.json") + " --format json");
  ASSERT_EQ(s.code, 0) << s.out;
  json j = json::parse(s.out);
  EXPECT_EQ(j["schema"], "expanders.report/1");
  EXPECT_EQ(j["order"], 120);
  EXPECT_EQ(j["degree"], 9);
  EXPECT_LT(j["lambda_abs"].get<double>(), 1);
}

TEST_F(Cli, SamplesLoad) {
  auto s = cli("spectrum " + sample("c5.edges") + " --format json");
  ASSERT_EQ(s.code, 0) << s.out;
  EXPECT_NEAR(json::parse(s.out)["lambda_abs"].get<double>(), std::cos(M_PI / 5), 1e-12);
  auto c = cli("code verify " + sample("hamming8.code") + " --format json");
  ASSERT_EQ(c.code, 0) << c.out;
  EXPECT_NE(c.out.find("4"), std::string::npos);
  EXPECT_EQ(cli("pipeline " + sample("pipeline.cfg")).code, 0);
}

TEST_F(Cli, EdgeListRoundTrip) {
  ASSERT_EQ(cli("build random -n 12 -d 3 --seed 5 --out " + path("a.edges")).code, 0);
  ASSERT_EQ(cli("power " + path("a.edges") + " -t 1 --out " + path("b.edges")).code, 0);
  EXPECT_EQ(slurp(path("a.edges")), slurp(path("b.edges")));
}

TEST_F(Cli, JsonOutputIsDeterministic) {
  const std::string args = "verify --suite euclid-exact --count 5 --seed 11 --format json";
  auto a = cli(args), b = cli(args);
  ASSERT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
}

TEST_F(Cli, ErrorsExitWithTwo) {
  EXPECT_EQ(cli("verify --suite no-such-suite").code, 2);
  EXPECT_EQ(cli("cotype " + sample("c5.edges") + " --K 0.5").code, 2);
  std::ofstream(path("bad.edges")) << "3 2\n0 1 1\n1 x 1\n";
  auto r = cli("spectrum " + path("bad.edges"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("line 3"), std::string::npos) << r.out;
  EXPECT_EQ(cli("spectrum " + path("missing.edges")).code, 2);
}

TEST_F(Cli, CorruptedHarnessFails) {
  auto r = cli("verify --suite trivial-bounds --count 3 --corrupt");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("FAIL"), std::string::npos) << r.out;
}
