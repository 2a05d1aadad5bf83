#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <string>

#include "mroot/io.hpp"
#include "test_util.hpp"

using namespace mroot;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args, const std::string& redirect = " 2>/dev/null") {
  const std::string cmd = std::string(MROOT_CLI_PATH) + " " + args + redirect;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {};
  RunResult r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

RunResult run_stderr(const std::string& args) { return run(args, " 2>&1 1>/dev/null"); }

std::string tmp(const std::string& name) { return std::string(MROOT_TEST_TMPDIR) + "/cli_" + name; }

std::string cubic_file() {
  const std::string path = tmp("cubic4.json");
  write_text(path, dump(tensor_to_json(mroot::testing::diagonal_cubic(4))));
  return path;
}

std::string bm_file(int n) {
  const std::string path = tmp("bm" + std::to_string(n) + ".json");
  const RunResult r = run("bm-gen --dim " + std::to_string(n) + " --out " + path);
  EXPECT_EQ(r.code, 0);
  return path;
}

}  // namespace

TEST(Cli, BmGenWritesTensor) {
  for (int n : {4, 6}) {
    const RunResult r = run("bm-gen --dim " + std::to_string(n));
    ASSERT_EQ(r.code, 0);
    const SymTensor A = tensor_from_json(Json::parse(r.out));
    EXPECT_EQ(A.dim(), n);
    EXPECT_EQ(A.rank(), n);
    EXPECT_EQ(A.entries().size(), 1u);
  }
  EXPECT_EQ(run("bm-gen --dim 3").code, 2);
}

TEST(Cli, EvalBerwaldMoorUnitPoint) {
  const RunResult r = run("eval --metric " + bm_file(4) + " --p 1,1,1,1");
  ASSERT_EQ(r.code, 0);
  const Json j = Json::parse(r.out);
  EXPECT_NEAR(j["K"].get<double>(), 1.0, 1e-15);
  EXPECT_NEAR(j["s3"]["S"].get<double>(), -1.0, 1e-9);
  EXPECT_TRUE(j["s3"]["is_s3_like"].get<bool>());
  EXPECT_NEAR(j["C_up"][0][1][2].get<double>(), -1.0 / 32.0, 1e-15);
  EXPECT_EQ(j["g_signature"]["positive"].get<int>(), 1);
  EXPECT_EQ(j["g_signature"]["negative"].get<int>(), 3);
  for (const char* key : {"engine_version", "metric", "point", "l", "g_up", "g_dn", "h_up", "C_mixed",
                          "torsion_covector", "S", "U", "T"})
    EXPECT_TRUE(j.contains(key)) << key;
}

TEST(Cli, EvalNonPositiveRadicand) {
  const std::string path = bm_file(4);
  EXPECT_EQ(run("eval --metric " + path + " --p 1,-1,1,1").code, 2);
  EXPECT_NE(run_stderr("eval --metric " + path + " --p 1,-1,1,1").out.find("NonPositiveRadicand"), std::string::npos);
}

TEST(Cli, EvalBadInput) {
  const std::string path = bm_file(4);
  EXPECT_EQ(run("eval --metric " + path + " --p 1,x,1,1").code, 2);
  EXPECT_EQ(run("eval --metric " + path + " --p 1,1,1").code, 2);
  EXPECT_EQ(run("eval --metric /nonexistent.json --p 1,1").code, 2);
  EXPECT_EQ(run("eval --p 1,1").code, 2);
  EXPECT_EQ(run("").code, 2);
}

TEST(Cli, EvalCubic) {
  const RunResult r = run("eval --metric " + cubic_file() + " --p 0.3,1,2,5");
  ASSERT_EQ(r.code, 0);
  const Json j = Json::parse(r.out);
  EXPECT_TRUE(j["s3"]["is_s3_like"].get<bool>());
  EXPECT_NEAR(j["s3"]["S"].get<double>(), 0.125, 1e-12);
  EXPECT_GT(std::abs(j["T"][0][0][0][0].get<double>()), 0.0);
}

TEST(Cli, EvalThreeDimensionalHasNoS3Block) {
  const std::string path = tmp("cubic3.json");
  write_text(path, dump(tensor_to_json(mroot::testing::diagonal_cubic(3))));
  const RunResult r = run("eval --metric " + path + " --p 1,2,3");
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(Json::parse(r.out)["s3"].is_null());
}

TEST(Cli, VerifyBerwaldMoor) {
  const RunResult r = run("verify --bm 4 --samples 5");
  ASSERT_EQ(r.code, 0);
  const CheckReport rep = report_from_json(Json::parse(r.out));
  EXPECT_TRUE(rep.all_pass());
  EXPECT_EQ(rep.points.size(), 5u);
  EXPECT_EQ(rep.metric, "berwald-moor:4");
  EXPECT_TRUE(rep.skipped.empty());
}

TEST(Cli, VerifyCubicSkipsTheoremChecks) {
  const std::string out = tmp("cubic_report.json");
  const RunResult r = run("verify --metric " + cubic_file() + " --samples 4 --out " + out);
  ASSERT_EQ(r.code, 0);
  const CheckReport rep = report_from_json(read_json_file(out));
  ASSERT_EQ(rep.skipped.size(), 1u);
  EXPECT_EQ(rep.skipped[0], "bm.*");
  EXPECT_TRUE(rep.all_pass());
}

TEST(Cli, VerifyRejectsSmallBerwaldMoor) { EXPECT_EQ(run("verify --bm 3").code, 2); }

TEST(Cli, VerifyNeedsAMetric) {
  EXPECT_EQ(run("verify").code, 2);
  EXPECT_EQ(run("verify --bm 4 --metric x.json").code, 2);
  EXPECT_EQ(run("verify --bm 4 --samples 0").code, 2);
}

TEST(Cli, VerifyIsDeterministic) {
  const RunResult a = run("verify --bm 5 --samples 3 --seed 99");
  const RunResult b = run("verify --bm 5 --samples 3 --seed 99");
  const RunResult c = run("verify --bm 5 --samples 3 --seed 100");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
}

TEST(Cli, ToleranceOverrides) {
  EXPECT_EQ(run("verify --bm 4 --samples 2 --tol no_such=1").code, 2);
  EXPECT_EQ(run("verify --bm 4 --samples 2 --tol s3").code, 2);
  EXPECT_EQ(run("verify --bm 4 --samples 2 --tol curvature_routes=0").code, 1);
  EXPECT_EQ(run("verify --bm 4 --samples 2 --tol s3=1e-6").code, 0);
}
