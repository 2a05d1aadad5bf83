#include <gtest/gtest.h>

#include <random>

#include "mroot/berwald_moor.hpp"
#include "mroot/io.hpp"
#include "mroot/suite.hpp"
#include "test_util.hpp"

using namespace mroot;

TEST(Sampling, DeterministicAndInRange) {
  const SymTensor A = bm_tensor(5);
  const auto a = sample_points(A, 25, 7);
  const auto b = sample_points(A, 25, 7);
  const auto c = sample_points(A, 25, 8);
  ASSERT_EQ(a.size(), 25u);
  for (std::size_t s = 0; s < a.size(); ++s) {
    EXPECT_EQ(max_abs_diff(a[s], b[s]), 0.0);
    for (double v : a[s]) {
      EXPECT_GE(v, 0.1);
      EXPECT_LE(v, 10.0);
    }
  }
  EXPECT_GT(max_abs_diff(a[0], c[0]), 0.0);
}

TEST(Sampling, RejectsMetricWithoutAdmissiblePoints) {
  const SymTensor A = build_sym(3, 3, {{{0, 0, 0}, -1.0}, {{1, 1, 1}, -1.0}, {{2, 2, 2}, -1.0}});
  try {
    sample_points(A, 3, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InadmissiblePoint);
  }
  EXPECT_THROW(sample_points(bm_tensor(4), 0, 1), Error);
}

TEST(PointChecks, PassOnRandomMetrics) {
  std::mt19937_64 rng(59);
  const Tolerances tol;
  for (int m : {3, 4}) {
    const SymTensor A = mroot::testing::random_sym(4, m, rng);
    for (int s = 0; s < 3; ++s) {
      const Vec p = mroot::testing::log_uniform_point(4, rng);
      std::mt19937_64 pick(s);
      const CheckReport rep = point_checks(A, p, tol, pick);
      EXPECT_GT(rep.records().size(), 30u);
      for (const auto& r : rep.records()) EXPECT_TRUE(r.pass) << "m=" << m << " " << r.name << " " << r.residual;
    }
  }
}

TEST(PointChecks, ZeroToleranceFails) {
  Tolerances tol;
  ASSERT_TRUE(tol.set("curvature_routes", 0.0));
  std::mt19937_64 pick(1);
  const CheckReport rep = point_checks(mroot::testing::diagonal_cubic(4), mroot::testing::vec({0.3, 1, 2, 5}), tol, pick);
  const CheckRecord* r = rep.find("curv.routes");
  ASSERT_NE(r, nullptr);
  EXPECT_FALSE(r->pass);
}

TEST(RunVerify, BerwaldMoorPassesAndIsDeterministic) {
  VerifyOptions opt;
  opt.samples = 4;
  const CheckReport a = run_verify(bm_tensor(4), "berwald-moor:4", 4, opt);
  const CheckReport b = run_verify(bm_tensor(4), "berwald-moor:4", 4, opt);
  EXPECT_TRUE(a.all_pass());
  EXPECT_EQ(dump(to_json(a)), dump(to_json(b)));
  EXPECT_TRUE(a.skipped.empty());
  EXPECT_EQ(a.points.size(), 4u);
  EXPECT_NE(a.find("p3.bm.S_equals_minus_one"), nullptr);
  EXPECT_NE(a.find("p0.ttensor.routes"), nullptr);
}

TEST(RunVerify, NonBerwaldMoorSkipsTheoremChecks) {
  VerifyOptions opt;
  opt.samples = 3;
  opt.seed = 11;
  const CheckReport rep = run_verify(mroot::testing::diagonal_cubic(4), "cubic", 0, opt);
  EXPECT_TRUE(rep.all_pass());
  ASSERT_EQ(rep.skipped.size(), 1u);
  EXPECT_EQ(rep.skipped[0], "bm.*");
  for (const auto& r : rep.records()) EXPECT_EQ(r.name.find(".bm."), std::string::npos) << r.name;
  EXPECT_EQ(rep.seed, 11u);
}

TEST(Tolerances, NamedAccess) {
  Tolerances tol;
  EXPECT_TRUE(tol.set("s3", 1e-6));
  EXPECT_EQ(tol.s3, 1e-6);
  EXPECT_FALSE(tol.set("no_such_tolerance", 1.0));
  EXPECT_DOUBLE_EQ(Tolerances{}.t_rtol, 1e-6);
}
