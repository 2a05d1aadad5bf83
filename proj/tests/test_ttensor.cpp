#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mroot/berwald_moor.hpp"
#include "mroot/tolerances.hpp"
#include "mroot/ttensor.hpp"
#include "test_util.hpp"

using namespace mroot;
using mroot::testing::diagonal_cubic;
using mroot::testing::vec;

namespace {

double full_symmetry(const Tens4& t) { return full_symmetry_residual(t); }

}  // namespace

TEST(TTensor, VanishesForBerwaldMoor) {
  for (int n : {4, 5}) {
    const EvalContext c = make_context(bm_tensor(n), Vec::LinSpaced(n, 1.0, double(n)));
    const TClosedForm T = compute_T_closed_terms(c);
    EXPECT_LT(max_abs(T.value) / T.term_scale, 1e-10) << "n=" << n;
    EXPECT_GT(T.term_scale, 0.0);
  }
}

TEST(TTensor, CubicIsNonzeroAndMatchesDefinition) {
  const Tolerances tol;
  const EvalContext c = make_context(diagonal_cubic(4), vec({0.3, 1, 2, 5}));
  const TTensorResult r = compute_T_definition(c);
  EXPECT_GT(max_abs(r.T_closed) / r.closed_term_scale, 1e-3);
  EXPECT_LE(t_route_ratio(r, tol.t_rtol, tol.t_atol), 1.0);
}

TEST(TTensor, SymmetricAndAnnihilated) {
  const Vec p = vec({0.3, 1, 2, 5});
  const EvalContext c = make_context(diagonal_cubic(4), p);
  const Tens4 T = compute_T_closed(c);
  EXPECT_LT(full_symmetry(T) / max_abs(T), 1e-11);
  EXPECT_LT(max_abs(contract_last(T, p)) / (max_abs(T) * p.cwiseAbs().sum()), 1e-10);
}

TEST(TTensor, RandomMetricsBothRoutes) {
  const Tolerances tol;
  std::mt19937_64 rng(37);
  for (int m : {3, 4}) {
    const SymTensor A = mroot::testing::random_sym(4, m, rng);
    for (int s = 0; s < 5; ++s) {
      const EvalContext c = make_context(A, mroot::testing::log_uniform_point(4, rng));
      const TTensorResult r = compute_T_definition(c);
      EXPECT_LE(t_route_ratio(r, tol.t_rtol, tol.t_atol), 1.0) << "m=" << m << " s=" << s;
      EXPECT_LT(full_symmetry(r.T_def) / max_abs(r.T_def), 1e-6);
    }
  }
}

TEST(TTensor, RouteRatioEdgeCases) {
  TTensorResult r;
  r.T_closed = Tens4(2);
  r.T_def = Tens4(2);
  EXPECT_EQ(t_route_ratio(r, 1e-6, 1e-9), 0.0);
  r.max_discrepancy = 1e-3;
  EXPECT_TRUE(std::isinf(t_route_ratio(r, 1e-6, 1e-9)));
  r.definition_scale = 1.0;
  EXPECT_NEAR(t_route_ratio(r, 1e-6, 1e-9), 1e6, 1e-3);
}

TEST(TTensor, StencilOutsideDomainRaises) {
  const SymTensor A = diagonal_cubic(2);
  const EvalContext c = make_context(A, vec({1.0, -(1.0 - 1e-9)}));
  try {
    compute_T_definition(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InadmissiblePerturbation);
  }
}
