#ifndef MROOT_BERWALD_MOOR_HPP
#define MROOT_BERWALD_MOOR_HPP

// The Berwald-Moor metric of momenta K(p) = (p_1 p_2 ... p_n)^{1/n} as an
// m = n root metric, and its analytic point quantities. The analytic forms
// never touch the contraction engine, so they serve as an independent oracle
// for it.

#include <cmath>
#include <string>
#include <vector>

#include "mroot/check_report.hpp"
#include "mroot/curvature.hpp"
#include "mroot/dense.hpp"
#include "mroot/metric.hpp"
#include "mroot/symtensor.hpp"
#include "mroot/tolerances.hpp"
#include "mroot/ttensor.hpp"
#include "mroot/vgeometry.hpp"

namespace mroot {

/// Coefficients 1/n! on pairwise-distinct indices, stored once under [0..n-1].
inline SymTensor bm_tensor(int n) {
  if (n < 4) throw Error(ErrorCode::DimTooSmall, "Berwald-Moor needs n >= 4, got " + std::to_string(n));
  if (n > kMaxDim) throw Error(ErrorCode::TooLarge, "n capped at " + std::to_string(kMaxDim));
  MultiIndex idx(static_cast<std::size_t>(n));
  double fact = 1.0;
  for (int i = 0; i < n; ++i) {
    idx[static_cast<std::size_t>(i)] = i;
    fact *= i + 1;
  }
  return build_sym(n, n, {{idx, 1.0 / fact}});
}

/// lambda for which U = lambda (h^hj h^ik - h^hk h^ij): -n^2 / ((n-1)^2 (n-2)^2)
inline double bm_lambda(int n) {
  const double d = double(n - 1) * (n - 2);
  return -double(n) * n / (d * d);
}

struct BMClosedForms {
  double K = 0.0;
  Vec a_up1;
  Vec a_dn1;
  Mat a_up2;
  Mat a_dn2;
  Tens3 a_up3;
  Tens4 a_up4;
  Tens3 a_mixed3;
  Mat h_up;
};

inline BMClosedForms bm_closed_forms(int n, const Momentum& p) {
  if (n < 4) throw Error(ErrorCode::DimTooSmall, "Berwald-Moor needs n >= 4");
  if (p.size() != n) throw Error(ErrorCode::DimensionMismatch, "momentum size");
  for (double v : p)
    if (!(v > 0.0)) throw Error(ErrorCode::InadmissiblePoint, "Berwald-Moor closed forms need p_i > 0");

  BMClosedForms f;
  double logsum = 0.0;
  for (double v : p) logsum += std::log(v);
  f.K = std::exp(logsum / n);
  const double K = f.K;
  const double nn = n;

  f.a_up1 = Vec(n);
  for (int i = 0; i < n; ++i) f.a_up1[i] = K / (nn * p[i]);
  f.a_dn1 = p / K;
  const Vec& a = f.a_up1;
  const Vec& ad = f.a_dn1;

  f.a_up2 = Mat::Zero(n, n);
  f.a_dn2 = Mat::Zero(n, n);
  f.h_up = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i != j) {
        f.a_up2(i, j) = nn / (nn - 1) * a[i] * a[j];
        f.a_dn2(i, j) = nn * ad[i] * ad[j];
        f.h_up(i, j) = a[i] * a[j];
      } else {
        f.a_dn2(i, i) = -nn * (nn - 2) * ad[i] * ad[i];
        // contravariant (a^i)^2, consistent with h^ij = (m-1)(a^ij - a^i a^j)
        f.h_up(i, i) = -(nn - 1) * a[i] * a[i];
      }
    }

  const double c3 = nn * nn / ((nn - 1) * (nn - 2));
  const double c4 = nn * nn * nn / ((nn - 1) * (nn - 2) * (nn - 3));
  f.a_up3 = Tens3(n);
  f.a_mixed3 = Tens3(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const bool distinct = i != j && j != k && i != k;
        if (distinct) {
          f.a_up3(i, j, k) = c3 * a[i] * a[j] * a[k];
          f.a_mixed3(i, j, k) = -c3 * ad[i] * a[j] * a[k];
        } else if (i == j && j != k) {
          f.a_mixed3(i, j, k) = nn / (nn - 1) * a[k];
        } else if (i == k && j != k) {
          f.a_mixed3(i, j, k) = nn / (nn - 1) * a[j];
        }
        // a_i^kk = 0 for every i
      }
  f.a_up4 = Tens4(n);
  f.a_up4.for_each_index([&](const std::array<int, 4>& x) {
    for (int s = 0; s < 4; ++s)
      for (int t = s + 1; t < 4; ++t)
        if (x[s] == x[t]) return;
    f.a_up4.at(x) = c4 * a[x[0]] * a[x[1]] * a[x[2]] * a[x[3]];
  });
  return f;
}

/// Runs the general engine on bm_tensor(n) at p and checks the three
/// Berwald-Moor properties (vanishing torsion covector, S3-likeness with
/// S = -1, vanishing T-tensor) plus agreement of every intermediate with the
/// analytic forms.
inline CheckReport bm_theorem_check(int n, const Momentum& p, const Tolerances& tol = {}) {
  const SymTensor A = bm_tensor(n);
  const EvalContext c = make_context(A, p);
  const BMClosedForms f = bm_closed_forms(n, p);
  CheckReport rep;

  const TorsionCovector cv = torsion_covector(c);
  rep.add("bm.torsion_covector_vanishes", max_abs(cv.trace) * c.K / n, tol.bm_torsion);

  const S3Diagnosis s3 = s3_fit(c, tol.s3);
  rep.add("bm.s3_like", s3.residual, tol.s3);
  rep.add("bm.S_equals_minus_one", std::abs(s3.S + 1.0), tol.bm_S);
  rep.add("bm.lambda", std::abs(s3.lambda - bm_lambda(n)) / std::abs(bm_lambda(n)), tol.bm_lambda);

  const TClosedForm T = compute_T_closed_terms(c);
  rep.add("bm.T_vanishes", max_abs(T.value) / T.term_scale, tol.bm_T);

  rep.add("bm.closed.K", std::abs(c.K - f.K) / f.K, tol.bm_closed_forms);
  rep.add("bm.closed.a_up1", relative_diff(c.a_up1, f.a_up1), tol.bm_closed_forms);
  rep.add("bm.closed.a_dn1", relative_diff(c.a_dn1, f.a_dn1), tol.bm_closed_forms);
  rep.add("bm.closed.a_up2", relative_diff(c.a_up2, f.a_up2), tol.bm_closed_forms);
  rep.add("bm.closed.a_dn2", relative_diff(c.a_dn2, f.a_dn2), tol.bm_closed_forms);
  rep.add("bm.closed.a_up3", relative_diff(c.a_up3, f.a_up3), tol.bm_closed_forms);
  rep.add("bm.closed.a_up4", relative_diff(*c.a_up4, f.a_up4), tol.bm_closed_forms);
  rep.add("bm.closed.a_mixed3", relative_diff(c.a_mixed3, f.a_mixed3), tol.bm_closed_forms);
  rep.add("bm.closed.h_up", relative_diff(c.h_up, f.h_up), tol.bm_closed_forms);

  Vec trace = Vec::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < n; ++r) trace[i] += c.a_mixed3(r, i, r);
  rep.add("bm.trace_a_mixed", relative_diff(trace, Vec(n * c.a_up1)), tol.bm_trace);

  Tens4 expected_U = bm_lambda(n) * angular_basis(c);
  rep.add("bm.U_form", relative_diff(compute_U(c), expected_U), tol.bm_closed_forms);
  return rep;
}

}  // namespace mroot

#endif  // MROOT_BERWALD_MOOR_HPP
