#ifndef MROOT_METRIC_HPP
#define MROOT_METRIC_HPP

#include <cmath>
#include <optional>
#include <string>

#include "mroot/check_report.hpp"
#include "mroot/dense.hpp"
#include "mroot/error.hpp"
#include "mroot/symtensor.hpp"
#include "mroot/tolerances.hpp"

namespace mroot {

inline constexpr double kSingularRcond = 1e-12;

/// Inertia of a symmetric matrix.
struct Signature {
  int positive = 0;
  int negative = 0;
  int zero = 0;
};

/// Point-local quantities of the m-th root metric at momentum p. Built once
/// by make_context and only read afterwards.
///
/// Naming: `up`/`dn` mark contravariant/covariant slots, the digit is the
/// number of free indices. a_up<k> is the (m-k)-fold contraction of the
/// coefficients with p divided by K^{m-k}.
struct EvalContext {
  SymTensor coeffs;
  int n = 0;
  int m = 0;
  Momentum p;
  double K = 0.0;

  Vec a_up1;                   // a^i
  Mat a_up2;                   // a^ij
  Tens3 a_up3;                 // a^ijk
  std::optional<Tens4> a_up4;  // a^hijk, m >= 4 only
  Vec a_dn1;                   // a_i = p_i / K
  Mat a_dn2;                   // a_ij = (a^ij)^{-1}
  Tens3 a_mixed3;              // a_i^jk = a_is a^sjk

  Vec l_up;  // l^i
  Mat g_up;  // g^ij
  Mat g_dn;  // g_ij, closed form
  Mat g_dn_inverse;  // g_ij by LU inversion of g^ij
  Mat h_up;  // h^ij

  double a_up2_rcond = 0.0;
  double g_dn_route_discrepancy = 0.0;  // max |closed - inverse|
  Signature g_signature;

  /// a^hijk, or the zero tensor when m = 3 (every consumer multiplies it by m-3).
  Tens4 a_up4_or_zero() const { return a_up4 ? *a_up4 : Tens4(n); }
};

/// Full contraction a^{i1..im} p_{i1}..p_{im}.
inline double radicand(const SymTensor& A, const Momentum& p) { return contract(A, p, A.rank()).scalar(); }

/// K = (a p...p)^{1/m}; the radicand must be strictly positive.
inline double eval_K(const SymTensor& A, const Momentum& p) {
  const double r = radicand(A, p);
  if (!(r > 0.0) || !std::isfinite(r))
    throw Error(ErrorCode::NonPositiveRadicand, "radicand " + std::to_string(r) + " is not positive");
  return std::pow(r, 1.0 / A.rank());
}

namespace detail {

inline Signature inertia(const Mat& sym) {
  Eigen::SelfAdjointEigenSolver<Mat> es(sym, Eigen::EigenvaluesOnly);
  const Vec& ev = es.eigenvalues();
  const double cut = 1e-12 * max_abs(ev);
  Signature s;
  for (double v : ev) {
    if (v > cut)
      ++s.positive;
    else if (v < -cut)
      ++s.negative;
    else
      ++s.zero;
  }
  return s;
}

// 1 / (|A|_1 |A^{-1}|_1) from an explicit inverse; 0 when the inverse is not
// finite. Eigen's LU estimate can report 1 for an exactly singular matrix.
inline double rcond_1(const Mat& a, const Mat& inv) {
  if (!inv.allFinite()) return 0.0;
  const double na = a.cwiseAbs().colwise().sum().maxCoeff();
  const double ni = inv.cwiseAbs().colwise().sum().maxCoeff();
  if (!(na > 0.0) || !(ni > 0.0)) return 0.0;
  return 1.0 / (na * ni);
}

}  // namespace detail

inline EvalContext make_context(const SymTensor& A, const Momentum& p) {
  const int n = A.dim();
  const int m = A.rank();
  if (p.size() != n)
    throw Error(ErrorCode::DimensionMismatch,
                "momentum has " + std::to_string(p.size()) + " components, metric dim is " + std::to_string(n));
  if (m < 3) throw Error(ErrorCode::RankTooSmall, "rank " + std::to_string(m) + " < 3");

  EvalContext c;
  c.coeffs = A;
  c.n = n;
  c.m = m;
  c.p = p;
  c.K = eval_K(A, p);
  const double K = c.K;

  c.a_up1 = to_vector(contract(A, p, m - 1)) / std::pow(K, m - 1);
  c.a_up2 = to_matrix(contract(A, p, m - 2)) / std::pow(K, m - 2);
  c.a_up3 = (1.0 / std::pow(K, m - 3)) * to_dense<3>(contract(A, p, m - 3));
  if (m >= 4) c.a_up4 = (1.0 / std::pow(K, m - 4)) * to_dense<4>(contract(A, p, m - 4));

  c.a_dn2 = Eigen::PartialPivLU<Mat>(c.a_up2).inverse();
  c.a_up2_rcond = detail::rcond_1(c.a_up2, c.a_dn2);
  if (!(c.a_up2_rcond >= kSingularRcond))
    throw Error(ErrorCode::SingularAij, "a^ij reciprocal condition " + std::to_string(c.a_up2_rcond));
  c.a_dn1 = p / K;

  c.a_mixed3 = Tens3(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int r = 0; r < n; ++r) s += c.a_dn2(i, r) * c.a_up3(r, j, k);
        c.a_mixed3(i, j, k) = s;
      }

  const Mat aa = c.a_up1 * c.a_up1.transpose();
  c.l_up = c.a_up1;
  c.g_up = (m - 1) * c.a_up2 - (m - 2) * aa;
  c.h_up = (m - 1) * (c.a_up2 - aa);
  c.g_dn = c.a_dn2 / (m - 1) + (double(m - 2) / (m - 1)) * (c.a_dn1 * c.a_dn1.transpose());
  c.g_dn_inverse = Eigen::PartialPivLU<Mat>(c.g_up).inverse();
  c.g_dn_route_discrepancy = max_abs_diff(c.g_dn, c.g_dn_inverse);
  c.g_signature = detail::inertia(c.g_up);
  return c;
}

/// Homogeneity of K, g^ij and the quadratic-form identities
/// K^2 = g^ij p_i p_j = a^ij p_i p_j, at p and lambda * p.
inline CheckReport homogeneity_residuals(const SymTensor& A, const Momentum& p, double lambda,
                                         const Tolerances& tol = {}) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
  const EvalContext c = make_context(A, p);
  const EvalContext s = make_context(A, Momentum(lambda * p));
  const double K2 = c.K * c.K;
  CheckReport rep;
  rep.add("metric.homogeneity.K", std::abs(s.K - lambda * c.K) / (lambda * c.K), tol.homogeneity);
  rep.add("metric.quadratic.g", std::abs(p.dot(c.g_up * p) - K2) / K2, tol.quadratic_form);
  rep.add("metric.quadratic.a", std::abs(p.dot(c.a_up2 * p) - K2) / K2, tol.quadratic_form);
  rep.add("metric.homogeneity.g", relative_diff(s.g_up, c.g_up), tol.homogeneity);
  return rep;
}

}  // namespace mroot

#endif  // MROOT_METRIC_HPP
