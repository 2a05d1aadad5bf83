#ifndef MROOT_CURVATURE_HPP
#define MROOT_CURVATURE_HPP

#include <cmath>

#include "mroot/dense.hpp"
#include "mroot/metric.hpp"
#include "mroot/vgeometry.hpp"

namespace mroot {

inline constexpr double kDefaultS3Tolerance = 1e-8;

/// B^hijk = h^hj h^ik - h^hk h^ij
inline Tens4 angular_basis(const EvalContext& c) {
  const Mat& h = c.h_up;
  Tens4 B(c.n);
  B.for_each_index([&](const std::array<int, 4>& x) {
    B.at(x) = h(x[0], x[2]) * h(x[1], x[3]) - h(x[0], x[3]) * h(x[1], x[2]);
  });
  return B;
}

/// U^hijk = a_r^ij a^rhk - a_r^ik a^rhj
inline Tens4 compute_U(const EvalContext& c) {
  const int n = c.n;
  Tens4 U(n);
  U.for_each_index([&](const std::array<int, 4>& x) {
    const int h = x[0], i = x[1], j = x[2], k = x[3];
    double s = 0.0;
    for (int r = 0; r < n; ++r) s += c.a_mixed3(r, i, j) * c.a_up3(r, h, k) - c.a_mixed3(r, i, k) * c.a_up3(r, h, j);
    U.at(x) = s;
  });
  return U;
}

struct CurvatureRoutes {
  Tens4 by_definition;     // C_r^ij C^rhk - C_r^ik C^rhj
  Tens4 closed;            // closed form in a's with the (j,k) alternation
  Tens4 by_decomposition;  // (m-2)^2/(4K^2) [B/(m-1) + (m-1) U]
  double max_discrepancy;  // largest pairwise difference, relative to max |S|
};

inline CurvatureRoutes compute_S(const EvalContext& c) {
  const int n = c.n;
  const int m = c.m;
  const double K = c.K;
  const Vec& a = c.a_up1;
  const Mat& A2 = c.a_up2;

  const Tens3 C = compute_C_up(c);
  const Tens3 Cm = compute_C_mixed(c).values;
  Tens4 def(n);
  def.for_each_index([&](const std::array<int, 4>& x) {
    const int h = x[0], i = x[1], j = x[2], k = x[3];
    double s = 0.0;
    for (int r = 0; r < n; ++r) s += Cm(r, i, j) * C(r, h, k) - Cm(r, i, k) * C(r, h, j);
    def.at(x) = s;
  });

  // X^hijk = a_r^ij a^rhk - a^ij (a^hk - a^h a^k) + a^i a^j a^hk, alternated in (j,k)
  auto X = [&](int h, int i, int j, int k) {
    double s = 0.0;
    for (int r = 0; r < n; ++r) s += c.a_mixed3(r, i, j) * c.a_up3(r, h, k);
    return s - A2(i, j) * (A2(h, k) - a[h] * a[k]) + a[i] * a[j] * A2(h, k);
  };
  const double fc = double(m - 1) * (m - 2) * (m - 2) / (4.0 * K * K);
  Tens4 closed(n);
  closed.for_each_index([&](const std::array<int, 4>& x) {
    closed.at(x) = fc * (X(x[0], x[1], x[2], x[3]) - X(x[0], x[1], x[3], x[2]));
  });

  const Tens4 B = angular_basis(c);
  const Tens4 U = compute_U(c);
  const double fd = double(m - 2) * (m - 2) / (4.0 * K * K);
  Tens4 dec(n);
  dec.for_each_index([&](const std::array<int, 4>& x) {
    dec.at(x) = fd * (B.at(x) / (m - 1) + (m - 1) * U.at(x));
  });

  double scale = max_abs(def);
  double worst = std::max({max_abs_diff(def, closed), max_abs_diff(def, dec), max_abs_diff(closed, dec)});
  const double disc = worst == 0.0 ? 0.0 : worst / scale;
  return CurvatureRoutes{std::move(def), std::move(closed), std::move(dec), disc};
}

struct S3Diagnosis {
  double lambda = 0.0;
  double residual = 0.0;  // max |U - lambda B|, relative to max |U| (absolute when U vanishes)
  double S = 0.0;
  bool is_s3_like = false;
};

/// Least-squares fit of U onto B over all quadruples with |B| >= 1e-14.
inline S3Diagnosis s3_fit(const EvalContext& c, double tolerance = kDefaultS3Tolerance) {
  if (c.n < 4) throw Error(ErrorCode::DimTooSmall, "S3-likeness needs n >= 4");
  const Tens4 U = compute_U(c);
  const Tens4 B = angular_basis(c);
  double ub = 0.0, bb = 0.0;
  const auto u = U.flat();
  const auto b = B.flat();
  for (std::size_t q = 0; q < b.size(); ++q) {
    if (std::abs(b[q]) < 1e-14) continue;
    ub += u[q] * b[q];
    bb += b[q] * b[q];
  }
  if (bb == 0.0) throw Error(ErrorCode::DegenerateBasis, "h^hj h^ik - h^hk h^ij vanishes identically");

  S3Diagnosis d;
  d.lambda = ub / bb;
  double worst = 0.0;
  for (std::size_t q = 0; q < b.size(); ++q) worst = std::max(worst, std::abs(u[q] - d.lambda * b[q]));
  const double su = max_abs(U);
  // U ~ 0 within rounding of B: report the absolute deviation
  d.residual = su > 1e-14 * max_abs(B) ? worst / su : worst;
  const int m = c.m;
  d.S = (m - 2) * (m - 2) / 4.0 * ((m - 1) * d.lambda + 1.0 / (m - 1));
  d.is_s3_like = d.residual < tolerance;
  return d;
}

}  // namespace mroot

#endif  // MROOT_CURVATURE_HPP
