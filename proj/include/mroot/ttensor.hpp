#ifndef MROOT_TTENSOR_HPP
#define MROOT_TTENSOR_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mroot/dense.hpp"
#include "mroot/metric.hpp"
#include "mroot/oracle.hpp"
#include "mroot/vgeometry.hpp"

namespace mroot {

struct TClosedForm {
  Tens4 value;
  double term_scale;  // max |individual summand| over all components
};

/// T^hijk in closed form:
///   - (m-1)(m-2)(m-3)/(2K) a^hijk
///   + (m-1)(m-2)^2/(4K) (a_r^hk a^rij + a_r^ik a^rhj + a_r^jk a^rhi)
///   - m(m-1)(m-2)/(4K) (a^hij a^k + a^hjk a^i + a^ijk a^h + a^hik a^j
///                       - a^ij a^hk - a^hj a^ik - a^ih a^jk)
/// The a^hijk term is absent for m = 3.
inline TClosedForm compute_T_closed_terms(const EvalContext& c) {
  const int n = c.n;
  const int m = c.m;
  const double K = c.K;
  const Vec& a = c.a_up1;
  const Mat& A2 = c.a_up2;
  const Tens3& A3 = c.a_up3;
  const Tens3& Am = c.a_mixed3;
  const Tens4 A4 = c.a_up4_or_zero();

  const double f4 = -double(m - 1) * (m - 2) * (m - 3) / (2.0 * K);
  const double f3 = double(m - 1) * (m - 2) * (m - 2) / (4.0 * K);
  const double f2 = -double(m) * (m - 1) * (m - 2) / (4.0 * K);

  auto am_a3 = [&](int x, int y, int z, int w) {
    double s = 0.0;
    for (int r = 0; r < n; ++r) s += Am(r, x, y) * A3(r, z, w);
    return s;
  };

  TClosedForm out{Tens4(n), 0.0};
  double scale = 0.0;
  out.value.for_each_index([&](const std::array<int, 4>& x) {
    const int h = x[0], i = x[1], j = x[2], k = x[3];
    const double terms[] = {
        f4 * A4.at(x),
        f3 * am_a3(h, k, i, j),
        f3 * am_a3(i, k, h, j),
        f3 * am_a3(j, k, h, i),
        f2 * A3(h, i, j) * a[k],
        f2 * A3(h, j, k) * a[i],
        f2 * A3(i, j, k) * a[h],
        f2 * A3(h, i, k) * a[j],
        -f2 * A2(i, j) * A2(h, k),
        -f2 * A2(h, j) * A2(i, k),
        -f2 * A2(i, h) * A2(j, k),
    };
    double s = 0.0;
    for (double t : terms) {
      s += t;
      scale = std::max(scale, std::abs(t));
    }
    out.value.at(x) = s;
  });
  out.term_scale = scale;
  return out;
}

inline Tens4 compute_T_closed(const EvalContext& c) { return compute_T_closed_terms(c).value; }

struct TTensorResult {
  Tens4 T_closed;
  Tens4 T_def;
  double max_discrepancy = 0.0;  // max |T_closed - T_def|
  double closed_term_scale = 0.0;
  double definition_scale = 0.0;  // max |summand| of the definition route
  double step_factor = 0.0;       // finite-difference step factor actually used
};

/// T^hijk = K C^hij|^k + l^h C^ijk + l^i C^jkh + l^j C^khi + l^k C^hij with
///   C^hij|^k = d^k C^hij + C^rij C_r^hk + C^hrj C_r^ik + C^hir C_r^jk,
/// where d^k C^hij comes from central differences of compute_C_up across
/// perturbed contexts. A stencil leaving the admissible domain halves the
/// step once before failing with InadmissiblePerturbation.
inline TTensorResult compute_T_definition(const EvalContext& c,
                                          double step_factor = std::cbrt(std::numeric_limits<double>::epsilon())) {
  const int n = c.n;
  const SymTensor& A = c.coeffs;
  const oracle::TensorField field{
      [&A](const Vec& q) {
        const Tens3 C = compute_C_up(make_context(A, q));
        return std::vector<double>(C.flat().begin(), C.flat().end());
      },
      [&A](const Vec& q) { return radicand(A, q) > 0.0; }};

  std::vector<std::vector<double>> dC;
  try {
    dC = oracle::fd_partials(field, c.p, step_factor);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InadmissiblePerturbation) throw;
    step_factor *= 0.5;
    dC = oracle::fd_partials(field, c.p, step_factor);
  }

  const Tens3 C = compute_C_up(c);
  const Tens3 Cm = compute_C_mixed(c).values;
  const Vec& l = c.l_up;
  const double K = c.K;
  TTensorResult out;
  out.T_def = Tens4(n);
  double scale = 0.0;
  out.T_def.for_each_index([&](const std::array<int, 4>& x) {
    const int h = x[0], i = x[1], j = x[2], k = x[3];
    const std::size_t flat_hij = (static_cast<std::size_t>(h) * n + i) * n + j;
    double conn = 0.0;
    for (int r = 0; r < n; ++r) conn += C(r, i, j) * Cm(r, h, k) + C(h, r, j) * Cm(r, i, k) + C(h, i, r) * Cm(r, j, k);
    const double terms[] = {
        K * dC[static_cast<std::size_t>(k)][flat_hij],
        K * conn,
        l[h] * C(i, j, k),
        l[i] * C(j, k, h),
        l[j] * C(k, h, i),
        l[k] * C(h, i, j),
    };
    double s = 0.0;
    for (double t : terms) {
      s += t;
      scale = std::max(scale, std::abs(t));
    }
    out.T_def.at(x) = s;
  });

  TClosedForm closed = compute_T_closed_terms(c);
  out.T_closed = std::move(closed.value);
  out.closed_term_scale = closed.term_scale;
  out.definition_scale = scale;
  out.max_discrepancy = max_abs_diff(out.T_closed, out.T_def);
  out.step_factor = step_factor;
  return out;
}

/// Mixed-tolerance agreement of the two T routes: the largest ratio
/// |T_closed - T_def| / (atol * scale + rtol * max|T_closed|) with scale the
/// largest definition-route summand. Values <= 1 mean agreement.
inline double t_route_ratio(const TTensorResult& r, double rtol, double atol) {
  const double bound = atol * r.definition_scale + rtol * max_abs(r.T_closed);
  if (r.max_discrepancy == 0.0) return 0.0;
  if (bound == 0.0) return std::numeric_limits<double>::infinity();
  return r.max_discrepancy / bound;
}

}  // namespace mroot

#endif  // MROOT_TTENSOR_HPP
