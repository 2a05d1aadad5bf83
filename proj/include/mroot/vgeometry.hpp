#ifndef MROOT_VGEOMETRY_HPP
#define MROOT_VGEOMETRY_HPP

// v-torsion C^ijk, v-derivation coefficients C_i^jk, the torsion covector,
// and the vertical covariant derivatives of K, a^i, a^ij and a^hij.

#include "mroot/dense.hpp"
#include "mroot/metric.hpp"

namespace mroot {

/// C^ijk = -(m-1)(m-2)/(2K) (a^ijk - a^ij a^k - a^jk a^i - a^ki a^j + 2 a^i a^j a^k)
inline Tens3 compute_C_up(const EvalContext& c) {
  const int n = c.n;
  const double f = -double(c.m - 1) * (c.m - 2) / (2.0 * c.K);
  const Vec& a = c.a_up1;
  const Mat& aa = c.a_up2;
  Tens3 C(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        C(i, j, k) = f * (c.a_up3(i, j, k) - aa(i, j) * a[k] - aa(j, k) * a[i] - aa(k, i) * a[j] +
                          2.0 * a[i] * a[j] * a[k]);
  return C;
}

struct MixedTorsion {
  Tens3 values;              // C_i^jk, first slot covariant
  double lowering_residual;  // max |C_i^jk - g_is C^sjk|
};

inline Tens3 lower_first(const Mat& g_dn, const Tens3& t) {
  const int n = t.dim();
  Tens3 r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int q = 0; q < n; ++q) s += g_dn(i, q) * t(q, j, k);
        r(i, j, k) = s;
      }
  return r;
}

/// C_i^jk = -(m-2)/(2K) [a_i^jk - (d_i^j a^k + d_i^k a^j) + a_i (2 a^j a^k - a^jk)]
inline MixedTorsion compute_C_mixed(const EvalContext& c) {
  const int n = c.n;
  const double f = -double(c.m - 2) / (2.0 * c.K);
  const Vec& a = c.a_up1;
  Tens3 Cm(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double delta = (i == j ? a[k] : 0.0) + (i == k ? a[j] : 0.0);
        Cm(i, j, k) = f * (c.a_mixed3(i, j, k) - delta + c.a_dn1[i] * (2.0 * a[j] * a[k] - c.a_up2(j, k)));
      }
  const Tens3 lowered = lower_first(c.g_dn, compute_C_up(c));
  const double res = max_abs_diff(Cm, lowered);
  return MixedTorsion{std::move(Cm), res};
}

struct TorsionCovector {
  Vec closed;          // -(m-2)/(2K) (a_r^ir - n a^i)
  Vec trace;           // sum_r C_r^ir
  double discrepancy;  // max |closed - trace|
};

inline TorsionCovector torsion_covector(const EvalContext& c) {
  const int n = c.n;
  const MixedTorsion Cm = compute_C_mixed(c);
  Vec closed(n), trace(n);
  for (int i = 0; i < n; ++i) {
    double ar = 0.0, cr = 0.0;
    for (int r = 0; r < n; ++r) {
      ar += c.a_mixed3(r, i, r);
      cr += Cm.values(r, i, r);
    }
    closed[i] = -double(c.m - 2) / (2.0 * c.K) * (ar - n * c.a_up1[i]);
    trace[i] = cr;
  }
  return TorsionCovector{closed, trace, max_abs_diff(closed, trace)};
}

struct VDerivBasics {
  Vec K_k;        // K|^k = a^k
  Mat a_i_k;      // a^i|^k
  Tens3 a_ij_k;   // a^ij|^k, index order (i, j, k)
  double h_residual;  // max |a^i|^k - h^ik / K|
};

inline VDerivBasics vderiv_basics(const EvalContext& c) {
  const int n = c.n;
  const Vec& a = c.a_up1;
  const double K = c.K;
  VDerivBasics r{c.l_up, Mat(n, n), Tens3(n), 0.0};
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) r.a_i_k(i, k) = (c.m - 1) / K * (c.a_up2(i, k) - a[i] * a[k]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        r.a_ij_k(i, j, k) =
            (c.m - 2) / K * (c.a_up2(i, k) * a[j] + c.a_up2(j, k) * a[i] - 2.0 * a[i] * a[j] * a[k]);
  r.h_residual = max_abs_diff(r.a_i_k, Mat(c.h_up / K));
  return r;
}

/// d a^hij / d p_k = (m-3)/K (a^hijk - a^hij a^k); identically zero for m = 3.
inline Tens4 partial_a_hij(const EvalContext& c) {
  const int n = c.n;
  Tens4 d(n);
  if (c.m == 3) return d;
  const Tens4& a4 = *c.a_up4;
  const double f = (c.m - 3) / c.K;
  d.for_each_index([&](const std::array<int, 4>& x) {
    d.at(x) = f * (a4.at(x) - c.a_up3(x[0], x[1], x[2]) * c.a_up1[x[3]]);
  });
  return d;
}

struct LemmaResult {
  Tens4 closed;        // a^hij|^k, closed form
  Tens4 definitional;  // d^k a^hij + a^rij C_r^hk + a^hrj C_r^ik + a^hir C_r^jk
  double discrepancy;  // max |closed - definitional|
};

inline LemmaResult vderiv_a_hij(const EvalContext& c) {
  const int n = c.n;
  const int m = c.m;
  const double K = c.K;
  const Vec& a = c.a_up1;
  const Mat& A2 = c.a_up2;
  const Tens3& A3 = c.a_up3;
  const Tens3& Am = c.a_mixed3;
  const Tens4 A4 = c.a_up4_or_zero();

  // sum_r a_r^xy a^rzw
  auto am_a3 = [&](int x, int y, int z, int w) {
    double s = 0.0;
    for (int r = 0; r < n; ++r) s += Am(r, x, y) * A3(r, z, w);
    return s;
  };

  Tens4 closed(n);
  closed.for_each_index([&](const std::array<int, 4>& x) {
    const int h = x[0], i = x[1], j = x[2], k = x[3];
    const double brace = am_a3(h, k, i, j) + am_a3(i, k, h, j) + am_a3(j, k, h, i) - A3(k, i, j) * a[h] -
                         A3(h, k, j) * a[i] - A3(h, i, k) * a[j] - A2(i, j) * A2(h, k) - A2(h, j) * A2(i, k) -
                         A2(h, i) * A2(j, k) +
                         2.0 * (A2(i, j) * a[h] * a[k] + A2(h, j) * a[i] * a[k] + A2(h, i) * a[j] * a[k]);
    closed.at(x) = (m - 3) / K * A4.at(x) + m / (2.0 * K) * A3(h, i, j) * a[k] - (m - 2) / (2.0 * K) * brace;
  });

  const Tens3 Cm = compute_C_mixed(c).values;
  Tens4 def = partial_a_hij(c);
  def.for_each_index([&](const std::array<int, 4>& x) {
    const int h = x[0], i = x[1], j = x[2], k = x[3];
    double s = 0.0;
    for (int r = 0; r < n; ++r) s += A3(r, i, j) * Cm(r, h, k) + A3(h, r, j) * Cm(r, i, k) + A3(h, i, r) * Cm(r, j, k);
    def.at(x) += s;
  });

  const double disc = max_abs_diff(closed, def);
  return LemmaResult{std::move(closed), std::move(def), disc};
}

}  // namespace mroot

#endif  // MROOT_VGEOMETRY_HPP
