#ifndef MROOT_SUITE_HPP
#define MROOT_SUITE_HPP

// The identity suite run by `verify`: every closed form is checked against
// its definition, a finite-difference oracle, or an algebraic identity at
// seeded sample points.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mroot/berwald_moor.hpp"
#include "mroot/check_report.hpp"
#include "mroot/curvature.hpp"
#include "mroot/metric.hpp"
#include "mroot/oracle.hpp"
#include "mroot/tolerances.hpp"
#include "mroot/ttensor.hpp"
#include "mroot/vgeometry.hpp"

namespace mroot {

inline constexpr int kFdComponents = 20;

/// Draws points with components log-uniform in [0.1, 10], keeping those with
/// a positive radicand and a regular a^ij. Fails after 1000 * count draws.
inline std::vector<Momentum> sample_points(const SymTensor& A, int count, std::uint64_t seed) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "sample count must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> expo(-1.0, 1.0);
  std::vector<Momentum> pts;
  const long long budget = 1000LL * count;
  for (long long attempt = 0; attempt < budget && static_cast<int>(pts.size()) < count; ++attempt) {
    Momentum p(A.dim());
    for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = std::pow(10.0, expo(rng));
    try {
      (void)make_context(A, p);
    } catch (const Error&) {
      continue;
    }
    pts.push_back(std::move(p));
  }
  if (static_cast<int>(pts.size()) < count)
    throw Error(ErrorCode::InadmissiblePoint, "no admissible point found within the sampling budget");
  return pts;
}

namespace detail {

inline double ratio(double diff, double scale) {
  if (diff == 0.0) return 0.0;
  return scale > 0.0 ? diff / scale : std::numeric_limits<double>::infinity();
}

inline double l1(const Vec& p) { return p.cwiseAbs().sum(); }

inline std::vector<std::array<int, 3>> random_triples(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::vector<std::array<int, 3>> out(kFdComponents);
  for (auto& t : out) t = {pick(rng), pick(rng), pick(rng)};
  return out;
}

inline std::vector<std::array<int, 4>> random_quads(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::vector<std::array<int, 4>> out(kFdComponents);
  for (auto& t : out) t = {pick(rng), pick(rng), pick(rng), pick(rng)};
  return out;
}

}  // namespace detail

/// Metric-level identities: homogeneity, quadratic forms, inverses and the
/// finite-difference gradient and Hessians of K and K^2.
inline CheckReport metric_checks(const SymTensor& A, const EvalContext& c, const Tolerances& tol) {
  using detail::ratio;
  CheckReport rep;
  rep.append(homogeneity_residuals(A, c.p, 2.0, tol));

  rep.add("metric.a_dot_a", std::abs(c.a_dn1.dot(c.a_up1) - 1.0), tol.aidx_dot);
  const Mat I = Mat::Identity(c.n, c.n);
  rep.add("metric.inverse_a", max_abs_diff(Mat(c.a_dn2 * c.a_up2), I), tol.inverse_identity);
  rep.add("metric.inverse_closed", relative_diff(c.g_dn, c.g_dn_inverse), tol.inverse_closed);
  rep.add("metric.inverse_identity", max_abs_diff(Mat(c.g_dn * c.g_up), I), tol.inverse_identity);
  rep.add("metric.lowering_l", relative_diff(Vec(c.g_dn * c.l_up), c.a_dn1), tol.lowering);
  rep.add("metric.annihilate_h", ratio(max_abs(Vec(c.h_up * c.p)), max_abs(c.h_up) * detail::l1(c.p)),
          tol.annihilation);
  rep.add("metric.g_p_equals_K_l", relative_diff(Vec(c.g_up * c.p), Vec(c.K * c.l_up)), tol.lowering);

  const oracle::ScalarField K_field{[&A](const Vec& q) { return eval_K(A, q); },
                                    [&A](const Vec& q) { return radicand(A, q) > 0.0; }};
  const oracle::ScalarField K2_field{[&A](const Vec& q) { return std::pow(eval_K(A, q), 2); },
                                     [&A](const Vec& q) { return radicand(A, q) > 0.0; }};
  rep.add("metric.gradient_fd", relative_diff(oracle::fd_grad(K_field, c.p, tol.fd_step_first), c.l_up),
          tol.gradient_fd);
  const Mat half_hess = 0.5 * oracle::fd_hessian(K2_field, c.p, tol.fd_step_second).value;
  rep.add("metric.hessian_fd", relative_diff(half_hess, c.g_up), tol.hessian_fd);
  const Mat k_hess = c.K * oracle::fd_hessian(K_field, c.p, tol.fd_step_second).value;
  rep.add("metric.angular_fd", relative_diff(k_hess, c.h_up), tol.hessian_fd);
  return rep;
}

/// v-torsion, v-derivation, torsion covector and v-derivative identities.
inline CheckReport vgeometry_checks(const SymTensor& A, const EvalContext& c, const Tolerances& tol,
                                    std::mt19937_64& rng) {
  using detail::ratio;
  const int n = c.n;
  CheckReport rep;
  const Tens3 C = compute_C_up(c);
  const MixedTorsion Cm = compute_C_mixed(c);
  const double sC = max_abs(C);
  const double sCm = max_abs(Cm.values);

  // C^ijk = -1/2 d^k g^ij on random components
  const oracle::TensorField g_field{[&A](const Vec& q) {
                                      const Mat g = make_context(A, q).g_up;
                                      return std::vector<double>(g.data(), g.data() + g.size());
                                    },
                                    [&A](const Vec& q) { return radicand(A, q) > 0.0; }};
  const auto dg = oracle::fd_partials(g_field, c.p, tol.fd_step_first);
  double worst = 0.0;
  for (const auto& [i, j, k] : detail::random_triples(n, rng)) {
    // column-major g: (i, j) -> i + j * n
    const double fd = -0.5 * dg[static_cast<std::size_t>(k)][static_cast<std::size_t>(i + j * n)];
    worst = std::max(worst, std::abs(fd - C(i, j, k)));
  }
  rep.add("vgeom.torsion_fd", ratio(worst, sC), tol.torsion_fd);

  rep.add("vgeom.torsion_symmetry", ratio(full_symmetry_residual(C), sC), tol.symmetry);
  double mixed_asym = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        mixed_asym = std::max(mixed_asym, std::abs(Cm.values(i, j, k) - Cm.values(i, k, j)));
  rep.add("vgeom.mixed_symmetry", ratio(mixed_asym, sCm), tol.symmetry);
  rep.add("vgeom.lowering", ratio(Cm.lowering_residual, sCm), tol.torsion_lowering);

  const TorsionCovector cv = torsion_covector(c);
  rep.add("vgeom.trace", ratio(cv.discrepancy, sCm), tol.torsion_trace);

  const double pl1 = detail::l1(c.p);
  rep.add("vgeom.annihilate_C", ratio(max_abs(contract_last(C, c.p)), sC * pl1), tol.annihilation);
  rep.add("vgeom.annihilate_C_mixed", ratio(max_abs(contract_last(Cm.values, c.p)), sCm * pl1),
          tol.annihilation);

  const VDerivBasics vb = vderiv_basics(c);
  rep.add("vgeom.a_i_k_is_h_over_K", ratio(vb.h_residual, max_abs(c.h_up) / c.K), tol.lowering);
  rep.add("vgeom.annihilate_a_ij_k", ratio(max_abs(contract_last(vb.a_ij_k, c.p)), max_abs(vb.a_ij_k) * pl1),
          tol.annihilation);

  // d a^hij / d p_k against finite differences
  const Tens4 partial = partial_a_hij(c);
  const oracle::TensorField a3_field{[&A](const Vec& q) {
                                       const Tens3 t = make_context(A, q).a_up3;
                                       return std::vector<double>(t.flat().begin(), t.flat().end());
                                     },
                                     [&A](const Vec& q) { return radicand(A, q) > 0.0; }};
  const auto da3 = oracle::fd_partials(a3_field, c.p, tol.fd_step_first);
  worst = 0.0;
  for (const auto& [h, i, j, k] : detail::random_quads(n, rng)) {
    const std::size_t flat = (static_cast<std::size_t>(h) * n + i) * n + j;
    worst = std::max(worst, std::abs(da3[static_cast<std::size_t>(k)][flat] - partial(h, i, j, k)));
  }
  const double sp = max_abs(partial) > 0.0 ? max_abs(partial) : max_abs(c.a_up3) / c.K;
  rep.add("vgeom.partial_a_hij_fd", ratio(worst, sp), tol.partial_fd);

  const LemmaResult lemma = vderiv_a_hij(c);
  const double sl = max_abs(lemma.definitional);
  rep.add("vgeom.lemma", ratio(lemma.discrepancy, sl), tol.lemma);
  double lemma_asym = 0.0;
  lemma.closed.for_each_index([&](const std::array<int, 4>& x) {
    std::array<int, 3> hij{x[0], x[1], x[2]};
    std::sort(hij.begin(), hij.end());
    do {
      lemma_asym = std::max(lemma_asym, std::abs(lemma.closed(hij[0], hij[1], hij[2], x[3]) - lemma.closed.at(x)));
    } while (std::next_permutation(hij.begin(), hij.end()));
  });
  rep.add("vgeom.lemma_symmetry", ratio(lemma_asym, sl), tol.curvature_symmetry);
  return rep;
}

inline CheckReport curvature_checks(const SymTensor& A, const EvalContext& c, const Tolerances& tol) {
  using detail::ratio;
  CheckReport rep;
  const CurvatureRoutes S = compute_S(c);
  rep.add("curv.routes", S.max_discrepancy, tol.curvature_routes);

  const Tens4 U = compute_U(c);
  double s_anti = 0.0, s_pair = 0.0, u_anti = 0.0, u_pair = 0.0;
  S.by_definition.for_each_index([&](const std::array<int, 4>& x) {
    const int h = x[0], i = x[1], j = x[2], k = x[3];
    s_anti = std::max(s_anti, std::abs(S.by_definition(h, i, j, k) + S.by_definition(h, i, k, j)));
    s_pair = std::max(s_pair, std::abs(S.by_definition(h, i, j, k) - S.by_definition(i, h, k, j)));
    u_anti = std::max(u_anti, std::abs(U(h, i, j, k) + U(h, i, k, j)));
    u_pair = std::max(u_pair, std::abs(U(h, i, j, k) - U(i, h, k, j)));
  });
  const double sS = max_abs(S.by_definition);
  const double sU = max_abs(U);
  rep.add("curv.S_antisymmetry", ratio(s_anti, sS), tol.curvature_symmetry);
  rep.add("curv.S_pair_symmetry", ratio(s_pair, sS), tol.curvature_symmetry);
  rep.add("curv.U_antisymmetry", ratio(u_anti, sU), tol.curvature_symmetry);
  rep.add("curv.U_pair_symmetry", ratio(u_pair, sU), tol.curvature_symmetry);

  if (c.n >= 4) {
    const S3Diagnosis d = s3_fit(c, tol.s3);
    const S3Diagnosis d2 = s3_fit(make_context(A, Momentum(2.0 * c.p)), tol.s3);
    rep.add("curv.lambda_homogeneity", std::abs(d.lambda - d2.lambda) / std::max(std::abs(d.lambda), 1.0),
            tol.lambda_homogeneity);
    if (d.is_s3_like) {
      const Tens4 B = angular_basis(c);
      Tens4 k2s = (c.K * c.K) * S.by_definition;
      const double scale = max_abs(k2s);
      k2s -= d.S * B;
      rep.add("curv.s3_form", ratio(max_abs(k2s), scale), tol.s3);
    }
  }
  return rep;
}

inline CheckReport ttensor_checks(const EvalContext& c, const Tolerances& tol) {
  using detail::ratio;
  CheckReport rep;
  const TTensorResult T = compute_T_definition(c, tol.fd_step_first);
  rep.add("ttensor.routes", t_route_ratio(T, tol.t_rtol, tol.t_atol), 1.0);
  const double sT = std::max(max_abs(T.T_closed), 1e-300);
  rep.add("ttensor.symmetry", ratio(full_symmetry_residual(T.T_closed), T.closed_term_scale), tol.t_symmetry);
  const double pl1 = detail::l1(c.p);
  rep.add("ttensor.annihilate",
          ratio(max_abs(contract_last(T.T_closed, c.p)), std::max(sT, T.closed_term_scale) * pl1),
          tol.annihilation);
  rep.add("ttensor.definition_symmetry", ratio(full_symmetry_residual(T.T_def), T.definition_scale),
          tol.t_definition);
  rep.add("ttensor.definition_annihilate",
          ratio(max_abs(contract_last(T.T_def, c.p)), T.definition_scale * pl1), tol.t_definition);
  return rep;
}

/// Every generic identity at one point.
inline CheckReport point_checks(const SymTensor& A, const Momentum& p, const Tolerances& tol,
                                std::mt19937_64& rng) {
  const EvalContext c = make_context(A, p);
  CheckReport rep;
  rep.append(metric_checks(A, c, tol));
  rep.append(vgeometry_checks(A, c, tol, rng));
  rep.append(curvature_checks(A, c, tol));
  rep.append(ttensor_checks(c, tol));
  return rep;
}

struct VerifyOptions {
  int samples = 25;
  std::uint64_t seed = 7;
  Tolerances tol;
};

/// Samples points, runs the identity suite at each, and adds the
/// Berwald-Moor theorem checks when bm_dim > 0. Record names carry the
/// sample index as a "p<k>." prefix.
inline CheckReport run_verify(const SymTensor& A, const std::string& descriptor, int bm_dim,
                              const VerifyOptions& opt) {
  CheckReport rep;
  rep.metric = descriptor;
  rep.seed = opt.seed;
  const std::vector<Momentum> pts = sample_points(A, opt.samples, opt.seed);
  if (bm_dim == 0) rep.skipped.push_back("bm.*");
  for (std::size_t s = 0; s < pts.size(); ++s) {
    const Momentum& p = pts[s];
    rep.points.emplace_back(p.begin(), p.end());
    std::mt19937_64 rng(opt.seed * 1000003ULL + s);
    CheckReport one = point_checks(A, p, opt.tol, rng);
    if (bm_dim > 0) one.append(bm_theorem_check(bm_dim, p, opt.tol));
    const std::string prefix = "p" + std::to_string(s) + ".";
    for (CheckRecord r : one.records()) {
      r.name = prefix + r.name;
      rep.add(std::move(r));
    }
  }
  return rep;
}

}  // namespace mroot

#endif  // MROOT_SUITE_HPP
