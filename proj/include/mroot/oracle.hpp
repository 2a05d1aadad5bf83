#ifndef MROOT_ORACLE_HPP
#define MROOT_ORACLE_HPP

// Independent verification primitives: central finite differences in the
// momenta and a literal ordered-tuple contraction. Nothing here reuses the
// compressed contraction path or any closed-form geometry.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mroot/dense.hpp"
#include "mroot/error.hpp"
#include "mroot/symtensor.hpp"

namespace mroot::oracle {

/// A scalar function of the momenta and the region where it may be sampled.
struct ScalarField {
  std::function<double(const Vec&)> eval;
  std::function<bool(const Vec&)> admissible;  // empty: everywhere admissible
};

/// Same as ScalarField for a flattened tensor-valued function.
struct TensorField {
  std::function<std::vector<double>(const Vec&)> eval;
  std::function<bool(const Vec&)> admissible;
};

/// Per-component step h_i = factor * max(|p_i|, 1e-3 * max_j |p_j|). The
/// fields sampled here are homogeneous in p and may vary like 1/p_i, so the
/// step follows the component's own magnitude.
inline Vec fd_steps(const Vec& p, double factor) {
  const double floor = 1e-3 * p.cwiseAbs().maxCoeff();
  if (!(floor > 0.0)) throw Error(ErrorCode::InvalidArgument, "finite differences at p = 0");
  Vec h(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) h[i] = factor * std::max(std::abs(p[i]), floor);
  return h;
}

namespace detail {

template <typename Field>
auto sample(const Field& f, const Vec& q) {
  if (f.admissible && !f.admissible(q))
    throw Error(ErrorCode::InadmissiblePerturbation, "stencil point leaves the admissible domain");
  try {
    return f.eval(q);
  } catch (const Error& e) {
    throw Error(ErrorCode::InadmissiblePerturbation, std::string("stencil evaluation failed: ") + e.what());
  }
}

}  // namespace detail

/// Central-difference gradient with fd_steps(p, step_factor).
inline Vec fd_grad(const ScalarField& f, const Vec& p,
                   double step_factor = std::cbrt(std::numeric_limits<double>::epsilon())) {
  const Vec h = fd_steps(p, step_factor);
  Vec g(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    Vec plus = p, minus = p;
    plus[i] += h[i];
    minus[i] -= h[i];
    g[i] = (detail::sample(f, plus) - detail::sample(f, minus)) / (2.0 * h[i]);
  }
  return g;
}

/// Step for second differences: factor * sqrt(|p_i| * max_j |p_j|), with |p_i|
/// floored as in fd_steps. Invariant under p -> t p up to the factor.
inline Vec fd_hessian_steps(const Vec& p, double factor) {
  const double top = p.cwiseAbs().maxCoeff();
  if (!(top > 0.0)) throw Error(ErrorCode::InvalidArgument, "finite differences at p = 0");
  Vec h(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) h[i] = factor * std::sqrt(std::max(std::abs(p[i]), 1e-3 * top) * top);
  return h;
}

struct HessianEstimate {
  Mat value;          // symmetrized
  double asymmetry;   // max |H_ij - H_ji| before symmetrization
};

namespace detail {

inline Mat central_hessian(const ScalarField& f, const Vec& p, const Vec& h) {
  const Eigen::Index n = p.size();
  const double f0 = sample(f, p);
  Mat H(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) {
        Vec plus = p, minus = p;
        plus[i] += h[i];
        minus[i] -= h[i];
        H(i, i) = (sample(f, plus) - 2.0 * f0 + sample(f, minus)) / (h[i] * h[i]);
        continue;
      }
      auto at = [&](double si, double sj) {
        Vec q = p;
        q[i] += si * h[i];
        q[j] += sj * h[j];
        return sample(f, q);
      };
      H(i, j) = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h[i] * h[j]);
    }
  }
  return H;
}

}  // namespace detail

/// Central-difference Hessian with one Richardson step, (4 H(h/2) - H(h)) / 3,
/// so the truncation error is O(h^4). Off-diagonal entries use the four-point
/// cross stencil evaluated independently for (i,j) and (j,i).
inline HessianEstimate fd_hessian(const ScalarField& f, const Vec& p,
                                  double step_factor = std::pow(std::numeric_limits<double>::epsilon(), 1.0 / 6.0)) {
  const Vec h = fd_hessian_steps(p, step_factor);
  const Mat coarse = detail::central_hessian(f, p, h);
  const Mat fine = detail::central_hessian(f, p, Vec(0.5 * h));
  const Mat H = (4.0 * fine - coarse) / 3.0;
  const double asym = max_abs(Mat(H - H.transpose()));
  return HessianEstimate{0.5 * (H + H.transpose()), asym};
}

/// Central-difference partials of a tensor-valued field: entry [k] holds
/// d(field)/dp_k as a flat vector.
inline std::vector<std::vector<double>> fd_partials(
    const TensorField& f, const Vec& p, double step_factor = std::cbrt(std::numeric_limits<double>::epsilon())) {
  const Vec h = fd_steps(p, step_factor);
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(p.size()));
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    Vec plus = p, minus = p;
    plus[k] += h[k];
    minus[k] -= h[k];
    const std::vector<double> fp = detail::sample(f, plus);
    const std::vector<double> fm = detail::sample(f, minus);
    std::vector<double> d(fp.size());
    for (std::size_t q = 0; q < fp.size(); ++q) d[q] = (fp[q] - fm[q]) / (2.0 * h[k]);
    out.push_back(std::move(d));
  }
  return out;
}

/// Runtime-rank dense array, row-major.
struct DenseArray {
  int dim = 0;
  int rank = 0;
  std::vector<double> data;

  double at(std::span<const int> idx) const {
    std::size_t off = 0;
    for (int i : idx) off = off * static_cast<std::size_t>(dim) + static_cast<std::size_t>(i);
    return data[off];
  }
};

inline constexpr std::size_t kDenseLimit = 10'000'000;

/// Expands A to every ordered index position, then contracts the last slot
/// with p k times by literal summation.
inline DenseArray dense_contract(const SymTensor& A, const Vec& p, int k) {
  const int n = A.dim();
  const int m = A.rank();
  if (p.size() != n) throw Error(ErrorCode::DimensionMismatch, "momentum size");
  if (k < 0 || k > m) throw Error(ErrorCode::InvalidArgument, "contraction count out of range");
  std::size_t total = 1;
  for (int r = 0; r < m; ++r) {
    total *= static_cast<std::size_t>(n);
    if (total > kDenseLimit) throw Error(ErrorCode::TooLarge, "n^m exceeds the dense oracle limit");
  }

  DenseArray cur{n, m, std::vector<double>(total, 0.0)};
  std::vector<int> idx(static_cast<std::size_t>(m), 0);
  for (std::size_t q = 0; q < total; ++q) {
    cur.data[q] = A.get(idx);
    for (int r = m - 1; r >= 0; --r) {
      if (++idx[static_cast<std::size_t>(r)] < n) break;
      idx[static_cast<std::size_t>(r)] = 0;
    }
  }

  for (int step = 0; step < k; ++step) {
    DenseArray next{n, cur.rank - 1, std::vector<double>(cur.data.size() / static_cast<std::size_t>(n), 0.0)};
    for (std::size_t q = 0; q < next.data.size(); ++q) {
      double s = 0.0;
      for (int b = 0; b < n; ++b) s += cur.data[q * static_cast<std::size_t>(n) + static_cast<std::size_t>(b)] * p[b];
      next.data[q] = s;
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace mroot::oracle

#endif  // MROOT_ORACLE_HPP
