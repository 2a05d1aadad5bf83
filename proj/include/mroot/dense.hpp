#ifndef MROOT_DENSE_HPP
#define MROOT_DENSE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mroot {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Dense cube of side n with row-major flat storage; index (i0, i1, ...) maps
/// to ((i0 * n + i1) * n + ...).
template <int Rank>
class DenseTensor {
  static_assert(Rank >= 1);

 public:
  DenseTensor() = default;
  explicit DenseTensor(int n) : n_(n), data_(flat_size(n), 0.0) {}

  static std::size_t flat_size(int n) {
    std::size_t s = 1;
    for (int r = 0; r < Rank; ++r) s *= static_cast<std::size_t>(n);
    return s;
  }

  int dim() const { return n_; }
  static constexpr int rank() { return Rank; }

  template <typename... I>
  double& operator()(I... idx) {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<int>(idx)...})];
  }
  template <typename... I>
  double operator()(I... idx) const {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<int>(idx)...})];
  }

  double& at(const std::array<int, Rank>& idx) { return data_[offset(idx)]; }
  double at(const std::array<int, Rank>& idx) const { return data_[offset(idx)]; }

  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }

  DenseTensor& operator+=(const DenseTensor& o) {
    for (std::size_t q = 0; q < data_.size(); ++q) data_[q] += o.data_[q];
    return *this;
  }
  DenseTensor& operator-=(const DenseTensor& o) {
    for (std::size_t q = 0; q < data_.size(); ++q) data_[q] -= o.data_[q];
    return *this;
  }
  DenseTensor& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }
  friend DenseTensor operator+(DenseTensor a, const DenseTensor& b) { return a += b; }
  friend DenseTensor operator-(DenseTensor a, const DenseTensor& b) { return a -= b; }
  friend DenseTensor operator*(double s, DenseTensor a) { return a *= s; }

  // Calls f(idx) for every index tuple in row-major order.
  template <typename F>
  void for_each_index(F&& f) const {
    std::array<int, Rank> idx{};
    for (std::size_t q = 0; q < data_.size(); ++q) {
      f(idx);
      for (int r = Rank - 1; r >= 0; --r) {
        if (++idx[r] < n_) break;
        idx[r] = 0;
      }
    }
  }

 private:
  std::size_t offset(const std::array<int, Rank>& idx) const {
    std::size_t off = 0;
    for (int r = 0; r < Rank; ++r) off = off * static_cast<std::size_t>(n_) + static_cast<std::size_t>(idx[r]);
    return off;
  }

  int n_ = 0;
  std::vector<double> data_;
};

using Tens3 = DenseTensor<3>;
using Tens4 = DenseTensor<4>;

inline double max_abs(std::span<const double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}
inline double max_abs(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }
inline double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
template <int R>
double max_abs(const DenseTensor<R>& t) { return max_abs(t.flat()); }

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t q = 0; q < a.size(); ++q) m = std::max(m, std::abs(a[q] - b[q]));
  return m;
}
inline double max_abs_diff(const Vec& a, const Vec& b) { return max_abs(Vec(a - b)); }
inline double max_abs_diff(const Mat& a, const Mat& b) { return max_abs(Mat(a - b)); }
template <int R>
double max_abs_diff(const DenseTensor<R>& a, const DenseTensor<R>& b) {
  return max_abs_diff(a.flat(), b.flat());
}

// Max componentwise difference divided by the largest reference magnitude.
// Both-zero gives 0; a zero reference with a nonzero difference gives inf.
template <typename T>
double relative_diff(const T& value, const T& reference) {
  const double diff = max_abs_diff(value, reference);
  const double scale = max_abs(reference);
  if (diff == 0.0) return 0.0;
  if (scale == 0.0) return std::numeric_limits<double>::infinity();
  return diff / scale;
}

// Contraction over the last index: result(i..) = sum_k t(i.., k) p_k.
inline Tens3 contract_last(const Tens4& t, const Vec& p) {
  const int n = t.dim();
  Tens3 r(n);
  r.for_each_index([&](const std::array<int, 3>& a) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += t(a[0], a[1], a[2], k) * p[k];
    r.at(a) = s;
  });
  return r;
}
inline Mat contract_last(const Tens3& t, const Vec& p) {
  const int n = t.dim();
  Mat r = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) r(i, j) += t(i, j, k) * p[k];
  return r;
}

// Largest |t(σ(idx)) - t(idx)| over all index permutations σ.
template <int R>
double full_symmetry_residual(const DenseTensor<R>& t) {
  double worst = 0.0;
  t.for_each_index([&](const std::array<int, R>& idx) {
    std::array<int, R> perm = idx;
    std::sort(perm.begin(), perm.end());
    const double ref = t.at(idx);
    do {
      worst = std::max(worst, std::abs(t.at(perm) - ref));
    } while (std::next_permutation(perm.begin(), perm.end()));
  });
  return worst;
}

}  // namespace mroot

#endif  // MROOT_DENSE_HPP
