#ifndef MROOT_SYMTENSOR_HPP
#define MROOT_SYMTENSOR_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mroot/dense.hpp"
#include "mroot/error.hpp"

namespace mroot {

inline constexpr int kMaxDim = 8;
inline constexpr int kMaxRank = 8;

/// Multi-index with 0-based components. SymTensor keys are kept sorted.
using MultiIndex = std::vector<int>;

/// Covector p_i, the evaluation point.
using Momentum = Vec;

/// Number of distinct orderings of a sorted multi-index: m! / (k1! k2! ...).
inline std::int64_t multiplicity(std::span<const int> sorted) {
  std::int64_t result = 1;
  std::int64_t placed = 0;
  std::size_t q = 0;
  while (q < sorted.size()) {
    std::size_t run = 1;
    while (q + run < sorted.size() && sorted[q + run] == sorted[q]) ++run;
    // multiply by binom(placed + run, run), built incrementally so every
    // intermediate stays integral
    for (std::size_t r = 1; r <= run; ++r) {
      ++placed;
      result = result * placed / static_cast<std::int64_t>(r);
    }
    q += run;
  }
  return result;
}

/// Fully symmetric contravariant tensor a^{i1...im} over dimension n. Each
/// unordered multi-index is stored once under its sorted key and the stored
/// value is the component itself. Rank 0 holds a scalar under the empty key.
class SymTensor {
 public:
  SymTensor() = default;
  SymTensor(int dim, int rank) : dim_(dim), rank_(rank) {}

  int dim() const { return dim_; }
  int rank() const { return rank_; }

  /// Component lookup; any index order is accepted. Absent entries are 0.
  double get(MultiIndex idx) const {
    if (static_cast<int>(idx.size()) != rank_)
      throw Error(ErrorCode::DimensionMismatch, "index length " + std::to_string(idx.size()) +
                                                    " does not match rank " + std::to_string(rank_));
    for (int i : idx)
      if (i < 0 || i >= dim_) throw Error(ErrorCode::IndexOutOfRange, "index component " + std::to_string(i));
    std::sort(idx.begin(), idx.end());
    auto it = coeffs_.find(idx);
    return it == coeffs_.end() ? 0.0 : it->second;
  }

  /// Value of a rank-0 tensor.
  double scalar() const {
    if (rank_ != 0) throw Error(ErrorCode::InvalidArgument, "scalar() on a tensor of rank " + std::to_string(rank_));
    auto it = coeffs_.find({});
    return it == coeffs_.end() ? 0.0 : it->second;
  }

  const std::map<MultiIndex, double>& entries() const { return coeffs_; }

 private:
  friend SymTensor build_sym(int, int, const std::vector<std::pair<MultiIndex, double>>&);
  friend SymTensor contract(const SymTensor&, const Momentum&, int);

  int dim_ = 0;
  int rank_ = 0;
  std::map<MultiIndex, double> coeffs_;
};

/// Builds a coefficient tensor from (index, value) entries with 0-based
/// indices in any order. Zero values are dropped.
inline SymTensor build_sym(int dim, int rank, const std::vector<std::pair<MultiIndex, double>>& entries) {
  if (rank < 3) throw Error(ErrorCode::RankTooSmall, "rank " + std::to_string(rank) + " < 3");
  if (dim < 2) throw Error(ErrorCode::InvalidDimension, "dim " + std::to_string(dim) + " < 2");
  if (dim > kMaxDim || rank > kMaxRank)
    throw Error(ErrorCode::TooLarge, "dim and rank are capped at " + std::to_string(kMaxDim));
  SymTensor t(dim, rank);
  for (const auto& [index, value] : entries) {
    if (static_cast<int>(index.size()) != rank)
      throw Error(ErrorCode::DimensionMismatch, "entry has " + std::to_string(index.size()) +
                                                    " indices, rank is " + std::to_string(rank));
    MultiIndex key = index;
    std::sort(key.begin(), key.end());
    for (int i : key)
      if (i < 0 || i >= dim)
        throw Error(ErrorCode::IndexOutOfRange,
                    "index " + std::to_string(i + 1) + " outside [1, " + std::to_string(dim) + "]");
    auto [it, inserted] = t.coeffs_.emplace(std::move(key), value);
    if (!inserted) throw Error(ErrorCode::DuplicateIndex, "repeated unordered index");
  }
  std::erase_if(t.coeffs_, [](const auto& kv) { return kv.second == 0.0; });
  return t;
}

/// Contracts k slots of T with p: the result at free index J is the sum over
/// all ordered bound tuples b of a^{J b} p_{b1}...p_{bk}. Each stored entry is
/// split into (free, bound) sub-multisets, and the bound part is weighted by
/// its number of orderings.
inline SymTensor contract(const SymTensor& T, const Momentum& p, int k) {
  if (p.size() != T.dim())
    throw Error(ErrorCode::DimensionMismatch, "momentum has " + std::to_string(p.size()) +
                                                  " components, tensor dim is " + std::to_string(T.dim()));
  if (k < 0 || k > T.rank())
    throw Error(ErrorCode::InvalidArgument, "cannot contract " + std::to_string(k) + " slots of a rank-" +
                                                std::to_string(T.rank()) + " tensor");
  SymTensor out(T.dim(), T.rank() - k);
  if (k == 0) {
    out.coeffs_ = T.coeffs_;
    return out;
  }

  std::vector<std::pair<int, int>> runs;  // (index value, repetition count)
  std::vector<int> bound_counts;
  MultiIndex free_part;
  MultiIndex bound_part;

  for (const auto& [index, value] : T.coeffs_) {
    runs.clear();
    for (int i : index) {
      if (!runs.empty() && runs.back().first == i)
        ++runs.back().second;
      else
        runs.emplace_back(i, 1);
    }
    bound_counts.assign(runs.size(), 0);

    // Enumerate bound_counts with 0 <= b_j <= c_j and sum b_j = k.
    auto emit = [&] {
      free_part.clear();
      bound_part.clear();
      double weight = value;
      for (std::size_t j = 0; j < runs.size(); ++j) {
        for (int r = 0; r < runs[j].second - bound_counts[j]; ++r) free_part.push_back(runs[j].first);
        for (int r = 0; r < bound_counts[j]; ++r) {
          bound_part.push_back(runs[j].first);
          weight *= p[runs[j].first];
        }
      }
      weight *= static_cast<double>(multiplicity(bound_part));
      out.coeffs_[free_part] += weight;
    };
    auto recurse = [&](auto&& self, std::size_t j, int remaining) -> void {
      if (j == runs.size()) {
        if (remaining == 0) emit();
        return;
      }
      const int hi = std::min(remaining, runs[j].second);
      for (int b = 0; b <= hi; ++b) {
        bound_counts[j] = b;
        self(self, j + 1, remaining - b);
      }
      bound_counts[j] = 0;
    };
    recurse(recurse, 0, k);
  }
  return out;
}

inline Vec to_vector(const SymTensor& t) {
  if (t.rank() != 1) throw Error(ErrorCode::InvalidArgument, "to_vector needs rank 1");
  Vec v = Vec::Zero(t.dim());
  for (const auto& [idx, val] : t.entries()) v[idx[0]] = val;
  return v;
}

inline Mat to_matrix(const SymTensor& t) {
  if (t.rank() != 2) throw Error(ErrorCode::InvalidArgument, "to_matrix needs rank 2");
  Mat m = Mat::Zero(t.dim(), t.dim());
  for (const auto& [idx, val] : t.entries()) {
    m(idx[0], idx[1]) = val;
    m(idx[1], idx[0]) = val;
  }
  return m;
}

/// Expands a rank-R symmetric tensor into every ordered position.
template <int R>
DenseTensor<R> to_dense(const SymTensor& t) {
  if (t.rank() != R) throw Error(ErrorCode::InvalidArgument, "to_dense rank mismatch");
  DenseTensor<R> d(t.dim());
  for (const auto& [idx, val] : t.entries()) {
    std::array<int, R> perm{};
    std::copy(idx.begin(), idx.end(), perm.begin());
    do {
      d.at(perm) = val;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return d;
}

}  // namespace mroot

#endif  // MROOT_SYMTENSOR_HPP
