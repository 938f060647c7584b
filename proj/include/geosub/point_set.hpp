#pragma once

#include "geosub/common.hpp"
#include "geosub/rng.hpp"

#include <Eigen/SparseCore>

#include <span>

namespace geosub {

using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Immutable n x d point matrix, stored dense or as sparse rows.
/// Sparse input with d <= kDenseThreshold is densified on construction.
class PointSet {
 public:
  static constexpr Index kDenseThreshold = 64;

  PointSet() = default;
  explicit PointSet(RowMatrix rows);
  explicit PointSet(SparseRows rows);

  Index n() const { return n_; }
  Index d() const { return d_; }
  Index nnz() const;
  bool is_sparse() const { return sparse_; }

  double sq_norm(Index i) const { return sq_norms_[static_cast<std::size_t>(i)]; }
  double dot(Index i, Index j) const;
  double dot(Index i, const Vector& v) const;
  /// ||p_i - c||^2, given ||c||^2 (only used on the sparse path).
  double sq_distance(Index i, const Vector& c, double c_sq_norm) const;
  double sq_distance(Index i, const Vector& c) const { return sq_distance(i, c, c.squaredNorm()); }
  double sq_distance(Index i, Index j) const;
  double distance(Index i, Index j) const { return std::sqrt(sq_distance(i, j)); }

  /// acc += scale * p_i
  void add_row_to(Index i, double scale, Vector& acc) const;
  Vector row(Index i) const;

  const RowMatrix& dense() const { return dense_; }
  const SparseRows& sparse() const { return sparse_rows_; }

  PointSet subset(std::span<const Index> idx) const;

 private:
  Index n_ = 0;
  Index d_ = 0;
  bool sparse_ = false;
  RowMatrix dense_;
  SparseRows sparse_rows_;
  std::vector<double> sq_norms_;

  void finish();
};

/// m indices drawn i.i.d. uniform over [0, n) with replacement.
IndexList uniform_sample(const PointSet& P, Index m, RngStream& rng);

/// FNV-1a digest of (n, d, coordinates), hex encoded. Independent of storage mode.
std::string dataset_digest(const PointSet& P);

}  // namespace geosub
