#include "geosub/point_set.hpp"

#include <cstring>
#include <cstdio>

namespace geosub {

PointSet::PointSet(RowMatrix rows) : n_(rows.rows()), d_(rows.cols()), dense_(std::move(rows)) {
  finish();
}

PointSet::PointSet(SparseRows rows) : n_(rows.rows()), d_(rows.cols()) {
  rows.makeCompressed();
  if (d_ <= kDenseThreshold) {
    dense_ = RowMatrix(rows);
  } else {
    sparse_ = true;
    sparse_rows_ = std::move(rows);
  }
  finish();
}

void PointSet::finish() {
  if (n_ < 1 || d_ < 1) throw std::invalid_argument("PointSet: need n >= 1 and d >= 1");
  sq_norms_.resize(static_cast<std::size_t>(n_));
  for (Index i = 0; i < n_; ++i) {
    sq_norms_[static_cast<std::size_t>(i)] =
        sparse_ ? sparse_rows_.row(i).squaredNorm() : dense_.row(i).squaredNorm();
  }
}

Index PointSet::nnz() const {
  if (sparse_) return sparse_rows_.nonZeros();
  return static_cast<Index>((dense_.array() != 0.0).count());
}

double PointSet::dot(Index i, Index j) const {
  if (sparse_) return sparse_rows_.row(i).dot(sparse_rows_.row(j));
  return dense_.row(i).dot(dense_.row(j));
}

double PointSet::dot(Index i, const Vector& v) const {
  if (sparse_) {
    double s = 0.0;
    for (SparseRows::InnerIterator it(sparse_rows_, i); it; ++it) s += it.value() * v(it.col());
    return s;
  }
  return dense_.row(i).dot(v.transpose());
}

double PointSet::sq_distance(Index i, const Vector& c, double c_sq_norm) const {
  if (sparse_) return std::max(0.0, sq_norm(i) + c_sq_norm - 2.0 * dot(i, c));
  return (dense_.row(i).transpose() - c).squaredNorm();
}

double PointSet::sq_distance(Index i, Index j) const {
  if (sparse_) return std::max(0.0, sq_norm(i) + sq_norm(j) - 2.0 * dot(i, j));
  return (dense_.row(i) - dense_.row(j)).squaredNorm();
}

void PointSet::add_row_to(Index i, double scale, Vector& acc) const {
  if (sparse_) {
    for (SparseRows::InnerIterator it(sparse_rows_, i); it; ++it) acc(it.col()) += scale * it.value();
  } else {
    acc.noalias() += scale * dense_.row(i).transpose();
  }
}

Vector PointSet::row(Index i) const {
  if (sparse_) return Vector(sparse_rows_.row(i).transpose());
  return dense_.row(i).transpose();
}

PointSet PointSet::subset(std::span<const Index> idx) const {
  if (idx.empty()) throw std::invalid_argument("PointSet::subset: empty index list");
  if (sparse_) {
    std::vector<Eigen::Triplet<double>> trips;
    for (std::size_t r = 0; r < idx.size(); ++r) {
      for (SparseRows::InnerIterator it(sparse_rows_, idx[r]); it; ++it)
        trips.emplace_back(static_cast<Index>(r), it.col(), it.value());
    }
    SparseRows out(static_cast<Index>(idx.size()), d_);
    out.setFromTriplets(trips.begin(), trips.end());
    return PointSet(std::move(out));
  }
  RowMatrix out(static_cast<Index>(idx.size()), d_);
  for (std::size_t r = 0; r < idx.size(); ++r) out.row(static_cast<Index>(r)) = dense_.row(idx[r]);
  return PointSet(std::move(out));
}

IndexList uniform_sample(const PointSet& P, Index m, RngStream& rng) {
  if (m < 1) throw std::invalid_argument("uniform_sample: m must be >= 1");
  IndexList out(static_cast<std::size_t>(m));
  for (auto& v : out) v = rng.index(P.n());
  return out;
}

namespace {

struct Fnv1a {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  void bytes(const void* p, std::size_t len) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t k = 0; k < len; ++k) {
      h ^= b[k];
      h *= 0x100000001b3ULL;
    }
  }
  void value(double x) {
    if (x == 0.0) x = 0.0;  // fold -0.0
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    bytes(&bits, sizeof bits);
  }
};

}  // namespace

std::string dataset_digest(const PointSet& P) {
  Fnv1a f;
  const std::int64_t dims[2] = {P.n(), P.d()};
  f.bytes(dims, sizeof dims);
  for (Index i = 0; i < P.n(); ++i) {
    const Vector r = P.row(i);
    for (Index j = 0; j < P.d(); ++j) f.value(r(j));
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(f.h));
  return buf;
}

}  // namespace geosub
