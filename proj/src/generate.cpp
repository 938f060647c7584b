#include "geosub/generate.hpp"

#include "geosub/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace geosub {

const std::vector<std::string>& generator_families() {
  static const std::vector<std::string> names = {"uniform-ball",     "simplex",         "planted-outliers",
                                                 "two-class-margin", "one-class-margin", "line-with-noise",
                                                 "k-clusters"};
  return names;
}

double simplex_radius(Index d) {
  const double dd = static_cast<double>(d);
  return std::sqrt(dd / (2.0 * (1.0 + dd)));
}

RowMatrix regular_simplex(Index d) {
  if (d < 1) throw std::invalid_argument("regular_simplex: d must be >= 1");
  RowMatrix V = RowMatrix::Zero(d + 1, d);
  // Vertex k sits above the centroid of vertices 0..k-1 along axis k-1.
  for (Index k = 1; k <= d; ++k) {
    const Eigen::RowVectorXd centroid = V.topRows(k).colwise().mean();
    const double r_prev = simplex_radius(k - 1);
    V.row(k) = centroid;
    V(k, k - 1) = std::sqrt(1.0 - r_prev * r_prev);
  }
  const Eigen::RowVectorXd centroid = V.colwise().mean();
  V.rowwise() -= centroid;
  return V;
}

namespace {

void check_common(const GenerateParams& p) {
  if (p.n < 1 || p.d < 1) throw std::invalid_argument("generate: n and d must be >= 1");
  if (p.gamma < 0.0 || p.gamma >= 1.0) throw std::invalid_argument("generate: gamma must be in [0,1)");
  if (p.gamma > 0.0 && ceil_count(p.gamma * static_cast<double>(p.n)) >= p.n)
    throw std::invalid_argument("generate: n too small for the requested outliers");
  if (!(p.radius > 0.0)) throw std::invalid_argument("generate: radius must be positive");
  if (p.separation < 1.0) throw std::invalid_argument("generate: separation must be >= 1");
}

Index inlier_count(const GenerateParams& p) {
  return ceil_count((1.0 - p.gamma) * static_cast<double>(p.n));
}

/// Shuffle rows so inliers and outliers interleave; records the inlier positions.
GeneratedInstance assemble(std::vector<Vector> rows, Index inliers, RngStream& rng, std::vector<int> labels = {}) {
  const Index n = static_cast<Index>(rows.size());
  IndexList perm(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (Index i = n - 1; i > 0; --i) std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(rng.index(i + 1))]);
  RowMatrix M(n, rows.front().size());
  GeneratedInstance out;
  std::vector<int> new_labels(labels.empty() ? 0 : static_cast<std::size_t>(n));
  for (Index pos = 0; pos < n; ++pos) {
    const Index src = perm[static_cast<std::size_t>(pos)];
    M.row(pos) = rows[static_cast<std::size_t>(src)].transpose();
    if (src < inliers) out.truth.inlier_indices.push_back(pos);
    if (!labels.empty()) new_labels[static_cast<std::size_t>(pos)] = labels[static_cast<std::size_t>(src)];
  }
  out.points = PointSet(std::move(M));
  out.labels = std::move(new_labels);
  return out;
}

Vector orthogonal_noise(const Vector& u, double sigma, RngStream& rng) {
  Vector g(u.size());
  for (Index j = 0; j < g.size(); ++j) g(j) = sigma * rng.normal();
  return g - g.dot(u) * u;
}

GeneratedInstance uniform_ball(const GenerateParams& p, RngStream& rng) {
  std::vector<Vector> rows;
  for (Index i = 0; i < p.n; ++i) rows.push_back(random_in_ball(p.d, p.radius, rng));
  GeneratedInstance g = assemble(std::move(rows), p.n, rng);
  const OracleResult o = exact_meb(g.points);
  g.truth.optimum_size = o.optimum_size;
  g.truth.optimum_center = {o.optimum_center.coords()};
  return g;
}

GeneratedInstance simplex(const GenerateParams& p) {
  GeneratedInstance g;
  g.points = PointSet(regular_simplex(p.d));
  for (Index i = 0; i <= p.d; ++i) g.truth.inlier_indices.push_back(i);
  g.truth.optimum_size = simplex_radius(p.d);
  g.truth.optimum_center = {Vector::Zero(p.d)};
  return g;
}

GeneratedInstance planted_outliers(const GenerateParams& p, RngStream& rng) {
  const Index m = inlier_count(p);
  std::vector<Vector> rows;
  for (Index i = 0; i < m; ++i) rows.push_back(random_in_ball(p.d, p.radius, rng));
  // The oracle center lies in the inlier hull, within `radius` of the origin.
  for (Index i = m; i < p.n; ++i) {
    const double r = (p.separation + 1.0) * p.radius * (1.0 + 0.5 * rng.uniform());
    rows.push_back(r * random_direction(p.d, rng));
  }
  GeneratedInstance g = assemble(std::move(rows), m, rng);
  g.gamma = p.gamma;
  const OracleResult o = exact_meb(g.points.subset(g.truth.inlier_indices));
  g.truth.optimum_size = o.optimum_size;
  g.truth.optimum_center = {o.optimum_center.coords()};
  return g;
}

GeneratedInstance k_clusters(const GenerateParams& p, RngStream& rng) {
  if (p.k < 1) throw std::invalid_argument("generate: k must be >= 1");
  const Index m = inlier_count(p);
  if (m < p.k) throw std::invalid_argument("generate: fewer inliers than clusters");
  const double spread = (p.separation + 2.0) * p.radius;
  std::vector<Vector> centers;
  while (static_cast<Index>(centers.size()) < p.k) {
    const Vector c = spread * random_direction(p.d, rng);
    bool ok = true;
    for (const Vector& other : centers) ok = ok && (c - other).norm() >= spread;
    if (ok || p.d == 1) centers.push_back(c);
  }
  std::vector<Vector> rows;
  std::vector<IndexList> members(static_cast<std::size_t>(p.k));
  for (Index i = 0; i < m; ++i) {
    const Index j = i % p.k;
    members[static_cast<std::size_t>(j)].push_back(i);
    rows.push_back(centers[static_cast<std::size_t>(j)] + random_in_ball(p.d, p.radius, rng));
  }
  for (Index i = m; i < p.n; ++i) {
    const double r = spread + (p.separation + 1.0) * p.radius * (1.0 + 0.5 * rng.uniform());
    rows.push_back(r * random_direction(p.d, rng));
  }
  std::vector<Vector> copy = rows;
  GeneratedInstance g = assemble(std::move(rows), m, rng);
  g.gamma = p.gamma;
  for (const IndexList& mem : members) {
    RowMatrix M(static_cast<Index>(mem.size()), p.d);
    for (std::size_t r = 0; r < mem.size(); ++r) M.row(static_cast<Index>(r)) = copy[static_cast<std::size_t>(mem[r])].transpose();
    const OracleResult o = exact_meb(PointSet(std::move(M)));
    g.truth.optimum_size = std::max(g.truth.optimum_size, o.optimum_size);
    g.truth.optimum_center.push_back(o.optimum_center.coords());
  }
  return g;
}

GeneratedInstance line_with_noise(const GenerateParams& p, RngStream& rng) {
  if (p.d < 2) throw std::invalid_argument("generate: line-with-noise needs d >= 2");
  const Index m = inlier_count(p);
  const Vector anchor = random_in_ball(p.d, p.radius, rng);
  const Vector u = random_direction(p.d, rng);
  const double half_length = 10.0 * p.radius;
  std::vector<Vector> rows;
  double width = 0.0;
  for (Index i = 0; i < m; ++i) {
    const Vector off = orthogonal_noise(u, p.noise, rng);
    width = std::max(width, off.norm());
    rows.push_back(anchor + rng.uniform(-half_length, half_length) * u + off);
  }
  const double base = std::max(width, 1e-3 * p.radius);
  for (Index i = m; i < p.n; ++i) {
    Vector dir = orthogonal_noise(u, 1.0, rng);
    dir /= dir.norm();
    const double r = p.separation * base * (1.0 + 0.5 * rng.uniform()) + 1e-12;
    rows.push_back(anchor + rng.uniform(-half_length, half_length) * u + r * dir);
  }
  GeneratedInstance g = assemble(std::move(rows), m, rng);
  g.gamma = p.gamma;
  g.truth.optimum_size = width;
  g.truth.optimum_center = {anchor, u};
  return g;
}

/// Inliers satisfy <p,u> >= rho; outliers sit behind the origin.
GeneratedInstance one_class(const GenerateParams& p, RngStream& rng) {
  const Index m = inlier_count(p);
  const Vector u = random_direction(p.d, rng);
  const double rho = p.margin;
  std::vector<Vector> rows;
  for (Index i = 0; i < m; ++i) {
    const double h = rho + p.radius * rng.uniform();
    rows.push_back(h * u + orthogonal_noise(u, p.radius, rng));
  }
  for (Index i = m; i < p.n; ++i) {
    const double h = -p.separation * rho * (1.0 + 0.5 * rng.uniform());
    rows.push_back(h * u + orthogonal_noise(u, p.radius, rng));
  }
  GeneratedInstance g = assemble(std::move(rows), m, rng);
  g.gamma = p.gamma;
  g.truth.optimum_size = rho;
  g.truth.optimum_center = {u};
  return g;
}

/// Class +1 on <p,u> >= w/2, class -1 on <p,u> <= -w/2; a gamma share of each
/// class is flipped deep onto the other side.
GeneratedInstance two_class(const GenerateParams& p, RngStream& rng) {
  const Vector u = random_direction(p.d, rng);
  const double w = p.margin;
  const Index n1 = (p.n + 1) / 2;
  const Index n2 = p.n - n1;
  const Index in1 = ceil_count((1.0 - p.gamma) * static_cast<double>(n1));
  const Index in2 = ceil_count((1.0 - p.gamma) * static_cast<double>(n2));
  std::vector<Vector> inl, outl;
  std::vector<int> lab_in, lab_out;
  auto point = [&](double h) { return Vector(h * u + orthogonal_noise(u, p.radius, rng)); };
  for (Index i = 0; i < n1; ++i) {
    const double depth = p.radius * rng.uniform();
    if (i < in1) {
      inl.push_back(point(w / 2 + depth));
      lab_in.push_back(+1);
    } else {
      outl.push_back(point(-w / 2 - p.separation * w - depth));
      lab_out.push_back(+1);
    }
  }
  for (Index i = 0; i < n2; ++i) {
    const double depth = p.radius * rng.uniform();
    if (i < in2) {
      inl.push_back(point(-w / 2 - depth));
      lab_in.push_back(-1);
    } else {
      outl.push_back(point(w / 2 + p.separation * w + depth));
      lab_out.push_back(-1);
    }
  }
  const Index m = static_cast<Index>(inl.size());
  inl.insert(inl.end(), outl.begin(), outl.end());
  lab_in.insert(lab_in.end(), lab_out.begin(), lab_out.end());
  GeneratedInstance g = assemble(std::move(inl), m, rng, std::move(lab_in));
  g.gamma = p.gamma;
  g.truth.optimum_size = w;
  g.truth.optimum_center = {u};
  return g;
}

}  // namespace

GeneratedInstance generate(const GenerateParams& p, RngStream& rng) {
  check_common(p);
  if (p.family == "uniform-ball") return uniform_ball(p, rng);
  if (p.family == "simplex") return simplex(p);
  if (p.family == "planted-outliers") return planted_outliers(p, rng);
  if (p.family == "k-clusters") return k_clusters(p, rng);
  if (p.family == "line-with-noise") return line_with_noise(p, rng);
  if (p.family == "one-class-margin") return one_class(p, rng);
  if (p.family == "two-class-margin") return two_class(p, rng);
  throw std::invalid_argument("generate: unknown family '" + p.family + "'");
}

}  // namespace geosub
