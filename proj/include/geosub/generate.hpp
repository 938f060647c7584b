#pragma once

#include "geosub/center.hpp"

namespace geosub {

/// Ground truth for generated instances.
///
/// optimum_center holds the planted shape: one point for balls, k points for
/// k-clusters, {anchor, direction} for lines, {normal} for margins.
struct PlantedTruth {
  IndexList inlier_indices;
  double optimum_size = 0.0;
  std::vector<Vector> optimum_center;
};

struct GenerateParams {
  std::string family;  // uniform-ball, simplex, planted-outliers, two-class-margin,
                       // one-class-margin, line-with-noise, k-clusters
  Index n = 1000;
  Index d = 10;
  double gamma = 0.0;
  double separation = 10.0;
  double radius = 1.0;  // ball radius, cluster radius, line half-length scale
  Index k = 2;
  double noise = 0.05;  // line noise sigma
  double margin = 1.0;  // one-class rho or two-class width
};

struct GeneratedInstance {
  PointSet points;
  double gamma = 0.0;
  PlantedTruth truth;
  std::vector<int> labels;  // +1 / -1 for two-class, empty otherwise
};

GeneratedInstance generate(const GenerateParams& params, RngStream& rng);

/// Regular simplex with unit edges in R^d (d + 1 vertices), centroid at the origin.
RowMatrix regular_simplex(Index d);
/// Circumradius of the unit-edge regular simplex in R^d.
double simplex_radius(Index d);

const std::vector<std::string>& generator_families();

}  // namespace geosub
