#pragma once

#include "geosub/coreset.hpp"

namespace geosub {

struct StabilityParams {
  double epsilon = 0.2;
  double beta0 = 0.1;
  double eta = 0.1;  // eta for alg1/radius_range/test_h, eta0 for alg2
  double c1 = 1.0;   // sample-size constant of meb_alg1
};

struct RadiusInterval {
  double a = 0.0;
  double b = 0.0;
  bool degenerate = false;
  Index sample_size = 0;
};

/// [|p1-p2|/2, |p1-p2|/(1-eps^2)] from a random p1 and the farthest of
/// ceil(ln(1/eta)/beta0) sampled points.
RadiusInterval radius_range(const PointSet& P, const StabilityParams& params, RngStream& rng,
                            const Kernel& kernel = Kernel::linear(), AccessLog* log = nullptr);

/// Expansion factor (1 + (2 sqrt2 + sqrt3) eps) / (1 - eps^2) of meb_alg1.
double alg1_expansion(double epsilon);
/// Approximation ratio lambda = (1 + (2 sqrt2 + sqrt3) eps)(1 + eps^2) / (1 - eps^2).
double alg1_lambda(double epsilon);
/// Sample size ceil((c1/beta0) max{ln(1/eta), d ln(d/beta0)}).
Index alg1_sample_size(Index d, const StabilityParams& params);

struct Alg1Result {
  Ball ball;
  IndexList sample;
  double sample_radius = 0.0;
  AccessLog log;
};

Alg1Result meb_alg1(const PointSet& P, const StabilityParams& params, RngStream& rng,
                    const Kernel& kernel = Kernel::linear());

struct TestHResult {
  bool yes = false;
  Center center;
  Index rounds = 0;
  Index sample_size = 0;
  IndexList T;
};

/// ceil(3 / eps^2): core-set bound with s = 1/3 and eps replaced by eps^2.
Index test_h_rounds(double epsilon);

/// Decide whether a guessed radius h is large enough; `z` rounds at most.
TestHResult test_h(const PointSet& P, double h, Index z, const StabilityParams& params, RngStream& rng,
                   const Kernel& kernel = Kernel::linear(), AccessLog* log = nullptr);

/// Grid length w = ceil(log_{1+eps^2}(2/(1-eps^2)^2)) + 1.
Index alg2_grid_length(double epsilon);
/// Radius factor (1 + (2 sqrt2 + 2 sqrt6 / sqrt(1-eps^2)) eps) / (1 + eps^2).
double alg2_radius_factor(double epsilon);
/// lambda = (1 + x1)(1 + x2)/(1 + eps^2), x1 = 8 eps^2/(1-eps^2), x2 = (2 sqrt2 + 2 sqrt6/sqrt(1-eps^2)) eps.
double alg2_lambda(double epsilon);

struct Alg2Result {
  Ball ball;
  RadiusInterval interval;
  Index grid_length = 0;
  Index i0 = 0;
  double h = 0.0;
  bool final_yes = false;
  std::vector<std::pair<Index, bool>> probes;
  std::vector<std::string> flags;
  AccessLog log;
};

/// Binary search over the radius grid with test_h, then one confirming run.
Alg2Result meb_alg2(const PointSet& P, const StabilityParams& params, RngStream& rng,
                    const Kernel& kernel = Kernel::linear());

}  // namespace geosub
