#pragma once

#include "geosub/meb_outliers.hpp"
#include "geosub/stable_meb.hpp"

namespace geosub {

enum class HybridLabel { radius_approx, covering_approx };

std::string to_string(HybridLabel label);

/// One-sided bound on the instance's stability parameter alpha-hat.
struct StabilityBound {
  bool upper = true;  // true: alpha < value, false: alpha > value
  double value = 0.0;
  std::string text() const;
};

struct HybridParams {
  double epsilon = 0.3;
  double delta = 0.1;
  double eta0 = 0.1;  // meb_alg2 failure probability
  double eta1 = 0.1;
  Index max_repetitions = 20;
  Index max_rounds = 0;  // cap on bi-criteria rounds; 0 = none
  double c2 = 1.0;
  double c3 = 1.0;
};

struct HybridResult {
  Ball ball;
  HybridLabel label = HybridLabel::radius_approx;
  double ratio = 1.0;
  double threshold = 1.0;
  double epsilon = 0.0;
  bool outliers_variant = false;
  double radius_candidate = 0.0;    // r_o (MEB) or r_{s1} (outliers)
  double covering_candidate = 0.0;  // r_c (MEB) or r'_{s2} (outliers)
  Ball radius_ball;
  Ball covering_ball;
  StabilityBound stability_inference;
  SolveReport report;
};

/// (1 + eps)/(1 - eps^2/2).
double hybrid_meb_threshold(double epsilon);
/// 1/(2 (2 sqrt2 + sqrt3)^2).
double outlier_radius_coefficient();
/// (1 + eps)/(1 - eps^2 * outlier_radius_coefficient()).
double hybrid_outliers_threshold(double epsilon);
/// Label for a pair of radii; 0/0 counts as ratio 1.
HybridLabel hybrid_label(double radius_candidate, double covering_candidate, double threshold, double* ratio = nullptr);

HybridResult hybrid_meb(const PointSet& P, const HybridParams& params, RngStream& rng,
                        const Kernel& kernel = Kernel::linear());

StabilityBound infer_stability(const HybridResult& result, double epsilon);

struct OutlierRadii {
  std::vector<double> r;        // ceil((1-gamma) n)-th smallest distance per candidate
  std::vector<double> r_prime;  // ceil((1-delta-gamma) n)-th smallest distance per candidate
  Index heap_size = 0;
};

/// One pass over P computing both order statistics for every candidate center.
OutlierRadii candidate_radii(const PointSet& P, const std::vector<Center>& centers, double gamma, double delta,
                             const Kernel& kernel, AccessLog* log);

HybridResult hybrid_meb_outliers(const OutlierInstance& inst, const HybridParams& params, RngStream& rng,
                                 const Kernel& kernel = Kernel::linear());

}  // namespace geosub
