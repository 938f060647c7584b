#pragma once

#include "geosub/coreset.hpp"
#include "geosub/generate.hpp"
#include "geosub/report.hpp"
#include "geosub/shape.hpp"

namespace geosub {

struct OutlierInstance {
  const PointSet* points = nullptr;
  double gamma = 0.0;
  const PlantedTruth* truth = nullptr;

  const PointSet& P() const { return *points; }
};

struct BiCriteriaParams {
  double epsilon = 0.3;
  double delta = 0.05;
  double eta1 = 0.1;
  double eta2 = 0.0;          // 0: sublinear path uses 1/(zN)
  Index z = 0;                // 0: ceil(2/eps) + 1
  Index repetitions = 0;      // 0: repetition schedule, capped by max_repetitions
  Index max_repetitions = 100;
  Index max_rounds = 0;       // 0: no cap on z
  double c2 = 1.0;
  double c3 = 1.0;
  bool verify_scan = true;     // sublinear only: final full scan for coverage
  bool estimate_sizes = true;  // sublinear only: sandwich estimate per candidate
};

struct Candidate {
  Center center;
  double size_estimate = 0.0;
  Index round = 0;
  Index repetition = 0;
};

struct BiCriteriaResult {
  Ball ball;
  SolveReport report;
  Candidate best;
  std::vector<Candidate> candidates;
};

RankResult farthest_t(const PointSet& P, const Center& o, Index t, const Kernel& kernel = Kernel::linear(),
                      AccessLog* log = nullptr);

AdaptiveResult uniform_adaptive(const PointSet& P, const Center& o, double gamma, double delta, double eta1,
                                RngStream& rng, const Kernel& kernel = Kernel::linear(), double c2 = 1.0,
                                AccessLog* log = nullptr);

SandwichResult sandwich_estimate(const PointSet& P, const Center& o, double gamma, double delta, double eta2,
                                 RngStream& rng, const Kernel& kernel = Kernel::linear(), double c3 = 1.0,
                                 AccessLog* log = nullptr);

/// Rounds per repetition: ceil(2/eps) + 1 unless overridden, then capped.
Index bicriteria_rounds(const BiCriteriaParams& params);
/// Repetitions ceil((1/(1-gamma)) (1 + gamma/delta)^z).
double linear_repetition_schedule(double gamma, double delta, Index z);
/// Repetitions ceil((1/(1-gamma)) ((1/(1-eta1)) (3 + 3 gamma/delta'))^z), delta' = delta/5.
double sublinear_repetition_schedule(double gamma, double delta, double eta1, Index z);

BiCriteriaResult bicriteria_linear(const OutlierInstance& inst, const BiCriteriaParams& params, RngStream& rng,
                                   const Kernel& kernel = Kernel::linear());

BiCriteriaResult bicriteria_sublinear(const OutlierInstance& inst, const BiCriteriaParams& params, RngStream& rng,
                                      const Kernel& kernel = Kernel::linear());

}  // namespace geosub
