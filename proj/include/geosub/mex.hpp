#pragma once

#include "geosub/meb_outliers.hpp"

namespace geosub {

// ---------------------------------------------------------------------------
// k-center with outliers

struct KCenterParams {
  double enumeration_cap = 1e7;  // refuse when k^(k (ceil(2/eps) + 1)) exceeds this
};

struct KCenterResult {
  KBallUnion shape;
  SolveReport report;
};

/// k^(k (ceil(2/eps) + 1)) as a double (may be inf).
double kcenter_enumeration_budget(Index k, double epsilon);
/// Points added to the core-sets along one branch: k (ceil(2/eps) + 1).
Index kcenter_branch_additions(Index k, double epsilon);

/// Depth-first enumeration of cluster assignments for each sampled point.
/// Every node scores the union of its non-empty cluster centers; the best
/// union over all nodes and repetitions is returned. With k = 1 the search is
/// a single chain that replays bicriteria_linear (linear mode) draw for draw.
KCenterResult kcenter_outliers(const OutlierInstance& inst, Index k, const BiCriteriaParams& params, RngStream& rng,
                               bool sublinear, const KCenterParams& kparams = {});

// ---------------------------------------------------------------------------
// Line fitting with outliers

struct LineFitResult {
  Slab slab;
  SolveReport report;
};

/// nu = ceil(eps^-3 ln(1/eps)) capped at 50, unless params.z overrides it.
Index line_fit_rounds(const BiCriteriaParams& params);

LineFitResult line_fit_outliers(const OutlierInstance& inst, const BiCriteriaParams& params, Index candidate_budget,
                                RngStream& rng);

// ---------------------------------------------------------------------------
// Polytope distance and SVM with outliers

struct GilbertTarget {
  Index iterations = 0;  // fixed iteration count, or
  double epsilon = 0.0;  // relative error: stop after 2 ceil(2E/eps) iterations
  Index max_iterations = 1000000;
  bool record_norms = false;
};

struct GilbertResult {
  Center center;  // combination over P
  double distance = 0.0;
  Index iterations = 0;
  double e_estimate = 0.0;     // last D^2 / rho^2 (epsilon mode)
  std::vector<double> norms;   // |v_i| per iteration when recorded
  std::vector<std::string> flags;
};

/// Gilbert's algorithm for the point of conv(P) closest to the origin.
GilbertResult gilbert(const PointSet& P, const GilbertTarget& target, const Kernel& kernel = Kernel::linear());

struct SvmParams {
  Index max_rounds = 200;  // cap on 2 ceil(2E/eps) Gilbert rounds per repetition
  Index repetitions = 20;
};

struct HalfSpaceMargin {
  Direction normal;      // unit normal (coords, or a kernel expansion)
  double margin = 0.0;   // distance from the origin to the hyperplane; size = 1/margin
  double v_norm = 0.0;   // |v| at the end of the best repetition
  bool infeasible = false;
  double size() const { return margin > 0.0 ? 1.0 / margin : kInfiniteSize; }
};

struct OneClassResult {
  HalfSpaceMargin shape;
  SolveReport report;
};

OneClassResult svm_one_class_outliers(const OutlierInstance& inst, const BiCriteriaParams& params, RngStream& rng,
                                      bool sublinear, const Kernel& kernel = Kernel::linear(),
                                      const SvmParams& sparams = {});

/// Two parallel hyperplanes <x,u> = upper (class 1 side) and <x,u> = lower (class 2 side).
struct TwoClassMargin {
  Direction normal;
  double upper = 0.0;
  double lower = 0.0;
  double v_norm = 0.0;
  bool infeasible = false;
  double width() const { return upper - lower; }
};

struct TwoClassResult {
  TwoClassMargin shape;
  SolveReport report;
};

/// Sublinear unless `sublinear` is false, in which case Q_c and the widths
/// come from exact ranks over each class.
TwoClassResult svm_two_class_outliers(const PointSet& P1, const PointSet& P2, double gamma1, double gamma2,
                                      const BiCriteriaParams& params, RngStream& rng,
                                      const Kernel& kernel = Kernel::linear(), bool sublinear = true,
                                      const SvmParams& sparams = {});

}  // namespace geosub
