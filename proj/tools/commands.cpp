#include "commands.hpp"

#include "geosub/hybrid.hpp"
#include "geosub/io.hpp"
#include "geosub/mex.hpp"
#include "geosub/oracle.hpp"
#include "geosub/report_json.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

namespace geosub::cli {

using nlohmann::json;

namespace {

const std::vector<std::string> kAlgorithms = {"bc-meb",          "meb-alg1",        "meb-alg2", "outliers-linear",
                                              "outliers-sublinear", "hybrid-meb",  "hybrid-outliers",
                                              "kcenter",         "linefit",         "svm1",     "svm2"};

struct Options {
  std::string algo;
  std::uint64_t seed = 0;
  double epsilon = 0.3;
  double delta = 0.1;
  double gamma = 0.0;
  double gamma1 = -1.0;  // svm2; default gamma
  double gamma2 = -1.0;
  double s = 1.0 / 3.0;
  double beta0 = 0.1;
  double eta = 0.1;
  double eta1 = 0.1;
  double eta2 = 0.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double c3 = 1.0;
  Index z = 0;
  Index repetitions = 0;
  Index max_repetitions = 100;
  Index max_rounds = 0;
  Index k = 2;
  double budget_cap = 1e7;
  Index candidate_budget = 64;
  Index svm_rounds = 200;
  std::string mode;  // linear | sublinear; empty = per-algorithm default
  std::string kernel = "linear";
  double bandwidth = 1.0;
};

json number(double x) {
  if (std::isfinite(x)) return x;
  return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
}

double read_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

json vec_json(const Vector& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vector json_vec(const json& a) {
  Vector v(static_cast<Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Index>(i)) = a[i].get<double>();
  return v;
}

std::string hex_digest(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

Kernel make_kernel(const Options& o) {
  if (o.kernel == "linear") return Kernel::linear();
  if (o.kernel == "rbf") return Kernel::rbf(o.bandwidth);
  throw std::invalid_argument("unknown kernel '" + o.kernel + "'");
}

json center_json(const PointSet& P, const Center& c, const Kernel& kernel) {
  json j;
  if (c.is_explicit()) {
    j["coords"] = vec_json(c.coords());
  } else {
    j["support"] = c.support();
    j["weights"] = c.weights();
    if (kernel.is_linear()) j["coords"] = vec_json(materialize(P, c));
  }
  j["digest"] = hex_digest(j.dump());
  return j;
}

Center json_center(const json& j, bool linear) {
  if (j.contains("support") && !linear)
    return Center::combination(j["support"].get<IndexList>(), j["weights"].get<std::vector<double>>());
  return Center::point(json_vec(j["coords"]));
}

json direction_json(const Direction& u) {
  json j;
  if (u.is_explicit()) {
    j["coords"] = vec_json(u.coords);
  } else {
    json pts = json::array();
    for (const Vector& s : u.support) pts.push_back(vec_json(s));
    j["support"] = pts;
    j["weights"] = u.weights;
    j["scale"] = u.scale;
  }
  j["digest"] = hex_digest(j.dump());
  return j;
}

Direction json_direction(const json& j) {
  Direction u;
  if (j.contains("coords")) {
    u.coords = json_vec(j["coords"]);
    return u;
  }
  for (const auto& s : j["support"]) u.support.push_back(json_vec(s));
  u.weights = j["weights"].get<std::vector<double>>();
  u.scale = j["scale"].get<double>();
  return u;
}

json ball_json(const PointSet& P, const Ball& b, const Kernel& kernel) {
  return {{"type", "ball"}, {"center", center_json(P, b.center, kernel)}, {"radius", number(b.radius)}};
}

json options_json(const Options& o) {
  return {{"epsilon", o.epsilon},
          {"delta", o.delta},
          {"gamma", o.gamma},
          {"gamma1", o.gamma1},
          {"gamma2", o.gamma2},
          {"s", o.s},
          {"beta0", o.beta0},
          {"eta", o.eta},
          {"eta1", o.eta1},
          {"eta2", o.eta2},
          {"c1", o.c1},
          {"c2", o.c2},
          {"c3", o.c3},
          {"z", o.z},
          {"repetitions", o.repetitions},
          {"max_repetitions", o.max_repetitions},
          {"max_rounds", o.max_rounds},
          {"k", o.k},
          {"budget_cap", o.budget_cap},
          {"candidate_budget", o.candidate_budget},
          {"svm_rounds", o.svm_rounds},
          {"mode", o.mode},
          {"kernel", o.kernel},
          {"bandwidth", o.bandwidth}};
}

Options options_from_json(const json& j) {
  Options o;
  o.epsilon = j.at("epsilon");
  o.delta = j.at("delta");
  o.gamma = j.at("gamma");
  o.gamma1 = j.at("gamma1");
  o.gamma2 = j.at("gamma2");
  o.s = j.at("s");
  o.beta0 = j.at("beta0");
  o.eta = j.at("eta");
  o.eta1 = j.at("eta1");
  o.k = j.at("k");
  o.mode = j.at("mode");
  o.kernel = j.at("kernel");
  o.bandwidth = j.at("bandwidth");
  return o;
}

BiCriteriaParams bicriteria_params(const Options& o) {
  BiCriteriaParams p;
  p.epsilon = o.epsilon;
  p.delta = o.delta;
  p.eta1 = o.eta1;
  p.eta2 = o.eta2;
  p.z = o.z;
  p.repetitions = o.repetitions;
  p.max_repetitions = o.max_repetitions;
  p.max_rounds = o.max_rounds;
  p.c2 = o.c2;
  p.c3 = o.c3;
  return p;
}

HybridParams hybrid_params(const Options& o) {
  HybridParams p;
  p.epsilon = o.epsilon;
  p.delta = o.delta;
  p.eta0 = o.eta;
  p.eta1 = o.eta1;
  p.max_repetitions = std::min<Index>(o.max_repetitions, 20);
  p.max_rounds = o.max_rounds;
  p.c2 = o.c2;
  p.c3 = o.c3;
  return p;
}

bool sublinear_mode(const Options& o, bool default_sublinear) {
  if (o.mode.empty()) return default_sublinear;
  if (o.mode == "sublinear") return true;
  if (o.mode == "linear") return false;
  throw std::invalid_argument("--mode must be linear or sublinear");
}

json dataset_json(const std::string& path, const PointSet& P) {
  return {{"path", path}, {"n", P.n()}, {"d", P.d()}, {"nnz", P.nnz()}, {"digest", dataset_digest(P)}};
}

struct SolveOutcome {
  json result;
  SolveReport report;
  std::string status = "ok";
};

void split_classes(const PointSet& P, const std::vector<int>& labels, PointSet& P1, PointSet& P2) {
  if (static_cast<Index>(labels.size()) != P.n()) throw std::invalid_argument("svm2 needs a labeled (LIBSVM) dataset");
  IndexList a, b;
  for (Index i = 0; i < P.n(); ++i) (labels[static_cast<std::size_t>(i)] > 0 ? a : b).push_back(i);
  if (a.empty() || b.empty()) throw std::invalid_argument("svm2 needs both classes");
  P1 = P.subset(a);
  P2 = P.subset(b);
}

/// Runs one solver. Throws Refusal for principled refusals.
SolveOutcome solve_points(const Options& o, const PointSet& P, const std::vector<int>& labels) {
  RngStream rng(o.seed);
  const Kernel kernel = make_kernel(o);
  const OutlierInstance inst{&P, o.gamma, nullptr};
  SolveOutcome out;
  SolveReport& rep = out.report;
  const auto start = std::chrono::steady_clock::now();
  const auto finish = [&] {
    if (rep.wall_ms == 0.0)
      rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };

  if (o.algo == "bc-meb") {
    auto [ball, state] = badoiu_clarkson(P, o.epsilon, o.s, kernel);
    rep.algorithm = o.algo;
    rep.params = {{"epsilon", o.epsilon}, {"s", state.s}, {"xi", state.xi}};
    rep.counts = {{"coreset_size", static_cast<std::int64_t>(state.T.size())}, {"iterations", state.iteration}};
    rep.log = state.log;
    if (state.size_cap_hit) rep.flag("size-cap-hit");
    out.result = ball_json(P, ball, kernel);
    out.result["coreset"] = state.T;
  } else if (o.algo == "meb-alg1" || o.algo == "meb-alg2") {
    const StabilityParams sp{o.epsilon, o.beta0, o.eta, o.c1};
    rep.algorithm = o.algo;
    rep.params = {{"epsilon", o.epsilon}, {"beta0", o.beta0}, {"eta", o.eta}, {"c1", o.c1}};
    if (o.algo == "meb-alg1") {
      const Alg1Result r = meb_alg1(P, sp, rng, kernel);
      rep.log = r.log;
      rep.counts["sample_size"] = static_cast<std::int64_t>(r.sample.size());
      rep.params["lambda"] = alg1_lambda(o.epsilon);
      out.result = ball_json(P, r.ball, kernel);
    } else {
      const Alg2Result r = meb_alg2(P, sp, rng, kernel);
      rep.log = r.log;
      rep.counts["grid_length"] = r.grid_length;
      rep.counts["i0"] = r.i0;
      rep.counts["probes"] = static_cast<std::int64_t>(r.probes.size());
      rep.params["h"] = r.h;
      rep.params["interval_a"] = r.interval.a;
      rep.params["interval_b"] = r.interval.b;
      rep.params["lambda"] = alg2_lambda(o.epsilon);
      for (const auto& f : r.flags) rep.flag(f);
      out.result = ball_json(P, r.ball, kernel);
      out.result["final_yes"] = r.final_yes;
    }
  } else if (o.algo == "outliers-linear" || o.algo == "outliers-sublinear") {
    const BiCriteriaResult r = o.algo == "outliers-linear" ? bicriteria_linear(inst, bicriteria_params(o), rng, kernel)
                                                           : bicriteria_sublinear(inst, bicriteria_params(o), rng, kernel);
    rep = r.report;
    out.result = ball_json(P, r.ball, kernel);
  } else if (o.algo == "hybrid-meb" || o.algo == "hybrid-outliers") {
    const HybridResult r = o.algo == "hybrid-meb" ? hybrid_meb(P, hybrid_params(o), rng, kernel)
                                                  : hybrid_meb_outliers(inst, hybrid_params(o), rng, kernel);
    rep = r.report;
    out.result = ball_json(P, r.ball, kernel);
    out.result["label"] = to_string(r.label);
    out.result["ratio"] = number(r.ratio);
    out.result["threshold"] = r.threshold;
    out.result["radius_candidate"] = number(r.radius_candidate);
    out.result["covering_candidate"] = number(r.covering_candidate);
    out.result["stability"] = r.stability_inference.text();
  } else if (o.algo == "kcenter") {
    const KCenterResult r =
        kcenter_outliers(inst, o.k, bicriteria_params(o), rng, sublinear_mode(o, false), KCenterParams{o.budget_cap});
    rep = r.report;
    json centers = json::array();
    for (const Vector& c : r.shape.centers) centers.push_back(vec_json(c));
    out.result = {{"type", "k-balls"}, {"centers", centers}, {"radius", number(r.shape.radius)}};
  } else if (o.algo == "linefit") {
    const LineFitResult r = line_fit_outliers(inst, bicriteria_params(o), o.candidate_budget, rng);
    rep = r.report;
    out.result = {{"type", "slab"},
                  {"anchor", vec_json(r.slab.line.anchor)},
                  {"direction", vec_json(r.slab.line.direction)},
                  {"width", number(r.slab.width)}};
  } else if (o.algo == "svm1") {
    const OneClassResult r = svm_one_class_outliers(inst, bicriteria_params(o), rng, sublinear_mode(o, false), kernel,
                                                    SvmParams{o.svm_rounds, 20});
    rep = r.report;
    out.result = {{"type", "half-space"},
                  {"margin", r.shape.margin},
                  {"size", number(r.shape.size())},
                  {"infeasible", r.shape.infeasible}};
    if (!r.shape.infeasible) out.result["normal"] = direction_json(r.shape.normal);
    if (r.shape.infeasible) out.status = "infeasible";
  } else if (o.algo == "svm2") {
    PointSet P1, P2;
    split_classes(P, labels, P1, P2);
    const double g1 = o.gamma1 >= 0.0 ? o.gamma1 : o.gamma;
    const double g2 = o.gamma2 >= 0.0 ? o.gamma2 : o.gamma;
    const TwoClassResult r = svm_two_class_outliers(P1, P2, g1, g2, bicriteria_params(o), rng, kernel,
                                                    sublinear_mode(o, true), SvmParams{o.svm_rounds, 20});
    rep = r.report;
    out.result = {{"type", "two-class-margin"},
                  {"upper", r.shape.upper},
                  {"lower", r.shape.lower},
                  {"width", r.shape.width()},
                  {"infeasible", r.shape.infeasible}};
    if (!r.shape.infeasible) out.result["normal"] = direction_json(r.shape.normal);
    if (r.shape.infeasible) out.status = "infeasible";
  } else {
    throw std::invalid_argument("unknown algorithm '" + o.algo + "'");
  }
  finish();
  return out;
}

void add_solver_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--epsilon", o.epsilon);
  cmd->add_option("--delta", o.delta);
  cmd->add_option("--gamma", o.gamma, "outlier fraction");
  cmd->add_option("--gamma1", o.gamma1, "svm2 class +1 outlier fraction (default --gamma)");
  cmd->add_option("--gamma2", o.gamma2, "svm2 class -1 outlier fraction (default --gamma)");
  cmd->add_option("--s", o.s, "core-set center accuracy for bc-meb");
  cmd->add_option("--beta0", o.beta0);
  cmd->add_option("--eta", o.eta, "failure probability of meb-alg1/meb-alg2");
  cmd->add_option("--eta1", o.eta1);
  cmd->add_option("--eta2", o.eta2, "0 = automatic");
  cmd->add_option("--c1", o.c1);
  cmd->add_option("--c2", o.c2);
  cmd->add_option("--c3", o.c3);
  cmd->add_option("--z", o.z, "rounds per repetition, 0 = default");
  cmd->add_option("--repetitions", o.repetitions, "0 = schedule");
  cmd->add_option("--max-repetitions", o.max_repetitions);
  cmd->add_option("--max-rounds", o.max_rounds);
  cmd->add_option("--k", o.k);
  cmd->add_option("--budget-cap", o.budget_cap, "k-center enumeration cap");
  cmd->add_option("--candidate-budget", o.candidate_budget, "line-fit candidates per round");
  cmd->add_option("--svm-rounds", o.svm_rounds, "cap on Gilbert rounds per repetition");
  cmd->add_option("--mode", o.mode, "linear | sublinear");
  cmd->add_option("--kernel", o.kernel, "linear | rbf");
  cmd->add_option("--bandwidth", o.bandwidth);
}

std::string format_for(const std::string& path, const std::string& format) {
  if (!format.empty()) return format;
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0 ? "csv" : "libsvm";
}

int cmd_generate(const GenerateParams& gp, std::uint64_t seed, const std::string& out_path, const std::string& format,
                 std::ostream& out) {
  RngStream rng(seed);
  const GeneratedInstance g = generate(gp, rng);
  const std::string fmt = format_for(out_path, format);
  if (fmt == "csv") {
    if (!g.labels.empty()) throw std::invalid_argument("two-class data needs LIBSVM output for its labels");
    write_dense(out_path, g.points);
  } else if (fmt == "libsvm") {
    write_sparse(out_path, g.points, g.labels);
  } else {
    throw std::invalid_argument("--format must be csv or libsvm");
  }
  json centers = json::array();
  for (const Vector& c : g.truth.optimum_center) centers.push_back(vec_json(c));
  const json truth = {{"schema", 1},
                      {"family", gp.family},
                      {"seed", seed},
                      {"n", g.points.n()},
                      {"d", g.points.d()},
                      {"gamma", g.gamma},
                      {"digest", dataset_digest(g.points)},
                      {"optimum_size", g.truth.optimum_size},
                      {"optimum_center", centers},
                      {"inlier_indices", g.truth.inlier_indices},
                      {"params",
                       {{"separation", gp.separation},
                        {"radius", gp.radius},
                        {"k", gp.k},
                        {"noise", gp.noise},
                        {"margin", gp.margin}}}};
  const std::string truth_path = out_path + ".truth.json";
  std::ofstream(truth_path) << truth.dump(2) << '\n';
  out << json{{"schema", 1},
              {"command", "generate"},
              {"out", out_path},
              {"truth", truth_path},
              {"n", g.points.n()},
              {"d", g.points.d()},
              {"digest", dataset_digest(g.points)}}
             .dump(2)
      << '\n';
  return kExitOk;
}

int cmd_solve(const Options& o, const std::string& data, bool header, const std::string& out_path, std::ostream& out,
              std::ostream& err) {
  const LabeledPoints lp = load_any(data, header);
  json j = {{"schema", 1},
            {"command", "solve"},
            {"algorithm", o.algo},
            {"seed", o.seed},
            {"dataset", dataset_json(data, lp.points)},
            {"options", options_json(o)}};
  int code = kExitOk;
  try {
    SolveOutcome s = solve_points(o, lp.points, lp.labels);
    j["status"] = s.status;
    j["result"] = s.result;
    j["report"] = to_json(s.report);
    if (s.status != "ok") code = kExitRefusal;
  } catch (const Refusal& e) {
    j["status"] = "refused";
    j["message"] = e.what();
    err << "refused: " << e.what() << '\n';
    code = kExitRefusal;
  }
  const std::string text = j.dump(2);
  out << text << '\n';
  if (!out_path.empty()) std::ofstream(out_path) << text << '\n';
  return code;
}

// ---------------------------------------------------------------------------
// verify

struct Checks {
  json list = json::array();
  bool all = true;
  void add(const std::string& name, bool pass, double value, double bound) {
    list.push_back({{"name", name}, {"pass", pass}, {"value", number(value)}, {"bound", number(bound)}});
    all = all && pass;
  }
  void skip(const std::string& name, const std::string& why) {
    list.push_back({{"name", name}, {"pass", nullptr}, {"skipped", why}});
  }
};

constexpr double kRel = 1e-9;

Index ball_coverage(const PointSet& P, const Center& c, double r, const Kernel& kernel) {
  const CenterDistance dist(P, c, kernel);
  Index k = 0;
  for (Index i = 0; i < P.n(); ++i) k += dist(i) <= r * (1.0 + kRel) + 1e-12 ? 1 : 0;
  return k;
}

int cmd_verify(const std::string& report_path, const std::string& data, const std::string& truth_path, bool header,
               std::ostream& out, std::ostream& err) {
  std::ifstream in(report_path);
  if (!in) throw std::runtime_error("cannot open report " + report_path);
  const json rep = json::parse(in);
  const LabeledPoints lp = load_any(data, header);
  const PointSet& P = lp.points;
  const std::string digest = dataset_digest(P);
  if (rep.at("dataset").at("digest").get<std::string>() != digest) {
    err << "error: dataset digest " << digest << " does not match the report's "
        << rep["dataset"]["digest"].get<std::string>() << '\n';
    return kExitError;
  }
  if (rep.at("status") != "ok") {
    err << "error: report status is " << rep["status"] << ", nothing to verify\n";
    return kExitError;
  }
  std::optional<json> truth;
  if (!truth_path.empty()) {
    std::ifstream tin(truth_path);
    if (!tin) throw std::runtime_error("cannot open truth " + truth_path);
    truth = json::parse(tin);
  }
  const std::string algo = rep.at("algorithm");
  const Options o = options_from_json(rep.at("options"));
  const Kernel kernel = make_kernel(o);
  const json& res = rep.at("result");
  const double n = static_cast<double>(P.n());
  const double eps = o.epsilon;
  Checks checks;

  auto optimum = [&]() -> std::optional<double> {
    if (truth) return truth->at("optimum_size").get<double>();
    return std::nullopt;
  };

  const bool meb_algo = algo == "bc-meb" || algo == "meb-alg1" || algo == "meb-alg2" || algo == "hybrid-meb";
  if (meb_algo || algo == "outliers-linear" || algo == "outliers-sublinear" || algo == "hybrid-outliers") {
    const Center c = json_center(res.at("center"), kernel.is_linear());
    const double r = read_number(res.at("radius"));
    const double cov = static_cast<double>(ball_coverage(P, c, r, kernel));
    const std::string label = res.contains("label") ? res["label"].get<std::string>() : "";
    if (meb_algo) {
      double opt = 0.0;
      bool have_opt = false;
      if (kernel.is_linear()) {
        opt = exact_meb(P).optimum_size;
        have_opt = true;
      }
      double factor = 1.0 + eps;
      if (algo == "meb-alg1") factor = alg1_lambda(eps);
      if (algo == "meb-alg2") factor = alg2_lambda(eps);
      if (label == "covering-approx") {
        checks.add("coverage", cov >= (1.0 - o.delta) * n - kRel, cov, (1.0 - o.delta) * n);
        if (have_opt) checks.add("radius-at-most-optimum", r <= opt * (1.0 + 1e-6), r, opt);
      } else {
        checks.add("coverage", cov >= n, cov, n);
        if (have_opt) {
          checks.add("radius-at-least-optimum", r >= opt * (1.0 - 1e-6), r, opt);
          checks.add("radius-approximation", r <= factor * opt * (1.0 + 1e-6), r, factor * opt);
        }
      }
      if (!have_opt) checks.skip("radius-vs-oracle", "no exact oracle under a non-linear kernel");
    } else {
      const double g = o.gamma;
      const bool radius_label = label == "radius-approx";
      const double need = radius_label ? (1.0 - g) * n : (1.0 - o.delta - g) * n;
      checks.add("coverage", cov >= need - kRel, cov, need);
      if (const auto opt = optimum()) {
        const double bound = label == "covering-approx" ? *opt : (1.0 + eps) * *opt;
        checks.add(label == "covering-approx" ? "radius-at-most-planted" : "radius-vs-planted",
                   r <= bound * (1.0 + 1e-6), r, bound);
      } else {
        checks.skip("radius-vs-planted", "no truth file");
      }
    }
  } else if (algo == "kcenter") {
    std::vector<Vector> centers;
    for (const auto& c : res.at("centers")) centers.push_back(json_vec(c));
    const double r = read_number(res.at("radius"));
    const double cov = static_cast<double>(count_covered(KBallFamily(P), centers, r * (1.0 + kRel) + 1e-12));
    const double need = (1.0 - o.delta - o.gamma) * n;
    checks.add("coverage", cov >= need - kRel, cov, need);
    checks.add("center-count", !centers.empty() && static_cast<Index>(centers.size()) <= o.k,
               static_cast<double>(centers.size()), static_cast<double>(o.k));
    if (const auto opt = optimum())
      checks.add("radius-vs-planted", r <= (1.0 + eps) * *opt * (1.0 + 1e-6), r, (1.0 + eps) * *opt);
    else
      checks.skip("radius-vs-planted", "no truth file");
  } else if (algo == "linefit") {
    const Line line{json_vec(res.at("anchor")), json_vec(res.at("direction"))};
    const double w = read_number(res.at("width"));
    const double cov = static_cast<double>(count_covered(SlabFamily(P), line, w * (1.0 + kRel) + 1e-12));
    const double need = (1.0 - o.delta - o.gamma) * n;
    checks.add("coverage", cov >= need - kRel, cov, need);
    checks.add("unit-direction", std::abs(line.direction.norm() - 1.0) <= 1e-12, line.direction.norm(), 1.0);
    if (const auto opt = optimum())
      checks.add("width-vs-planted", w <= (1.0 + eps) * *opt * (1.0 + 1e-6), w, (1.0 + eps) * *opt);
    else
      checks.skip("width-vs-planted", "no truth file");
  } else if (algo == "svm1") {
    const Direction u = json_direction(res.at("normal"));
    const double margin = res.at("margin").get<double>();
    const HalfSpaceFamily fam(P, kernel);
    const auto ev = fam.bind(u);
    Index covered = 0;
    for (Index i = 0; i < P.n(); ++i) covered += ev.projection(i) >= margin * (1.0 - kRel) ? 1 : 0;
    const double need = (1.0 - o.delta - o.gamma) * n;
    checks.add("coverage", static_cast<double>(covered) >= need - kRel, static_cast<double>(covered), need);
    if (const auto opt = optimum())
      checks.add("margin-vs-planted", margin >= (1.0 - eps) * *opt, margin, (1.0 - eps) * *opt);
    else
      checks.skip("margin-vs-planted", "no truth file");
  } else if (algo == "svm2") {
    PointSet P1, P2;
    split_classes(P, lp.labels, P1, P2);
    const Direction u = json_direction(res.at("normal"));
    const double upper = res.at("upper").get<double>();
    const double lower = res.at("lower").get<double>();
    const double g1 = o.gamma1 >= 0.0 ? o.gamma1 : o.gamma;
    const double g2 = o.gamma2 >= 0.0 ? o.gamma2 : o.gamma;
    const double slack = kRel * std::max(1.0, std::abs(upper) + std::abs(lower));
    const auto ev1 = HalfSpaceFamily(P1, kernel).bind(u);
    const auto ev2 = HalfSpaceFamily(P2, kernel).bind(u);
    Index c1 = 0, c2 = 0;
    for (Index i = 0; i < P1.n(); ++i) c1 += ev1.projection(i) >= upper - slack ? 1 : 0;
    for (Index i = 0; i < P2.n(); ++i) c2 += ev2.projection(i) <= lower + slack ? 1 : 0;
    const double need1 = (1.0 - 5.0 * o.delta - g1) * static_cast<double>(P1.n());
    const double need2 = (1.0 - 5.0 * o.delta - g2) * static_cast<double>(P2.n());
    checks.add("coverage-class1", static_cast<double>(c1) >= need1 - kRel, static_cast<double>(c1), need1);
    checks.add("coverage-class2", static_cast<double>(c2) >= need2 - kRel, static_cast<double>(c2), need2);
    if (const auto opt = optimum())
      checks.add("width-vs-planted", upper - lower >= (1.0 - eps) * *opt, upper - lower, (1.0 - eps) * *opt);
    else
      checks.skip("width-vs-planted", "no truth file");
  } else {
    throw std::invalid_argument("verify: unknown algorithm '" + algo + "'");
  }

  out << json{{"schema", 1}, {"command", "verify"}, {"algorithm", algo}, {"checks", checks.list}, {"pass", checks.all}}
             .dump(2)
      << '\n';
  return checks.all ? kExitOk : kExitError;
}

// ---------------------------------------------------------------------------
// bench

unsigned thread_cap() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GEO_SUBLINEAR_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
  }
  return hw;
}

struct BenchRow {
  std::string algo;
  Index n = 0;
  Index d = 0;
  std::uint64_t seed = 0;
  AccessLog log;
  double wall_ms = 0.0;
  bool success = false;
  std::string error;
};

BenchRow bench_trial(const Options& base, const GenerateParams& gp, const std::string& algo, Index n,
                     std::uint64_t seed) {
  BenchRow row{algo, n, gp.d, seed};
  GenerateParams g = gp;
  g.n = n;
  RngStream grng(seed, 1);
  const GeneratedInstance inst = generate(g, grng);
  const PointSet& P = inst.points;
  const double opt = inst.truth.optimum_size;
  Options o = base;
  o.algo = algo;
  o.seed = seed;
  o.gamma = inst.gamma;
  try {
    const auto start = std::chrono::steady_clock::now();
    if (algo == "baseline") {
      // Full-scan reference: one exact rank pass around the planted center.
      const Index t = ceil_count((o.delta + o.gamma) * static_cast<double>(n));
      const Center c = Center::point(inst.truth.optimum_center.front());
      const RankResult r = farthest_t(P, c, t, Kernel::linear(), &row.log);
      row.success = r.l <= (1.0 + o.epsilon) * opt;
    } else {
      const SolveOutcome s = solve_points(o, P, inst.labels);
      row.log = s.report.log;
      const json& res = s.result;
      if (res.contains("radius") && res.contains("center")) {
        const double r = read_number(res["radius"]);
        const Center c = json_center(res["center"], true);
        const double cov = static_cast<double>(ball_coverage(P, c, r, Kernel::linear()));
        const std::string label = res.contains("label") ? res["label"].get<std::string>() : "";
        const double need = label == "radius-approx" ? (1.0 - o.gamma) * static_cast<double>(n)
                                                     : (1.0 - o.delta - o.gamma) * static_cast<double>(n);
        const double bound = label == "covering-approx" ? opt : (1.0 + o.epsilon) * opt;
        row.success = cov >= need && r <= bound * (1.0 + 1e-6);
      }
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

int cmd_bench(const Options& base, const GenerateParams& gp, const std::vector<std::string>& algos,
              const std::vector<Index>& ns, Index seeds, std::uint64_t seed0, const std::string& out_path,
              std::ostream& out) {
  for (const auto& a : algos)
    if (a != "baseline" && std::find(kAlgorithms.begin(), kAlgorithms.end(), a) == kAlgorithms.end())
      throw std::invalid_argument("bench: unknown algorithm '" + a + "'");
  struct Task {
    std::string algo;
    Index n;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (const auto& a : algos)
    for (Index n : ns)
      for (Index s = 0; s < seeds; ++s) tasks.push_back({a, n, seed0 + static_cast<std::uint64_t>(s)});
  std::vector<BenchRow> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();)
      rows[i] = bench_trial(base, gp, tasks[i].algo, tasks[i].n, tasks[i].seed);
  };
  std::vector<std::thread> pool;
  const unsigned threads = std::min<unsigned>(thread_cap(), static_cast<unsigned>(std::max<std::size_t>(1, tasks.size())));
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::ostringstream csv;
  csv << "algo,n,d,seed,epsilon,delta,gamma,points_touched,passes_over_data,wall_ms,success\n";
  for (const BenchRow& r : rows) {
    csv << r.algo << ',' << r.n << ',' << r.d << ',' << r.seed << ',' << base.epsilon << ',' << base.delta << ','
        << gp.gamma << ',' << r.log.points_touched << ',' << r.log.full_passes << ',' << std::fixed
        << std::setprecision(3) << r.wall_ms << std::defaultfloat << ',' << (r.error.empty() ? (r.success ? 1 : 0) : -1)
        << '\n';
  }
  if (out_path.empty()) {
    out << csv.str();
  } else {
    std::ofstream(out_path) << csv.str();
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"geosub: sampling-based MEB, MEB with outliers and related shape fitting"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write a synthetic instance and its truth sidecar");
  GenerateParams gp;
  std::uint64_t gen_seed = 0;
  std::string gen_out, gen_format;
  gen->add_option("--family", gp.family, "instance family")->required()->check(CLI::IsMember(generator_families()));
  gen->add_option("--n", gp.n);
  gen->add_option("--d", gp.d);
  gen->add_option("--gamma", gp.gamma);
  gen->add_option("--separation", gp.separation);
  gen->add_option("--radius", gp.radius);
  gen->add_option("--k", gp.k);
  gen->add_option("--noise", gp.noise);
  gen->add_option("--margin", gp.margin);
  gen->add_option("--seed", gen_seed);
  gen->add_option("--out", gen_out, "dataset path (.csv or LIBSVM)")->required();
  gen->add_option("--format", gen_format, "csv | libsvm (default by extension)");

  // solve
  auto* solve = app.add_subcommand("solve", "run a solver and print a JSON report");
  Options so;
  std::string solve_data, solve_out;
  bool solve_header = false;
  solve->add_option("--algo", so.algo)->required()->check(CLI::IsMember(kAlgorithms));
  add_solver_options(solve, so);
  solve->add_option("data", solve_data, "dataset")->required();
  solve->add_option("--out", solve_out, "also write the report here");
  solve->add_flag("--header", solve_header, "CSV has a header row");

  // verify
  auto* verify = app.add_subcommand("verify", "check a solve report against the dataset");
  std::string verify_report, verify_data, verify_truth;
  bool verify_header = false;
  verify->add_option("--report", verify_report)->required();
  verify->add_option("--truth", verify_truth, "truth sidecar written by generate");
  verify->add_option("data", verify_data)->required();
  verify->add_flag("--header", verify_header);

  // bench
  auto* bench = app.add_subcommand("bench", "sweep solvers over generated instances, CSV out");
  Options bo;
  GenerateParams bgp;
  bgp.family = "planted-outliers";
  bgp.d = 20;
  bgp.gamma = 0.1;
  std::vector<std::string> bench_algos{"outliers-sublinear", "baseline"};
  std::vector<Index> bench_ns{10000};
  Index bench_seeds = 3;
  std::uint64_t bench_seed0 = 0;
  std::string bench_out;
  bench->add_option("--algos", bench_algos, "solvers, plus 'baseline' (one full scan)")->delimiter(',');
  bench->add_option("--ns", bench_ns, "instance sizes")->delimiter(',');
  bench->add_option("--seeds", bench_seeds, "seeds per (algo, n)");
  bench->add_option("--seed0", bench_seed0);
  bench->add_option("--family", bgp.family)->check(CLI::IsMember(generator_families()));
  bench->add_option("--d", bgp.d);
  bench->add_option("--instance-gamma", bgp.gamma);
  bench->add_option("--separation", bgp.separation);
  bench->add_option("--k", bgp.k);
  bench->add_option("--epsilon", bo.epsilon);
  bench->add_option("--delta", bo.delta);
  bench->add_option("--eta1", bo.eta1);
  bench->add_option("--max-repetitions", bo.max_repetitions);
  bench->add_option("--max-rounds", bo.max_rounds);
  bench->add_option("--out", bench_out, "CSV path (default stdout)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (gen->parsed()) return cmd_generate(gp, gen_seed, gen_out, gen_format, out);
    if (solve->parsed()) return cmd_solve(so, solve_data, solve_header, solve_out, out, err);
    if (verify->parsed()) return cmd_verify(verify_report, verify_data, verify_truth, verify_header, out, err);
    if (bench->parsed()) return cmd_bench(bo, bgp, bench_algos, bench_ns, bench_seeds, bench_seed0, bench_out, out);
  } catch (const Refusal& e) {
    err << "refused: " << e.what() << '\n';
    return kExitRefusal;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace geosub::cli
