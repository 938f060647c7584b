#include "doctest.h"

#include "commands.hpp"
#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = geosub::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("geosub_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

json read_json(const std::string& p) {
  std::ifstream in(p);
  return json::parse(in);
}

json strip_timing(json j) {
  j["report"].erase("wall_ms");
  return j;
}

}  // namespace

TEST_CASE("generate writes data and truth") {
  TempDir dir;
  const Run g = cli({"generate", "--family", "simplex", "--d", "3", "--out", dir / "s.csv"});
  REQUIRE(g.code == 0);
  std::ifstream csv(dir / "s.csv");
  int lines = 0;
  for (std::string l; std::getline(csv, l);) lines += !l.empty();
  CHECK(lines == 4);
  const json truth = read_json(dir / "s.csv.truth.json");
  CHECK(truth["optimum_size"].get<double>() == doctest::Approx(std::sqrt(3.0 / 8.0)).epsilon(1e-12));

  const Run p = cli({"generate", "--family", "planted-outliers", "--n", "100", "--gamma", "0.05", "--out",
                     dir / "p.svm"});
  REQUIRE(p.code == 0);
  CHECK(read_json(dir / "p.svm.truth.json")["inlier_indices"].size() == 95);

  CHECK(cli({"generate", "--family", "simplex", "--d", "3"}).code != 0);
  CHECK(cli({"generate", "--family", "nope", "--out", dir / "x.csv"}).code != 0);
}

TEST_CASE("solve, verify, tamper, digest mismatch") {
  TempDir dir;
  REQUIRE(cli({"generate", "--family", "simplex", "--d", "3", "--out", dir / "s.csv"}).code == 0);
  const Run s = cli({"solve", "--algo", "bc-meb", "--epsilon", "0.1", "--seed", "7", dir / "s.csv", "--out",
                     dir / "r.json"});
  REQUIRE(s.code == 0);
  const json report = read_json(dir / "r.json");
  CHECK(report["result"]["radius"].get<double>() >= std::sqrt(3.0 / 8.0) - 1e-12);

  const Run ok = cli({"verify", "--report", dir / "r.json", "--truth", dir / "s.csv.truth.json", dir / "s.csv"});
  CHECK(ok.code == 0);
  CHECK(json::parse(ok.out)["pass"].get<bool>());

  json tampered = report;
  tampered["result"]["radius"] = 0.3;
  std::ofstream(dir / "t.json") << tampered.dump();
  const Run bad = cli({"verify", "--report", dir / "t.json", "--truth", dir / "s.csv.truth.json", dir / "s.csv"});
  CHECK(bad.code == 1);
  CHECK_FALSE(json::parse(bad.out)["pass"].get<bool>());

  REQUIRE(cli({"generate", "--family", "simplex", "--d", "4", "--out", dir / "o.csv"}).code == 0);
  const Run mismatch = cli({"verify", "--report", dir / "r.json", "--truth", dir / "s.csv.truth.json", dir / "o.csv"});
  CHECK(mismatch.code == 1);
  CHECK(mismatch.err.find("digest") != std::string::npos);
}

TEST_CASE("solve output is deterministic up to timing") {
  TempDir dir;
  REQUIRE(cli({"generate", "--family", "planted-outliers", "--n", "2000", "--d", "8", "--gamma", "0.1", "--seed",
               "3", "--out", dir / "p.csv"})
              .code == 0);
  const std::vector<std::string> args{"solve", "--algo", "outliers-sublinear", "--gamma", "0.1", "--delta", "0.1",
                                      "--seed", "11", dir / "p.csv"};
  const Run a = cli(args);
  const Run b = cli(args);
  REQUIRE(a.code == 0);
  CHECK(strip_timing(json::parse(a.out)) == strip_timing(json::parse(b.out)));
}

TEST_CASE("hybrid label schema and kcenter refusal") {
  TempDir dir;
  REQUIRE(cli({"generate", "--family", "uniform-ball", "--n", "500", "--d", "5", "--out", dir / "u.csv"}).code == 0);
  const Run h = cli({"solve", "--algo", "hybrid-meb", "--seed", "2", dir / "u.csv"});
  REQUIRE(h.code == 0);
  const std::string label = json::parse(h.out)["result"]["label"];
  CHECK((label == "radius-approx" || label == "covering-approx"));

  const Run k = cli({"solve", "--algo", "kcenter", "--k", "3", "--epsilon", "0.2", dir / "u.csv"});
  CHECK(k.code == 2);
  CHECK((k.out + k.err).find("budget") != std::string::npos);

  CHECK(cli({"solve", "--algo", "no-such", dir / "u.csv"}).code != 0);
}

TEST_CASE("bench rows") {
  TempDir dir;
  const Run b = cli({"bench", "--algos", "outliers-sublinear,baseline", "--ns", "1000,2000", "--seeds", "2",
                     "--instance-gamma", "0.1", "--out", dir / "b.csv"});
  REQUIRE(b.code == 0);
  std::ifstream in(dir / "b.csv");
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);)
    if (!l.empty()) lines.push_back(l);
  REQUIRE(lines.size() == 1 + 2 * 2 * 2);
  CHECK(lines[0] == "algo,n,d,seed,epsilon,delta,gamma,points_touched,passes_over_data,wall_ms,success");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string> cells;
    std::stringstream ss(lines[i]);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    REQUIRE(cells.size() == 11);
    if (cells[0] == "baseline") CHECK(cells[7] == cells[1]);
  }
}
