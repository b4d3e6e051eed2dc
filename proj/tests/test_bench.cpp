#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <unistd.h>

#include <fmt/format.h>

#include "doctest.h"
#include "mosqp/bench.hpp"
#include "mosqp/catalog.hpp"
#include "support.hpp"

using namespace mosqp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / fmt::format("mosqp-test-{}-{}", ::getpid(), name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = slurp(e.path());
  return out;
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

RunConfig bk1_line(const fs::path& out) {
  RunConfig cfg;
  cfg.problems = {"BK1"};
  cfg.strategies = {Strategy::Line};
  cfg.starts = 100;
  cfg.output_dir = out;
  return cfg;
}

}  // namespace

TEST_CASE("config parsing") {
  const RunConfig defaults = parse_run_config(nlohmann::json::object());
  CHECK(defaults.starts == 100);
  CHECK(defaults.runs == 10);
  CHECK(defaults.solvers.size() == 2);
  CHECK(defaults.strategies.size() == 2);
  CHECK(defaults.problem_names().size() == catalog().size());
  CHECK(defaults.solver_config.max_iters == 500);

  const auto doc = nlohmann::json::parse(R"({
    "problems": ["SRN", "TNK"], "solvers": ["MOS"], "strategies": ["RAND"],
    "starts": 7, "runs": 3, "seed": 99, "workers": 2, "output_dir": "elsewhere",
    "solver": {"beta": 0.2, "max_iters": 50}
  })");
  const RunConfig cfg = parse_run_config(doc);
  CHECK(cfg.problems == std::vector<std::string>{"SRN", "TNK"});
  CHECK(cfg.solvers == std::vector<SolverKind>{SolverKind::Mos});
  CHECK(cfg.strategies == std::vector<Strategy>{Strategy::Rand});
  CHECK(cfg.starts == 7);
  CHECK(cfg.seed == 99);
  CHECK(cfg.solver_config.beta == 0.2);
  CHECK(cfg.solver_config.max_iters == 50);
  CHECK(cfg.solver_config.r == 0.5);
  CHECK(cfg.output_dir == "elsewhere");
  CHECK_NOTHROW(cfg.validate());
  CHECK_FALSE(results_json(cfg).contains("output_dir"));
  CHECK_FALSE(results_json(cfg).contains("workers"));

  CHECK_THROWS_AS(parse_run_config(nlohmann::json::parse(R"({"start": 3})")), ConfigError);
  CHECK_THROWS_AS(parse_run_config(nlohmann::json::parse(R"({"solvers": ["NSGA"]})")), ConfigError);
  CHECK_THROWS_AS(parse_run_config(nlohmann::json::parse(R"({"solver": {"rho": 1}})")), ConfigError);
  CHECK_THROWS_AS(parse_run_config(nlohmann::json::parse(R"({"starts": "many"})")), ConfigError);
  RunConfig unknown;
  unknown.problems = {"NoSuch"};
  CHECK_THROWS_AS(unknown.validate(), UnknownProblem);
  RunConfig bad_beta;
  bad_beta.solver_config.beta = 2.0;
  CHECK_THROWS_AS(bad_beta.validate(), ConfigError);
  RunConfig one_line;
  one_line.starts = 1;
  CHECK_THROWS_AS(one_line.validate(), ConfigError);
}

TEST_CASE("BK1 LINE run: inventory, report, determinism, round trip") {
  const fs::path a = scratch("bk1-a");
  const fs::path b = scratch("bk1-b");
  run_benchmark(bk1_line(a));
  RunConfig threaded = bk1_line(b);
  threaded.workers = 3;
  run_benchmark(threaded);

  CHECK(fs::exists(a / "fronts/BK1_MOSQP_LINE.csv"));
  CHECK(fs::exists(a / "fronts/BK1_MOS_LINE.csv"));
  CHECK(fs::exists(a / "metrics/metrics_line.csv"));
  CHECK(fs::exists(a / "manifest.txt"));
  int metric_tables = 0;
  for (const auto& e : fs::directory_iterator(a / "metrics")) metric_tables += e.is_regular_file() ? 1 : 0;
  CHECK(metric_tables == 1);
  const std::string header = slurp(a / "profiles/profile_purity_line.csv").substr(0, 15);
  CHECK(header == "tau,MOSQP,MOS\n1");

  CHECK(tree(a) == tree(b));

  std::ostringstream table;
  report(a, table);
  const std::string text = table.str();
  CHECK(text.find("BK1        MOSQP") != std::string::npos);
  CHECK(text.find("BK1        MOS ") != std::string::npos);
  CHECK(text.find("undefined") == std::string::npos);

  // recompute every metric cell from the persisted fronts and run tables
  const Problem& problem = find_problem("BK1").problem;
  std::vector<Front> fronts;
  std::vector<EvalCounter> evals;
  for (const char* solver : {"MOSQP", "MOS"}) {
    std::ifstream in(a / fmt::format("fronts/BK1_{}_LINE.csv", solver));
    Front f;
    f.points = read_front_csv(in);
    f.solver_tag = solver;
    fronts.push_back(f);
    EvalCounter e;
    for (const auto& row : csv_rows(a / fmt::format("runs/BK1_{}_LINE.csv", solver))) {
      e.num_f += std::stoull(row[row.size() - 2]);
      e.num_grad_f += std::stoull(row[row.size() - 1]);
    }
    evals.push_back(e);
  }
  const Front reference = build_reference_front(fronts);
  const ObjectiveExtremes ex = compute_extremes(fronts);
  const auto rows = csv_rows(a / "metrics/metrics_line.csv");
  REQUIRE(rows.size() == 2);
  for (std::size_t s = 0; s < 2; ++s) {
    CHECK(rows[s][1] == fronts[s].solver_tag);
    CHECK(std::stoul(rows[s][3]) == fronts[s].points.size());
    CHECK(std::stod(rows[s][4]) == purity(fronts[s], reference));
    CHECK(std::stod(rows[s][5]) == gamma_spread(fronts[s], ex));
    CHECK(std::stod(rows[s][6]) == delta_spread(fronts[s], ex));
    CHECK(std::stod(rows[s][7]) ==
          fe1(evals[s], problem.num_variables(), static_cast<int>(fronts[s].points.size())));
  }

  // tampering breaks the checksum
  { std::ofstream(a / "fronts/BK1_MOS_LINE.csv", std::ios::app) << "\n"; }
  std::ostringstream ignored;
  CHECK_THROWS_AS(report(a, ignored), ReportError);

  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("report guards") {
  const fs::path empty = scratch("empty");
  fs::create_directories(empty);
  std::ostringstream out;
  CHECK_THROWS_AS(report(empty, out), ReportError);
  { std::ofstream(empty / "manifest.txt") << "not a manifest\n"; }
  CHECK_THROWS_AS(report(empty, out), ReportError);
  fs::remove_all(empty);
  CHECK_THROWS_AS(report(empty, out), ReportError);
}

TEST_CASE("single solver report flags purity as undefined") {
  const fs::path dir = scratch("single");
  RunConfig cfg;
  cfg.problems = {"SSFYY1"};
  cfg.solvers = {SolverKind::Mosqp};
  cfg.strategies = {Strategy::Rand};
  cfg.starts = 10;
  cfg.runs = 3;
  cfg.output_dir = dir;
  run_benchmark(cfg);
  std::ostringstream out;
  report(dir, out);
  CHECK(out.str().find("undef") != std::string::npos);
  CHECK(fs::exists(dir / "metrics/metrics_rand_best.csv"));
  CHECK(fs::exists(dir / "metrics/metrics_rand_worst.csv"));
  CHECK(csv_rows(dir / "runs/SSFYY1_MOSQP_RAND.csv").size() == 30);
  fs::remove_all(dir);
}

TEST_CASE("RAND picks the runs with most and fewest reference points") {
  RunConfig cfg;
  cfg.problems = {"TNK"};
  cfg.strategies = {Strategy::Rand};
  cfg.starts = 8;
  cfg.runs = 4;
  const std::vector<RunResult> results = execute_grid(cfg);
  REQUIRE(results.size() == 8);
  std::vector<Front> all;
  for (const RunResult& r : results) all.push_back(r.front);
  const Front reference = build_reference_front(all);
  auto shared = [&](const Front& f) {
    int n = 0;
    for (const FrontPoint& p : f.points)
      for (const FrontPoint& q : reference.points)
        if ((p.f - q.f).cwiseAbs().maxCoeff() <= 1e-8) {
          ++n;
          break;
        }
    return n;
  };
  const std::vector<ComparisonSummary> summary = summarize(cfg, results);
  REQUIRE(summary.size() == 2);
  CHECK(summary[0].label == "RAND-best");
  CHECK(summary[1].label == "RAND-worst");
  for (std::size_t s = 0; s < 2; ++s) {
    int best = -1, worst = 1 << 30, best_id = -1, worst_id = -1;
    for (const RunResult& r : results) {
      if (r.solver != cfg.solvers[s]) continue;
      const int n = shared(r.front);
      if (n > best) best = n, best_id = r.run_id;
      if (n < worst) worst = n, worst_id = r.run_id;
    }
    CHECK(summary[0].run_ids[s] == best_id);
    CHECK(summary[1].run_ids[s] == worst_id);
  }
}

TEST_CASE("observer sees every solve") {
  RunConfig cfg;
  cfg.problems = {"BK1", "SRN"};
  cfg.strategies = {Strategy::Line};
  cfg.starts = 5;
  cfg.workers = 2;
  int calls = 0;
  int mos_calls = 0;
  execute_grid(cfg, [&](const SolveContext& ctx, const SolveOutcome& out) {
    ++calls;
    if (ctx.solver == SolverKind::Mos) {
      ++mos_calls;
      CHECK(ctx.solved_problem.num_objectives() == 1);
    }
    CHECK_FALSE(out.trace.empty());
  });
  CHECK(calls == 20);
  CHECK(mos_calls == 10);
}

TEST_CASE("a tight iteration cap still records every start") {
  RunConfig cfg;
  cfg.problems = {"BK1"};
  cfg.strategies = {Strategy::Line};
  cfg.starts = 3;
  cfg.solver_config.max_iters = 1;
  const std::vector<RunResult> results = execute_grid(cfg);
  for (const RunResult& r : results) CHECK(r.starts.size() == 3);
}

TEST_CASE("sha256 of a known string") {
  const fs::path dir = scratch("sha");
  fs::create_directories(dir);
  { std::ofstream(dir / "abc.txt", std::ios::binary) << "abc"; }
  CHECK(sha256_file(dir / "abc.txt") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  fs::remove_all(dir);
}
