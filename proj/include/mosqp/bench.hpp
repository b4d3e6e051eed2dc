#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "mosqp/front.hpp"
#include "mosqp/metrics.hpp"
#include "mosqp/solver.hpp"

namespace mosqp {

enum class SolverKind { Mosqp, Mos };
enum class Strategy { Line, Rand };

std::string_view to_string(SolverKind kind);
std::string_view to_string(Strategy strategy);
SolverKind parse_solver_kind(std::string_view text);
Strategy parse_strategy(std::string_view text);

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ReportError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::vector<std::string> problems;  // empty -> the whole catalog
  std::vector<SolverKind> solvers{SolverKind::Mosqp, SolverKind::Mos};
  std::vector<Strategy> strategies{Strategy::Line, Strategy::Rand};
  int starts = 100;
  int runs = 10;
  std::uint64_t seed = 1;
  int workers = 1;
  SolverConfig solver_config;
  std::filesystem::path output_dir = "mosqp-out";

  /// Problem names with the catalog default applied.
  std::vector<std::string> problem_names() const;
  /// Throws ConfigError (or UnknownProblem) on invalid settings.
  void validate() const;
};

/// Reads a JSON config; every field is optional.  See README for the schema.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const nlohmann::json& doc);
/// Settings that determine the results (no output_dir, no worker count).
nlohmann::json results_json(const RunConfig& config);

struct StartResult {
  FrontPoint point;
  int iterations = 0;
  EvalCounter evals;
};

/// One (problem, solver, strategy, run) cell of the grid.
struct RunResult {
  std::string problem;
  SolverKind solver = SolverKind::Mosqp;
  Strategy strategy = Strategy::Line;
  int run_id = 0;
  std::vector<StartResult> starts;
  Front front;  // feasible, non-dominated subset of the start end points
};

/// Passed to the per-solve observer.  solved_problem is the problem the SQP
/// method actually ran on (the weighted scalarisation for MOS).
struct SolveContext {
  const Problem& problem;
  const Problem& solved_problem;
  SolverKind solver;
  Strategy strategy;
  int run_id;
  int start_id;
  const Vector& x0;
};

/// Called once per completed solve, serialised under a lock.
using SolveObserver = std::function<void(const SolveContext&, const SolveOutcome&)>;

/// Runs every cell; results are ordered by (problem, solver, strategy, run)
/// regardless of the worker count.
std::vector<RunResult> execute_grid(const RunConfig& config, const SolveObserver& observer = {});

/// Metric rows and profile curves for one comparison label
/// ("LINE", "RAND-best", "RAND-worst").
struct ComparisonSummary {
  std::string label;
  std::vector<MetricReport> reports;
  std::vector<int> run_ids;                 // parallel to reports
  std::vector<double> strongly_critical;    // fraction of starts, parallel to reports
  std::map<std::string, ProfileResult> profiles;  // by metric name
};

/// Turns grid results into metric tables and profiles.  RAND best/worst runs
/// are the runs with the most/fewest points in the cross-run reference front
/// (ties go to the lowest run id).
std::vector<ComparisonSummary> summarize(const RunConfig& config, const std::vector<RunResult>& results);

/// Metric rows for one problem, given the front each solver contributes.
std::vector<MetricReport> compare_fronts(const Problem& problem, const std::vector<Front>& fronts,
                                         const std::vector<EvalCounter>& evals);

/// Full pipeline: grid, front/run/metric/profile files, manifest.
void run_benchmark(const RunConfig& config, const SolveObserver& observer = {});

/// Prints per-problem purity/gamma/delta/FE1 per solver plus the fraction
/// of starts reaching StronglyCritical.  Throws ReportError if the manifest
/// is missing, malformed, or does not match the files on disk.
void report(const std::filesystem::path& output_dir, std::ostream& out);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace mosqp
