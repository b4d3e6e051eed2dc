#include "mosqp/bench.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <openssl/evp.h>

#include "mosqp/catalog.hpp"
#include "mosqp/random.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace mosqp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::string_view kManifestHeader = "mosqp-manifest 1";
const std::array<std::string, 4> kMetricNames{"purity", "gamma", "delta", "fe1"};

}  // namespace

std::string_view to_string(SolverKind kind) { return kind == SolverKind::Mosqp ? "MOSQP" : "MOS"; }
std::string_view to_string(Strategy strategy) { return strategy == Strategy::Line ? "LINE" : "RAND"; }

SolverKind parse_solver_kind(std::string_view text) {
  if (text == "MOSQP") return SolverKind::Mosqp;
  if (text == "MOS") return SolverKind::Mos;
  throw ConfigError(fmt::format("unknown solver '{}' (expected MOSQP or MOS)", text));
}

Strategy parse_strategy(std::string_view text) {
  if (text == "LINE") return Strategy::Line;
  if (text == "RAND") return Strategy::Rand;
  throw ConfigError(fmt::format("unknown strategy '{}' (expected LINE or RAND)", text));
}

// ---------------------------------------------------------------------------
// Configuration

std::vector<std::string> RunConfig::problem_names() const {
  if (!problems.empty()) return problems;
  std::vector<std::string> names;
  for (const CatalogEntry& e : catalog()) names.push_back(e.problem.name());
  return names;
}

void RunConfig::validate() const {
  if (solvers.empty()) throw ConfigError("config: no solvers selected");
  if (strategies.empty()) throw ConfigError("config: no strategies selected");
  if (std::set<SolverKind>(solvers.begin(), solvers.end()).size() != solvers.size())
    throw ConfigError("config: duplicate solver");
  if (std::set<Strategy>(strategies.begin(), strategies.end()).size() != strategies.size())
    throw ConfigError("config: duplicate strategy");
  const bool line = std::find(strategies.begin(), strategies.end(), Strategy::Line) != strategies.end();
  if (starts < (line ? 2 : 1)) throw ConfigError("config: too few starts");
  if (runs < 1) throw ConfigError("config: runs must be at least 1");
  if (workers < 1) throw ConfigError("config: workers must be at least 1");
  try {
    solver_config.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  std::set<std::string> seen;
  for (const std::string& name : problem_names()) {
    if (!seen.insert(name).second) throw ConfigError(fmt::format("config: duplicate problem '{}'", name));
    const CatalogEntry& entry = find_problem(name);
    if (line && entry.problem.num_objectives() != 2)
      throw ConfigError(fmt::format("config: LINE needs two objectives, {} has {}", name,
                                    entry.problem.num_objectives()));
  }
}

RunConfig parse_run_config(const json& doc) {
  static const std::set<std::string> top_keys{"problems", "solvers", "strategies", "starts", "runs",
                                              "seed",     "workers", "output_dir", "solver"};
  static const std::set<std::string> solver_keys{"r", "beta", "sigma0", "epsilon", "max_iters", "sigma_cap"};
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  RunConfig cfg;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (!top_keys.contains(key)) throw ConfigError(fmt::format("config: unknown key '{}'", key));
    }
    if (doc.contains("problems")) cfg.problems = doc.at("problems").get<std::vector<std::string>>();
    if (doc.contains("solvers")) {
      cfg.solvers.clear();
      for (const auto& s : doc.at("solvers")) cfg.solvers.push_back(parse_solver_kind(s.get<std::string>()));
    }
    if (doc.contains("strategies")) {
      cfg.strategies.clear();
      for (const auto& s : doc.at("strategies")) cfg.strategies.push_back(parse_strategy(s.get<std::string>()));
    }
    if (doc.contains("starts")) cfg.starts = doc.at("starts").get<int>();
    if (doc.contains("runs")) cfg.runs = doc.at("runs").get<int>();
    if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("workers")) cfg.workers = doc.at("workers").get<int>();
    if (doc.contains("output_dir")) cfg.output_dir = doc.at("output_dir").get<std::string>();
    if (doc.contains("solver")) {
      const json& s = doc.at("solver");
      if (!s.is_object()) throw ConfigError("config: 'solver' must be an object");
      for (const auto& [key, value] : s.items()) {
        if (!solver_keys.contains(key)) throw ConfigError(fmt::format("config: unknown solver key '{}'", key));
      }
      SolverConfig& sc = cfg.solver_config;
      sc.r = s.value("r", sc.r);
      sc.beta = s.value("beta", sc.beta);
      sc.sigma0 = s.value("sigma0", sc.sigma0);
      sc.epsilon = s.value("epsilon", sc.epsilon);
      sc.max_iters = s.value("max_iters", sc.max_iters);
      sc.sigma_cap = s.value("sigma_cap", sc.sigma_cap);
    }
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("config: {}", e.what()));
  }
  return cfg;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("config '{}': {}", path.string(), e.what()));
  }
  return parse_run_config(doc);
}

json results_json(const RunConfig& config) {
  json doc;
  doc["problems"] = config.problem_names();
  doc["solvers"] = json::array();
  for (SolverKind s : config.solvers) doc["solvers"].push_back(std::string(to_string(s)));
  doc["strategies"] = json::array();
  for (Strategy s : config.strategies) doc["strategies"].push_back(std::string(to_string(s)));
  doc["starts"] = config.starts;
  doc["runs"] = config.runs;
  doc["seed"] = config.seed;
  const SolverConfig& sc = config.solver_config;
  doc["solver"] = {{"r", sc.r},           {"beta", sc.beta},           {"sigma0", sc.sigma0},
                   {"epsilon", sc.epsilon}, {"max_iters", sc.max_iters}, {"sigma_cap", sc.sigma_cap}};
  return doc;
}

// ---------------------------------------------------------------------------
// Grid execution

namespace {

std::uint64_t derive_seed(std::uint64_t base, std::string_view problem, int run, std::uint32_t stream) {
  std::uint32_t h = 2166136261u;  // FNV-1a of the problem name
  for (char c : problem) {
    h ^= static_cast<unsigned char>(c);
    h *= 16777619u;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32), h,
                    static_cast<std::uint32_t>(run), stream};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

struct Cell {
  const CatalogEntry* entry;
  SolverKind solver;
  Strategy strategy;
  int run_id;
};

RunResult run_cell(const RunConfig& config, const Cell& cell, const SolveObserver& observer,
                   std::mutex& observer_lock) {
  const Problem& problem = cell.entry->problem;
  const int m = problem.num_objectives();
  const std::string solver_name(to_string(cell.solver));
  SolverConfig solver_config = config.solver_config;
  solver_config.record_trace = static_cast<bool>(observer);

  std::vector<Vector> x0s;
  std::vector<Vector> weights;
  if (cell.solver == SolverKind::Mosqp) {
    x0s = cell.strategy == Strategy::Line
              ? line_starts(problem, config.starts)
              : rand_starts(problem, config.starts, derive_seed(config.seed, problem.name(), cell.run_id, 1));
  } else {
    const Vector mid = 0.5 * (problem.lower() + problem.upper());
    x0s.assign(config.starts, mid);
    if (cell.strategy == Strategy::Line) {
      for (int k = 0; k < config.starts; ++k) {
        const double w = static_cast<double>(k) / (config.starts - 1);
        Vector wv(2);
        wv << w, 1.0 - w;
        weights.push_back(wv);
      }
    } else {
      UniformSource rng(derive_seed(config.seed, problem.name(), cell.run_id, 2));
      for (int k = 0; k < config.starts; ++k) {
        Vector wv(m);
        do {
          for (int j = 0; j < m; ++j) wv[j] = rng.next();
        } while ((wv.array() == 0.0).all());
        weights.push_back(wv);
      }
    }
  }

  RunResult result;
  result.problem = problem.name();
  result.solver = cell.solver;
  result.strategy = cell.strategy;
  result.run_id = cell.run_id;
  std::vector<FrontPoint> points;
  for (int k = 0; k < static_cast<int>(x0s.size()); ++k) {
    StartResult sr;
    sr.point.run_id = cell.run_id;
    sr.point.start_id = k;
    sr.point.solver = solver_name;
    try {
      if (cell.solver == SolverKind::Mosqp) {
        const SolveOutcome outcome = solve(problem, x0s[k], solver_config);
        sr.point.x = outcome.final_x;
        sr.point.f = outcome.final_f;
        sr.point.phi = outcome.final_phi;
        sr.point.status = std::string(to_string(outcome.status));
        sr.iterations = outcome.iterations;
        sr.evals = outcome.evals;
        if (observer) {
          std::lock_guard lock(observer_lock);
          observer(SolveContext{problem, problem, cell.solver, cell.strategy, cell.run_id, k, x0s[k]}, outcome);
        }
      } else {
        const Problem scalarised = weighted_sum_problem(problem, weights[k]);
        const SolveOutcome outcome = solve(scalarised, x0s[k], solver_config);
        sr.point.x = outcome.final_x;
        sr.point.f = problem.objectives(outcome.final_x);
        sr.point.phi = outcome.final_phi;
        sr.point.status = std::string(to_string(outcome.status));
        sr.iterations = outcome.iterations;
        sr.evals = outcome.evals;
        if (observer) {
          std::lock_guard lock(observer_lock);
          observer(SolveContext{problem, scalarised, cell.solver, cell.strategy, cell.run_id, k, x0s[k]},
                   outcome);
        }
      }
      sr.point.feasible = sr.point.phi <= kFeasibilityTolerance && sr.point.f.allFinite();
    } catch (const EvaluationError&) {
      sr.point.x = x0s[k];
      sr.point.f = Vector::Constant(m, std::numeric_limits<double>::quiet_NaN());
      sr.point.phi = std::numeric_limits<double>::quiet_NaN();
      sr.point.status = "EvaluationError";
      sr.point.feasible = false;
    }
    points.push_back(sr.point);
    result.front.evals += sr.evals;
    result.starts.push_back(std::move(sr));
  }
  const EvalCounter evals = result.front.evals;
  result.front = nondominated_filter(points, solver_name);
  result.front.evals = evals;
  return result;
}

}  // namespace

std::vector<RunResult> execute_grid(const RunConfig& config, const SolveObserver& observer) {
  config.validate();
  std::vector<Cell> cells;
  for (const std::string& name : config.problem_names()) {
    const CatalogEntry& entry = find_problem(name);
    for (SolverKind solver : config.solvers)
      for (Strategy strategy : config.strategies) {
        const int runs = strategy == Strategy::Line ? 1 : config.runs;
        for (int r = 0; r < runs; ++r) cells.push_back(Cell{&entry, solver, strategy, r});
      }
  }

  std::vector<RunResult> results(cells.size());
  std::mutex observer_lock;
  std::atomic<std::size_t> next{0};
  std::mutex error_lock;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        results[i] = run_cell(config, cells[i], observer, observer_lock);
      } catch (...) {
        std::lock_guard lock(error_lock);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  const int threads = std::min<int>(config.workers, static_cast<int>(cells.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

// ---------------------------------------------------------------------------
// Metrics

std::vector<MetricReport> compare_fronts(const Problem& problem, const std::vector<Front>& fronts,
                                         const std::vector<EvalCounter>& evals) {
  const Front reference = build_reference_front(fronts);
  const ObjectiveExtremes extremes = compute_extremes(fronts);
  std::vector<MetricReport> out;
  for (std::size_t s = 0; s < fronts.size(); ++s) {
    const Front& front = fronts[s];
    MetricReport r;
    r.problem = problem.name();
    r.solver = front.solver_tag;
    r.front_size = static_cast<int>(front.points.size());
    r.purity = reference.points.empty() ? kInf : purity(front, reference);
    if (!front.points.empty()) {
      r.gamma = gamma_spread(front, extremes);
      r.fe1 = fe1(evals[s], problem.num_variables(), r.front_size);
    }
    if (front.points.size() >= 2) r.delta = delta_spread(front, extremes);
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

double strongly_critical_fraction(const RunResult& run) {
  if (run.starts.empty()) return 0.0;
  const auto hits = std::count_if(run.starts.begin(), run.starts.end(), [](const StartResult& s) {
    return s.point.status == to_string(SolveStatus::StronglyCritical);
  });
  return static_cast<double>(hits) / static_cast<double>(run.starts.size());
}

std::size_t shared_points(const Front& front, const Front& reference) {
  std::size_t shared = 0;
  for (const FrontPoint& p : front.points) {
    if (std::any_of(reference.points.begin(), reference.points.end(),
                    [&](const FrontPoint& r) { return same_objectives(r.f, p.f); }))
      ++shared;
  }
  return shared;
}

double metric_score(const MetricReport& r, const std::string& metric) {
  std::optional<double> v;
  if (metric == "purity") v = r.purity;
  else if (metric == "gamma") v = r.gamma;
  else if (metric == "delta") v = r.delta;
  else v = r.fe1;
  return v.value_or(kInf);
}

}  // namespace

std::vector<ComparisonSummary> summarize(const RunConfig& config, const std::vector<RunResult>& results) {
  auto find_runs = [&](const std::string& problem, SolverKind solver, Strategy strategy) {
    std::vector<const RunResult*> runs;
    for (const RunResult& r : results)
      if (r.problem == problem && r.solver == solver && r.strategy == strategy) runs.push_back(&r);
    return runs;
  };

  std::vector<std::pair<std::string, std::vector<std::vector<const RunResult*>>>> comparisons;
  const std::vector<std::string> names = config.problem_names();
  for (Strategy strategy : config.strategies) {
    if (strategy == Strategy::Line) {
      std::vector<std::vector<const RunResult*>> picks;
      for (const std::string& name : names) {
        std::vector<const RunResult*> per_solver;
        for (SolverKind solver : config.solvers) per_solver.push_back(find_runs(name, solver, strategy).front());
        picks.push_back(per_solver);
      }
      comparisons.emplace_back("LINE", std::move(picks));
    } else {
      std::vector<std::vector<const RunResult*>> best;
      std::vector<std::vector<const RunResult*>> worst;
      for (const std::string& name : names) {
        std::vector<Front> all;
        for (SolverKind solver : config.solvers)
          for (const RunResult* r : find_runs(name, solver, strategy)) all.push_back(r->front);
        const Front reference = build_reference_front(all);
        std::vector<const RunResult*> best_row;
        std::vector<const RunResult*> worst_row;
        for (SolverKind solver : config.solvers) {
          const RunResult* hi = nullptr;
          const RunResult* lo = nullptr;
          std::size_t hi_count = 0;
          std::size_t lo_count = 0;
          for (const RunResult* r : find_runs(name, solver, strategy)) {
            const std::size_t count = shared_points(r->front, reference);
            if (!hi || count > hi_count) {
              hi = r;
              hi_count = count;
            }
            if (!lo || count < lo_count) {
              lo = r;
              lo_count = count;
            }
          }
          best_row.push_back(hi);
          worst_row.push_back(lo);
        }
        best.push_back(std::move(best_row));
        worst.push_back(std::move(worst_row));
      }
      comparisons.emplace_back("RAND-best", std::move(best));
      comparisons.emplace_back("RAND-worst", std::move(worst));
    }
  }

  std::vector<std::string> solver_names;
  for (SolverKind s : config.solvers) solver_names.emplace_back(to_string(s));

  std::vector<ComparisonSummary> out;
  for (const auto& [label, picks] : comparisons) {
    ComparisonSummary summary;
    summary.label = label;
    std::vector<std::vector<MetricReport>> per_problem;
    for (std::size_t p = 0; p < names.size(); ++p) {
      std::vector<Front> fronts;
      std::vector<EvalCounter> evals;
      for (const RunResult* r : picks[p]) {
        fronts.push_back(r->front);
        evals.push_back(r->front.evals);
      }
      std::vector<MetricReport> rows = compare_fronts(find_problem(names[p]).problem, fronts, evals);
      for (std::size_t s = 0; s < rows.size(); ++s) {
        summary.run_ids.push_back(picks[p][s]->run_id);
        summary.strongly_critical.push_back(strongly_critical_fraction(*picks[p][s]));
        summary.reports.push_back(rows[s]);
      }
      per_problem.push_back(std::move(rows));
    }
    for (const std::string& metric : kMetricNames) {
      std::vector<std::vector<double>> scores;
      for (const auto& rows : per_problem) {
        std::vector<double> row;
        for (const MetricReport& r : rows) row.push_back(metric_score(r, metric));
        scores.push_back(std::move(row));
      }
      summary.profiles[metric] = performance_profile(scores, solver_names);
    }
    out.push_back(std::move(summary));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Persistence

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ReportError(fmt::format("cannot read '{}'", path.string()));
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw Error("sha256: digest failed");
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

namespace {

std::string format_optional(const std::optional<double>& v) { return v ? fmt::format("{}", *v) : "NA"; }

class OutputWriter {
 public:
  explicit OutputWriter(fs::path root) : root_(std::move(root)) {}

  void write(const fs::path& relative, const std::string& contents) {
    const fs::path full = root_ / relative;
    fs::create_directories(full.parent_path());
    std::ofstream out(full, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(fmt::format("cannot write '{}'", full.string()));
    out << contents;
    if (!out) throw Error(fmt::format("write failed for '{}'", full.string()));
    files_.push_back(relative.generic_string());
  }

  const fs::path& root() const { return root_; }
  std::vector<std::string> files() const {
    std::vector<std::string> sorted = files_;
    std::sort(sorted.begin(), sorted.end());
    return sorted;
  }

 private:
  fs::path root_;
  std::vector<std::string> files_;
};

std::string file_stem(const std::string& problem, SolverKind solver, Strategy strategy) {
  return fmt::format("{}_{}_{}.csv", problem, to_string(solver), to_string(strategy));
}

std::string runs_csv(const std::vector<const RunResult*>& runs, int n, int m) {
  std::ostringstream out;
  out << "run_id,start_id,solver";
  for (int i = 1; i <= n; ++i) out << ",x_" << i;
  for (int j = 1; j <= m; ++j) out << ",f_" << j;
  out << ",phi,status,iterations,num_f,num_grad_f\n";
  for (const RunResult* run : runs) {
    for (const StartResult& s : run->starts) {
      const FrontPoint& p = s.point;
      fmt::print(out, "{},{},{}", p.run_id, p.start_id, p.solver);
      for (int i = 0; i < n; ++i) fmt::print(out, ",{}", p.x[i]);
      for (int j = 0; j < m; ++j) fmt::print(out, ",{}", p.f[j]);
      fmt::print(out, ",{},{},{},{},{}\n", p.phi, p.status, s.iterations, s.evals.num_f, s.evals.num_grad_f);
    }
  }
  return out.str();
}

std::string metrics_csv(const ComparisonSummary& summary) {
  std::ostringstream out;
  out << "problem,solver,run_id,front_size,purity,gamma,delta,fe1,strongly_critical\n";
  for (std::size_t i = 0; i < summary.reports.size(); ++i) {
    const MetricReport& r = summary.reports[i];
    fmt::print(out, "{},{},{},{},{},{},{},{},{}\n", r.problem, r.solver, summary.run_ids[i], r.front_size, r.purity,
               format_optional(r.gamma), format_optional(r.delta), format_optional(r.fe1),
               summary.strongly_critical[i]);
  }
  return out.str();
}

std::string profile_csv(const ProfileResult& profile) {
  std::ostringstream out;
  out << "tau";
  for (const ProfileCurve& c : profile.curves) out << ',' << c.solver;
  out << '\n';
  if (!profile.curves.empty()) {
    for (std::size_t k = 0; k < profile.curves.front().samples.size(); ++k) {
      fmt::print(out, "{}", profile.curves.front().samples[k].first);
      for (const ProfileCurve& c : profile.curves) fmt::print(out, ",{}", c.samples[k].second);
      out << '\n';
    }
  }
  return out.str();
}

std::string label_slug(const std::string& label) {
  std::string slug = label;
  std::transform(slug.begin(), slug.end(), slug.begin(), [](unsigned char c) {
    return c == '-' ? '_' : static_cast<char>(std::tolower(c));
  });
  return slug;
}

}  // namespace

void run_benchmark(const RunConfig& config, const SolveObserver& observer) {
  config.validate();
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec || !fs::is_directory(config.output_dir))
    throw Error(fmt::format("cannot create output directory '{}'", config.output_dir.string()));

  const std::vector<RunResult> results = execute_grid(config, observer);
  const std::vector<ComparisonSummary> summaries = summarize(config, results);

  OutputWriter writer(config.output_dir);
  for (const std::string& name : config.problem_names()) {
    const Problem& problem = find_problem(name).problem;
    const int n = problem.num_variables();
    const int m = problem.num_objectives();
    for (SolverKind solver : config.solvers) {
      for (Strategy strategy : config.strategies) {
        std::vector<const RunResult*> runs;
        std::vector<FrontPoint> front_points;
        for (const RunResult& r : results) {
          if (r.problem == name && r.solver == solver && r.strategy == strategy) {
            runs.push_back(&r);
            front_points.insert(front_points.end(), r.front.points.begin(), r.front.points.end());
          }
        }
        std::ostringstream front;
        write_front_csv(front, front_points, n, m);
        writer.write(fs::path("fronts") / file_stem(name, solver, strategy), front.str());
        writer.write(fs::path("runs") / file_stem(name, solver, strategy), runs_csv(runs, n, m));
      }
    }
  }
  for (const ComparisonSummary& s : summaries) {
    writer.write(fs::path("metrics") / fmt::format("metrics_{}.csv", label_slug(s.label)), metrics_csv(s));
    for (const auto& [metric, profile] : s.profiles) {
      writer.write(fs::path("profiles") / fmt::format("profile_{}_{}.csv", metric, label_slug(s.label)),
                   profile_csv(profile));
    }
  }

  std::ostringstream manifest;
  manifest << kManifestHeader << '\n';
  manifest << "seed=" << config.seed << '\n';
  manifest << "config=" << results_json(config).dump() << '\n';
  for (const std::string& file : writer.files())
    manifest << "file=" << file << " sha256=" << sha256_file(config.output_dir / file) << '\n';
  std::ofstream out(config.output_dir / "manifest.txt", std::ios::binary | std::ios::trunc);
  out << manifest.str();
  if (!out) throw Error("cannot write manifest");
}

// ---------------------------------------------------------------------------
// Report

namespace {

struct Manifest {
  std::uint64_t seed = 0;
  json config;
  std::vector<std::pair<std::string, std::string>> files;  // path, sha256
};

Manifest read_manifest(const fs::path& dir) {
  const fs::path path = dir / "manifest.txt";
  std::ifstream in(path);
  if (!in) throw ReportError(fmt::format("no manifest in '{}'", dir.string()));
  Manifest manifest;
  std::string line;
  if (!std::getline(in, line) || line != kManifestHeader) throw ReportError("manifest: bad header");
  bool have_config = false;
  bool have_seed = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      if (line.rfind("seed=", 0) == 0) {
        manifest.seed = std::stoull(line.substr(5));
        have_seed = true;
      } else if (line.rfind("config=", 0) == 0) {
        manifest.config = json::parse(line.substr(7));
        have_config = true;
      } else if (line.rfind("file=", 0) == 0) {
        const auto space = line.find(" sha256=");
        if (space == std::string::npos) throw ReportError("manifest: malformed file entry");
        manifest.files.emplace_back(line.substr(5, space - 5), line.substr(space + 8));
      } else {
        throw ReportError(fmt::format("manifest: unexpected line '{}'", line));
      }
    } catch (const std::logic_error&) {
      throw ReportError(fmt::format("manifest: malformed line '{}'", line));
    } catch (const json::exception&) {
      throw ReportError("manifest: malformed config");
    }
  }
  if (!have_config || !have_seed || manifest.files.empty()) throw ReportError("manifest: incomplete");
  for (const auto& [file, digest] : manifest.files) {
    if (!fs::exists(dir / file)) throw ReportError(fmt::format("manifest: missing file '{}'", file));
    if (sha256_file(dir / file) != digest) throw ReportError(fmt::format("manifest: checksum mismatch for '{}'", file));
  }
  return manifest;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

std::string short_number(const std::string& text) {
  if (text == "NA" || text == "inf") return text;
  return fmt::format("{:.4g}", std::stod(text));
}

}  // namespace

void report(const fs::path& output_dir, std::ostream& out) {
  const Manifest manifest = read_manifest(output_dir);
  const std::size_t num_solvers = manifest.config.value("solvers", json::array()).size();
  const bool single_solver = num_solvers < 2;

  fmt::print(out, "seed {}\n", manifest.seed);
  out << "purity = |F_p| / |F_ps ∩ F_p| (reciprocal of the classical ratio; 1 is best, inf = no contribution)\n";
  if (single_solver) out << "purity undefined: a single solver's front is its own reference\n";

  for (const auto& [file, digest] : manifest.files) {
    if (file.rfind("metrics/", 0) != 0) continue;
    std::ifstream in(output_dir / file);
    std::string line;
    std::getline(in, line);
    fmt::print(out, "\n== {} ==\n", file.substr(std::string("metrics/metrics_").size(),
                                                 file.size() - std::string("metrics/metrics_").size() - 4));
    fmt::print(out, "{:<10} {:<6} {:>6} {:>10} {:>10} {:>10} {:>10} {:>8}\n", "problem", "solver", "points", "purity",
               "gamma", "delta", "FE1", "strong");
    while (std::getline(in, line)) {
      const std::vector<std::string> c = split(line);
      if (c.size() < 9) throw ReportError(fmt::format("{}: short row", file));
      const std::string purity_text = single_solver ? "undef" : short_number(c[4]);
      fmt::print(out, "{:<10} {:<6} {:>6} {:>10} {:>10} {:>10} {:>10} {:>7.1f}%\n", c[0], c[1], c[3], purity_text,
                 short_number(c[5]), short_number(c[6]), short_number(c[7]), 100.0 * std::stod(c[8]));
    }
  }
}

}  // namespace mosqp
