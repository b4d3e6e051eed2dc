#include "mosqp/front.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "mosqp/random.hpp"

namespace mosqp {

std::vector<Vector> line_starts(const Problem& problem, int count) {
  if (count < 2) throw std::invalid_argument("line_starts: need at least two points");
  const Vector& l = problem.lower();
  const Vector& u = problem.upper();
  std::vector<Vector> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) out.push_back(l + static_cast<double>(k) * (u - l) / (count - 1));
  return out;
}

std::vector<Vector> rand_starts(const Problem& problem, int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("rand_starts: need at least one point");
  const Vector& l = problem.lower();
  const Vector& u = problem.upper();
  UniformSource rng(seed);
  std::vector<Vector> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    Vector x(l.size());
    for (Eigen::Index i = 0; i < l.size(); ++i) x[i] = rng.uniform(l[i], u[i]);
    out.push_back(std::move(x));
  }
  return out;
}

Problem weighted_sum_problem(const Problem& problem, const Vector& weights) {
  if (weights.size() != problem.num_objectives())
    throw std::invalid_argument("weighted_sum_problem: weight vector has the wrong length");
  if ((weights.array() < 0.0).any() || (weights.array() == 0.0).all())
    throw std::invalid_argument("weighted_sum_problem: weights must be non-negative and not all zero");

  ProblemDefinition def = problem.definition();
  def.name = problem.name() + "-weighted";
  def.num_objectives = 1;
  const VectorFunction base = def.objectives;
  def.objectives = [base, weights](const Vector& x) { return Vector::Constant(1, weights.dot(base(x))); };
  if (const JacobianFunction base_jac = def.objective_jacobian) {
    def.objective_jacobian = [base_jac, weights](const Vector& x) {
      return Matrix(weights.transpose() * base_jac(x));
    };
  }
  return Problem(std::move(def));
}

SolveOutcome weighted_sum_solve(const Problem& problem, const Vector& weights, const Vector& x0,
                                const SolverConfig& config) {
  return solve(weighted_sum_problem(problem, weights), x0, config);
}

bool same_objectives(const Vector& a, const Vector& b, double tol) {
  return (a - b).lpNorm<Eigen::Infinity>() <= tol;
}

bool dominates(const Vector& a, const Vector& b, double tol) {
  return (a.array() <= b.array()).all() && !same_objectives(a, b, tol);
}

Front nondominated_filter(const std::vector<FrontPoint>& points, std::string solver_tag) {
  std::vector<const FrontPoint*> feasible;
  feasible.reserve(points.size());
  for (const FrontPoint& p : points)
    if (p.feasible) feasible.push_back(&p);

  Front out;
  out.solver_tag = std::move(solver_tag);
  for (const FrontPoint* candidate : feasible) {
    const bool dominated = std::any_of(feasible.begin(), feasible.end(), [&](const FrontPoint* other) {
      return other != candidate && dominates(other->f, candidate->f);
    });
    if (dominated) continue;
    const bool duplicate = std::any_of(out.points.begin(), out.points.end(),
                                       [&](const FrontPoint& kept) { return same_objectives(kept.f, candidate->f); });
    if (!duplicate) out.points.push_back(*candidate);
  }
  return out;
}

Front build_reference_front(const std::vector<Front>& fronts) {
  std::vector<FrontPoint> all;
  EvalCounter evals;
  for (const Front& f : fronts) {
    all.insert(all.end(), f.points.begin(), f.points.end());
    evals += f.evals;
  }
  Front ref = nondominated_filter(all, "reference");
  ref.evals = evals;
  return ref;
}

void write_front_csv(std::ostream& out, const std::vector<FrontPoint>& points, int n, int m) {
  out << "run_id,start_id,solver";
  for (int i = 1; i <= n; ++i) out << ",x_" << i;
  for (int j = 1; j <= m; ++j) out << ",f_" << j;
  out << ",phi,status\n";
  for (const FrontPoint& p : points) {
    fmt::print(out, "{},{},{}", p.run_id, p.start_id, p.solver);
    for (int i = 0; i < n; ++i) fmt::print(out, ",{}", p.x[i]);
    for (int j = 0; j < m; ++j) fmt::print(out, ",{}", p.f[j]);
    fmt::print(out, ",{},{}\n", p.phi, p.status);
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_double(const std::string& text) {
  // strtod handles inf/nan spellings as written by fmt.
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') throw std::runtime_error("front csv: bad number '" + text + "'");
  return v;
}

int parse_int(const std::string& text) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw std::runtime_error("front csv: bad integer '" + text + "'");
  return v;
}

}  // namespace

std::vector<FrontPoint> read_front_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("front csv: missing header");
  const std::vector<std::string> header = split_csv_line(line);
  int n = 0;
  int m = 0;
  for (const std::string& h : header) {
    if (h.rfind("x_", 0) == 0) ++n;
    if (h.rfind("f_", 0) == 0) ++m;
  }
  const std::size_t columns = 3 + n + m + 2;
  if (header.size() < columns || header[0] != "run_id" || header[1] != "start_id" || header[2] != "solver")
    throw std::runtime_error("front csv: unexpected header");

  std::vector<FrontPoint> points;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() < columns) throw std::runtime_error("front csv: short row");
    FrontPoint p;
    p.run_id = parse_int(cells[0]);
    p.start_id = parse_int(cells[1]);
    p.solver = cells[2];
    p.x.resize(n);
    p.f.resize(m);
    for (int i = 0; i < n; ++i) p.x[i] = parse_double(cells[3 + i]);
    for (int j = 0; j < m; ++j) p.f[j] = parse_double(cells[3 + n + j]);
    p.phi = parse_double(cells[3 + n + m]);
    p.status = cells[4 + n + m];
    p.feasible = p.phi <= kFeasibilityTolerance;
    points.push_back(std::move(p));
  }
  return points;
}

}  // namespace mosqp
