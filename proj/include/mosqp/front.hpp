#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mosqp/problem.hpp"
#include "mosqp/solver.hpp"

namespace mosqp {

inline constexpr double kObjectiveDuplicateTolerance = 1e-8;

/// A solver end point.  status is the solver status name, or
/// "EvaluationError" when the run could not even evaluate its start point.
struct FrontPoint {
  Vector x;
  Vector f;
  double phi = 0.0;
  bool feasible = false;
  std::string status;
  int run_id = 0;
  int start_id = 0;
  std::string solver;
};

struct Front {
  std::vector<FrontPoint> points;
  std::string solver_tag;
  EvalCounter evals;
};

/// count points l + k (u - l) / (count - 1), k = 0..count-1.
std::vector<Vector> line_starts(const Problem& problem, int count = 100);

/// count points drawn componentwise uniform on [l_i, u_i].
std::vector<Vector> rand_starts(const Problem& problem, int count, std::uint64_t seed);

/// Single-objective problem sum_j w_j f_j(x) with the constraints of problem.
Problem weighted_sum_problem(const Problem& problem, const Vector& weights);

/// Runs the SQP solver on the weighted-sum scalarisation.  The outcome's
/// final_f holds the scalarised value; use problem.objectives() for the
/// vector image.
SolveOutcome weighted_sum_solve(const Problem& problem, const Vector& weights, const Vector& x0,
                                const SolverConfig& config = {});

/// Objective vectors equal within kObjectiveDuplicateTolerance (max norm).
bool same_objectives(const Vector& a, const Vector& b, double tol = kObjectiveDuplicateTolerance);
/// a dominates b: a <= b componentwise and a != b (beyond the duplicate tolerance).
bool dominates(const Vector& a, const Vector& b, double tol = kObjectiveDuplicateTolerance);

/// Drops infeasible points, dominated points, and later duplicates in
/// objective space (the first point in input order is kept).
Front nondominated_filter(const std::vector<FrontPoint>& points, std::string solver_tag = {});

/// Union of all fronts followed by nondominated_filter.
Front build_reference_front(const std::vector<Front>& fronts);

/// CSV with columns run_id, start_id, solver, x_1..x_n, f_1..f_m, phi, status.
void write_front_csv(std::ostream& out, const std::vector<FrontPoint>& points, int n, int m);
std::vector<FrontPoint> read_front_csv(std::istream& in);

}  // namespace mosqp
