#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mosqp/problem.hpp"
#include "mosqp/qp_subproblem.hpp"

namespace mosqp {

struct SolverConfig {
  double r = 0.5;       // backtracking factor
  double beta = 0.1;    // Armijo slope fraction
  double sigma0 = 1.0;  // initial penalty weight
  double epsilon = 1e-5;
  int max_iters = 500;
  double sigma_cap = 1e8;
  bool record_trace = true;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

enum class SolveStatus {
  StronglyCritical,
  WeaklyCriticalSuspected,
  MaxIterations,
  QpFailure,
  LineSearchFailure,
};

std::string_view to_string(SolveStatus status);
std::optional<SolveStatus> parse_status(std::string_view text);

/// One iteration of the method.  sigma is the weight the iteration started
/// with, sigma_next the weight after the penalty test; thetas and the
/// Armijo step use sigma_next.  alpha is empty on the terminating iterate.
struct IterateState {
  int k = 0;
  Vector x;
  Vector f;
  PenaltyValue phi;
  QpSolution qp;
  double sigma = 0.0;
  double sigma_next = 0.0;
  Vector thetas;
  std::optional<double> alpha;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::MaxIterations;
  Vector final_x;
  Vector final_f;
  double final_phi = 0.0;
  Vector lambda;
  Vector mu;
  double final_d_norm = 0.0;
  double final_sigma = 0.0;
  int iterations = 0;  // accepted steps
  std::vector<IterateState> trace;
  EvalCounter evals;
};

class PenaltyUpdateDegenerate : public Error {
 public:
  using Error::Error;
};

class LineSearchFailure : public Error {
 public:
  using Error::Error;
};

inline constexpr double kMinStepLength = 1e-16;
inline constexpr double kLambdaPositive = 1e-8;
inline constexpr double kPhiStarDegenerate = 1e-12;

/// Penalty weight for the next iteration.  Keeps sigma when x is feasible
/// (phi == 0) or every theta_j(sigma) <= -1/2 d^T d; otherwise returns
/// max{2 sigma, max_j (grad f_j^T d + 1/2 d^T d) / -Phi*(x; d)}.
double update_sigma(double sigma, double phi, std::span<const double> grad_f_dot_d, double phi_star_value,
                    double half_dd);

struct LineSearchResult {
  double alpha = 1.0;
  PointEvaluation point;  // full evaluation at x + alpha d
  int trials = 0;
};

/// First alpha in {1, r, r^2, ...} with
///   Psi_j(x + alpha d) - Psi_j(x) <= alpha beta theta_j   for all j.
/// Throws LineSearchFailure once alpha drops below 1e-16.
LineSearchResult line_search(Evaluator& eval, const PointEvaluation& at, const Vector& d, double sigma,
                             std::span<const double> thetas, const SolverConfig& config);

/// Convenience form that evaluates everything at x itself.
double line_search(const Problem& problem, const Vector& x, const Vector& d, double sigma,
                   const SolverConfig& config);

struct TerminalState {
  double d_norm = 0.0;
  double phi = 0.0;
  Vector lambda;
  bool sigma_capped = false;
};

SolveStatus classify_outcome(std::span<const IterateState> trace, const TerminalState& final_state,
                             const SolverConfig& config);

/// Runs the SQP method from x0 (which need not be feasible).
SolveOutcome solve(const Problem& problem, const Vector& x0, const SolverConfig& config = {});

/// Writes the trace as CSV: k, x_1..x_n, t, d_norm, sigma, alpha, phi, theta_1..theta_m.
void write_trace(std::ostream& out, std::span<const IterateState> trace);

}  // namespace mosqp
