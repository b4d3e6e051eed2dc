#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace mosqp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Maps x to a vector of values (objectives or constraints).
using VectorFunction = std::function<Vector(const Vector&)>;
/// Maps x to a Jacobian with one row per component of the matching VectorFunction.
using JacobianFunction = std::function<Matrix(const Vector&)>;

inline constexpr double kActiveTieTolerance = 1e-10;
inline constexpr double kFeasibilityTolerance = 1e-6;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A non-finite objective or constraint value.
class EvaluationError : public Error {
 public:
  enum class Kind { Objective, Constraint };

  EvaluationError(Kind kind, int index, const std::string& problem);

  Kind kind() const { return kind_; }
  int index() const { return index_; }

 private:
  Kind kind_;
  int index_;
};

struct EvalCounter {
  std::uint64_t num_f = 0;       // vector-objective evaluations
  std::uint64_t num_grad_f = 0;  // objective-Jacobian evaluations

  EvalCounter& operator+=(const EvalCounter& other) {
    num_f += other.num_f;
    num_grad_f += other.num_grad_f;
    return *this;
  }
  friend bool operator==(const EvalCounter&, const EvalCounter&) = default;
};

/// Raw description used to build a Problem.  Box bounds are given separately
/// from the general constraints; Problem appends them as 2n inequalities.
struct ProblemDefinition {
  std::string name;
  int num_objectives = 0;
  Vector lower;
  Vector upper;

  VectorFunction objectives;
  JacobianFunction objective_jacobian;  // empty -> forward differences

  int num_general_constraints = 0;
  int num_linear_constraints = 0;  // informational, counts within the general ones
  VectorFunction constraints;
  JacobianFunction constraint_jacobian;  // empty -> forward differences
};

/// Smooth vector objective with inequality constraints g(x) <= 0.
///
/// The constraint list seen by the algorithm is
///   [general constraints..., l_i - x_i ..., x_i - u_i ...]
/// so p = num_general_constraints + 2n.  Instances are immutable and may be
/// shared between threads.
class Problem {
 public:
  explicit Problem(ProblemDefinition def);

  const std::string& name() const { return def_.name; }
  int num_variables() const { return static_cast<int>(def_.lower.size()); }
  int num_objectives() const { return def_.num_objectives; }
  int num_constraints() const { return def_.num_general_constraints + 2 * num_variables(); }
  int num_general_constraints() const { return def_.num_general_constraints; }
  int num_linear_constraints() const { return def_.num_linear_constraints; }
  int num_nonlinear_constraints() const {
    return def_.num_general_constraints - def_.num_linear_constraints;
  }
  const Vector& lower() const { return def_.lower; }
  const Vector& upper() const { return def_.upper; }

  bool has_analytic_objective_gradients() const { return static_cast<bool>(def_.objective_jacobian); }
  bool has_analytic_constraint_gradients() const {
    return def_.num_general_constraints == 0 || static_cast<bool>(def_.constraint_jacobian);
  }

  // Uncounted, unchecked evaluations.  Use Evaluator inside a solver run.
  Vector objectives(const Vector& x) const;
  Matrix objective_jacobian(const Vector& x) const;
  Matrix objective_jacobian_fd(const Vector& x) const;
  Vector constraints(const Vector& x) const;
  Matrix constraint_jacobian(const Vector& x) const;
  Matrix constraint_jacobian_fd(const Vector& x) const;

  const ProblemDefinition& definition() const { return def_; }

 private:
  Vector general_constraints(const Vector& x) const;

  ProblemDefinition def_;
};

/// Forward difference Jacobian with step 1e-7 * max(1, |x_i|).
Matrix forward_difference_jacobian(const VectorFunction& fn, const Vector& x, const Vector& fx);

/// Per-run evaluation front end: counts objective work and rejects
/// non-finite values.  Not thread safe; one per run.
class Evaluator {
 public:
  explicit Evaluator(const Problem& problem) : problem_(&problem) {}

  const Problem& problem() const { return *problem_; }
  const EvalCounter& counter() const { return counter_; }

  Vector objectives(const Vector& x);
  Matrix objective_jacobian(const Vector& x);
  Vector constraints(const Vector& x);
  Matrix constraint_jacobian(const Vector& x);

 private:
  const Problem* problem_;
  EvalCounter counter_;
};

/// Phi(x) = max(0, g_1(x), ..., g_p(x)) together with the indices attaining it.
struct PenaltyValue {
  double phi = 0.0;
  std::vector<int> active_set;  // zero-based constraint indices

  bool feasible(double tol = kFeasibilityTolerance) const { return phi <= tol; }
};

PenaltyValue penalty_from_values(const Vector& g, double tie_tolerance = kActiveTieTolerance);
PenaltyValue evaluate_phi(const Problem& problem, const Vector& x);

/// Everything the algorithm needs at one point.
struct PointEvaluation {
  Vector x;
  Vector f;
  Matrix jac_f;
  Vector g;
  Matrix jac_g;
  PenaltyValue penalty;
};

PointEvaluation evaluate_point(Evaluator& eval, const Vector& x);

// Psi_{j,sigma}(x) = f_j(x) + sigma * Phi(x)
double merit(double f_j, double phi, double sigma);
double merit(const Problem& problem, const Vector& x, int j, double sigma);

/// Linearised approximation of the directional derivative of Phi:
///   max(0, max_{i in I(x)} g_i + grad g_i^T d) - Phi(x).
double phi_star(const Vector& g, const Matrix& jac_g, const PenaltyValue& active, const Vector& d);
double phi_star(const Problem& problem, const Vector& x, const Vector& d, const PenaltyValue& active);

// theta_{j,sigma}(x; d) = grad f_j^T d + sigma * Phi*(x; d)
double theta(double grad_f_dot_d, double phi_star_value, double sigma);
double theta(const Problem& problem, const Vector& x, const Vector& d, int j, double sigma);

}  // namespace mosqp
