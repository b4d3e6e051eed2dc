#include "mosqp/problem.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace mosqp {

EvaluationError::EvaluationError(Kind kind, int index, const std::string& problem)
    : Error(fmt::format("{}: non-finite {} value at index {}", problem,
                        kind == Kind::Objective ? "objective" : "constraint", index)),
      kind_(kind),
      index_(index) {}

Problem::Problem(ProblemDefinition def) : def_(std::move(def)) {
  if (def_.lower.size() == 0 || def_.lower.size() != def_.upper.size())
    throw std::invalid_argument(fmt::format("{}: bounds must be non-empty and of equal length", def_.name));
  for (Eigen::Index i = 0; i < def_.lower.size(); ++i) {
    if (!(def_.lower[i] < def_.upper[i]))
      throw std::invalid_argument(fmt::format("{}: lower bound not below upper bound at {}", def_.name, i));
  }
  if (def_.num_objectives < 1 || !def_.objectives)
    throw std::invalid_argument(fmt::format("{}: at least one objective required", def_.name));
  if (def_.num_general_constraints < 0 || def_.num_linear_constraints < 0 ||
      def_.num_linear_constraints > def_.num_general_constraints)
    throw std::invalid_argument(fmt::format("{}: inconsistent constraint counts", def_.name));
  if (def_.num_general_constraints > 0 && !def_.constraints)
    throw std::invalid_argument(fmt::format("{}: constraint function missing", def_.name));
}

Vector Problem::objectives(const Vector& x) const { return def_.objectives(x); }

Matrix Problem::objective_jacobian(const Vector& x) const {
  if (def_.objective_jacobian) return def_.objective_jacobian(x);
  return objective_jacobian_fd(x);
}

Matrix Problem::objective_jacobian_fd(const Vector& x) const {
  return forward_difference_jacobian(def_.objectives, x, def_.objectives(x));
}

Vector Problem::general_constraints(const Vector& x) const {
  if (def_.num_general_constraints == 0) return Vector(0);
  return def_.constraints(x);
}

Vector Problem::constraints(const Vector& x) const {
  const int n = num_variables();
  const int q = def_.num_general_constraints;
  Vector g(q + 2 * n);
  g.head(q) = general_constraints(x);
  g.segment(q, n) = def_.lower - x;
  g.tail(n) = x - def_.upper;
  return g;
}

Matrix Problem::constraint_jacobian(const Vector& x) const {
  const int n = num_variables();
  const int q = def_.num_general_constraints;
  Matrix jac = Matrix::Zero(q + 2 * n, n);
  if (q > 0) {
    jac.topRows(q) = def_.constraint_jacobian
                         ? def_.constraint_jacobian(x)
                         : forward_difference_jacobian(def_.constraints, x, def_.constraints(x));
  }
  jac.block(q, 0, n, n) = -Matrix::Identity(n, n);
  jac.block(q + n, 0, n, n) = Matrix::Identity(n, n);
  return jac;
}

Matrix Problem::constraint_jacobian_fd(const Vector& x) const {
  const VectorFunction all = [this](const Vector& y) { return constraints(y); };
  return forward_difference_jacobian(all, x, constraints(x));
}

Matrix forward_difference_jacobian(const VectorFunction& fn, const Vector& x, const Vector& fx) {
  Matrix jac(fx.size(), x.size());
  Vector y = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-7 * std::max(1.0, std::abs(x[i]));
    y[i] = x[i] + h;
    // Use the representable step, not the nominal one.
    const double step = y[i] - x[i];
    jac.col(i) = (fn(y) - fx) / step;
    y[i] = x[i];
  }
  return jac;
}

namespace {

void require_finite(const Vector& v, EvaluationError::Kind kind, const Problem& problem) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) throw EvaluationError(kind, static_cast<int>(i), problem.name());
  }
}

void require_finite(const Matrix& m, EvaluationError::Kind kind, const Problem& problem) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (!m.row(i).allFinite()) throw EvaluationError(kind, static_cast<int>(i), problem.name());
  }
}

}  // namespace

Vector Evaluator::objectives(const Vector& x) {
  ++counter_.num_f;
  Vector f = problem_->objectives(x);
  require_finite(f, EvaluationError::Kind::Objective, *problem_);
  return f;
}

Matrix Evaluator::objective_jacobian(const Vector& x) {
  ++counter_.num_grad_f;
  Matrix jac = problem_->objective_jacobian(x);
  require_finite(jac, EvaluationError::Kind::Objective, *problem_);
  return jac;
}

Vector Evaluator::constraints(const Vector& x) {
  Vector g = problem_->constraints(x);
  require_finite(g, EvaluationError::Kind::Constraint, *problem_);
  return g;
}

Matrix Evaluator::constraint_jacobian(const Vector& x) {
  Matrix jac = problem_->constraint_jacobian(x);
  require_finite(jac, EvaluationError::Kind::Constraint, *problem_);
  return jac;
}

PenaltyValue penalty_from_values(const Vector& g, double tie_tolerance) {
  PenaltyValue out;
  for (Eigen::Index i = 0; i < g.size(); ++i) out.phi = std::max(out.phi, g[i]);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (g[i] >= out.phi - tie_tolerance) out.active_set.push_back(static_cast<int>(i));
  }
  return out;
}

PenaltyValue evaluate_phi(const Problem& problem, const Vector& x) {
  if (x.size() != problem.num_variables())
    throw std::invalid_argument(fmt::format("{}: point has dimension {}, expected {}", problem.name(),
                                            x.size(), problem.num_variables()));
  const Vector g = problem.constraints(x);
  require_finite(g, EvaluationError::Kind::Constraint, problem);
  return penalty_from_values(g);
}

PointEvaluation evaluate_point(Evaluator& eval, const Vector& x) {
  PointEvaluation p;
  p.x = x;
  p.f = eval.objectives(x);
  p.jac_f = eval.objective_jacobian(x);
  p.g = eval.constraints(x);
  p.jac_g = eval.constraint_jacobian(x);
  p.penalty = penalty_from_values(p.g);
  return p;
}

double merit(double f_j, double phi, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("merit: penalty weight must be positive");
  return f_j + sigma * phi;
}

double merit(const Problem& problem, const Vector& x, int j, double sigma) {
  const Vector f = problem.objectives(x);
  if (!std::isfinite(f[j])) throw EvaluationError(EvaluationError::Kind::Objective, j, problem.name());
  return merit(f[j], evaluate_phi(problem, x).phi, sigma);
}

double phi_star(const Vector& g, const Matrix& jac_g, const PenaltyValue& active, const Vector& d) {
  double best = 0.0;
  for (int i : active.active_set) best = std::max(best, g[i] + jac_g.row(i).dot(d));
  return best - active.phi;
}

double phi_star(const Problem& problem, const Vector& x, const Vector& d, const PenaltyValue& active) {
  const Vector g = problem.constraints(x);
  require_finite(g, EvaluationError::Kind::Constraint, problem);
  return phi_star(g, problem.constraint_jacobian(x), active, d);
}

double theta(double grad_f_dot_d, double phi_star_value, double sigma) {
  return grad_f_dot_d + sigma * phi_star_value;
}

double theta(const Problem& problem, const Vector& x, const Vector& d, int j, double sigma) {
  const PenaltyValue active = evaluate_phi(problem, x);
  const Matrix jac_f = problem.objective_jacobian(x);
  return theta(jac_f.row(j).dot(d), phi_star(problem, x, d, active), sigma);
}

}  // namespace mosqp
